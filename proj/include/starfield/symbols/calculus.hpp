#pragma once

#include <span>
#include <vector>

#include "starfield/symbols/combinatorics.hpp"
#include "starfield/symbols/polynomial.hpp"

namespace starfield::symbols {

enum class Wirtinger { Alpha, AlphaStar };

// alpha_j and alpha*_j as symbols on `modes` modes.
PolynomialSymbol alpha(std::size_t mode = 0, std::size_t modes = 1,
                       SymbolKind kind = SymbolKind::Untyped);
PolynomialSymbol alpha_star(std::size_t mode = 0, std::size_t modes = 1,
                            SymbolKind kind = SymbolKind::Untyped);

template <class C>
Polynomial<C> differentiate(const Polynomial<C>& f, const DerivativeIndex<C>& idx) {
  if (idx.modes() != f.num_modes()) throw DimensionMismatch("derivative index has wrong mode count");
  Polynomial<C> out(f.num_modes(), f.kind());
  for (const auto& [e, c] : f.terms()) {
    Exponents r(e.modes());
    double factor = 1.0;
    bool vanishes = false;
    for (std::size_t j = 0; j < e.modes() && !vanishes; ++j) {
      if (e.first[j] < idx.first[j] || e.second[j] < idx.second[j]) {
        vanishes = true;
        break;
      }
      factor *= static_cast<double>(falling_factorial(e.first[j], idx.first[j]));
      factor *= static_cast<double>(falling_factorial(e.second[j], idx.second[j]));
      r.first[j] = e.first[j] - idx.first[j];
      r.second[j] = e.second[j] - idx.second[j];
    }
    if (!vanishes) out.add_term(r, c * factor);
  }
  return out;
}

// Order-n derivative in one complex variable of one mode.
PolynomialSymbol differentiate(const PolynomialSymbol& f, Wirtinger which, unsigned order,
                               std::size_t mode = 0);

// Wick -> anti-Wick: exp(-sum_j d_alpha_j d_alpha*_j).
PolynomialSymbol berezin_inverse(const PolynomialSymbol& f);
// Anti-Wick -> Wick: exp(+sum_j d_alpha_j d_alpha*_j).
PolynomialSymbol berezin_forward(const PolynomialSymbol& f);

struct RealDerivativeTerm {
  unsigned q_order;
  unsigned p_order;
  Complex coefficient;
};

// d_alpha^n (or d_alpha*^n) as a combination of d_q^a d_p^b, hbar = 1.
std::vector<RealDerivativeTerm> complex_to_real_expansion(unsigned n,
                                                          Wirtinger which = Wirtinger::Alpha);

struct RealDerivativeComponent {
  RealDerivativeIndex index;
  Complex coefficient;
};

// Full multi-mode complex derivative expanded in real derivatives.
std::vector<RealDerivativeComponent> expand_derivative(const DerivativeMultiIndex& idx);

// Substitutes alpha_j = (q_j + i p_j)/sqrt2.
RealSymbol to_real_variables(const PolynomialSymbol& f);
// Substitutes q_j = (alpha_j + alpha*_j)/sqrt2, p_j = -i(alpha_j - alpha*_j)/sqrt2.
PolynomialSymbol to_complex_variables(const RealSymbol& f);

// f at alpha_j = point_j, alpha*_j = conj(point_j).
Complex evaluate(const PolynomialSymbol& f, std::span<const Complex> point);
Complex evaluate(const RealSymbol& f, std::span<const double> q, std::span<const double> p);

// Complex conjugate of the function: swaps alpha and alpha*, conjugates coefficients.
PolynomialSymbol adjoint(const PolynomialSymbol& f);
bool is_real_symbol(const PolynomialSymbol& f, double tol = 0.0);

}  // namespace starfield::symbols
