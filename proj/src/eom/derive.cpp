#include "starfield/eom/derive.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "starfield/star/star_product.hpp"

namespace starfield::eom {

using symbols::DerivativeMultiIndex;
using symbols::Exponents;
using symbols::GradedOrder;
using symbols::RealDerivativeIndex;
using symbols::SymbolKind;

namespace {

constexpr Complex kI{0.0, 1.0};

void require_scheme_kind(const PolynomialSymbol& h, Scheme scheme) {
  const bool q = scheme == Scheme::QFunction;
  const SymbolKind wanted = q ? SymbolKind::AntiWick : SymbolKind::Wick;
  if (h.kind() == wanted || h.kind() == SymbolKind::Classical) return;
  if (h.kind() == SymbolKind::Untyped) {
    throw ComplementarityError(
        std::string("the Hamiltonian symbol carries no quantization tag; the ") +
        (q ? "Q-function equation needs the anti-Wick symbol"
           : "P-function equation needs the Wick symbol"));
  }
  throw ComplementarityError(
      q ? "the Q-function equation needs the anti-Wick symbol of H, got a Wick symbol. "
          "Pairing a Wick (normal-ordered) Hamiltonian with the Husimi function is the "
          "Milburn pitfall: apply berezin_inverse first"
        : "the P-function equation needs the Wick symbol of H, got an anti-Wick symbol: "
          "apply berezin_forward first");
}

EomSeries derive(const PolynomialSymbol& h, Scheme scheme) {
  require_scheme_kind(h, scheme);
  const std::size_t modes = h.num_modes();
  std::vector<unsigned> bound(modes);
  for (std::size_t j = 0; j < modes; ++j) bound[j] = std::max(h.first_degree(j), h.second_degree(j));

  std::vector<ComplexSurfaceTerm> terms;
  star::for_each_multi_index(bound, [&](const std::vector<unsigned>& m) {
    unsigned n = 0;
    for (unsigned x : m) n += x;
    if (n == 0) return;
    const double inv = 1.0 / static_cast<double>(symbols::multi_factorial(m));
    const double parity = n % 2 == 0 ? 1.0 : -1.0;
    // Scalar on the dbar^n(d^n H .) term; the d^n(dbar^n H .) term has the opposite sign.
    const Complex a = scheme == Scheme::QFunction ? -kI * inv : kI * parity * inv;

    DerivativeMultiIndex d(modes), dbar(modes);
    d.first = m;
    dbar.second = m;
    PolynomialSymbol dh = symbols::differentiate(h, d);
    PolynomialSymbol dbarh = symbols::differentiate(h, dbar);
    if (!dh.empty()) terms.push_back({n, dbar, d, std::move(dh), a});
    if (!dbarh.empty()) terms.push_back({n, d, dbar, std::move(dbarh), -a});
  });
  return EomSeries(scheme, modes, std::move(terms), h);
}

}  // namespace

EomSeries derive_q_eom(const PolynomialSymbol& h_antiwick) {
  return derive(h_antiwick, Scheme::QFunction);
}

EomSeries derive_p_eom(const PolynomialSymbol& h_wick) { return derive(h_wick, Scheme::PFunction); }

EomSeries derive_eom(const PolynomialSymbol& h, Scheme scheme) { return derive(h, scheme); }

EomSeries to_real_form(const EomSeries& eom) {
  if (eom.variable_form() != VariableForm::Complex) {
    throw ConfigError("to_real_form: series is already in real form");
  }
  const std::size_t modes = eom.num_modes();
  std::optional<RealSymbol> h_real;
  if (eom.generator()) h_real = symbols::to_real_variables(*eom.generator());

  // Generated terms: (order, outer, inner derivative) -> scalar.
  using Key = std::tuple<unsigned, Exponents, Exponents>;
  auto key_less = [](const Key& a, const Key& b) {
    const GradedOrder lt;
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    if (lt(std::get<1>(a), std::get<1>(b))) return true;
    if (lt(std::get<1>(b), std::get<1>(a))) return false;
    return lt(std::get<2>(a), std::get<2>(b));
  };
  std::map<Key, Complex, decltype(key_less)> generated(key_less);
  // Hand-built terms: (order, outer) -> inner polynomial.
  std::map<std::pair<unsigned, Exponents>, RealSymbol,
           bool (*)(const std::pair<unsigned, Exponents>&, const std::pair<unsigned, Exponents>&)>
      plain([](const std::pair<unsigned, Exponents>& a, const std::pair<unsigned, Exponents>& b) {
        if (a.first != b.first) return a.first < b.first;
        return GradedOrder{}(a.second, b.second);
      });

  // Each generated pair dbar^m(d^m H .) - d^m(dbar^m H .) is expanded as a
  // whole, even when one member vanished in complex form, so that the real
  // scalars are exactly the C^n_{k,m} coefficients.
  std::vector<ComplexSurfaceTerm> paired;
  for (const auto& t : eom.complex_terms()) {
    if (!t.inner_derivative || !h_real) continue;
    paired.push_back(t);
    const bool has_partner = std::any_of(
        eom.complex_terms().begin(), eom.complex_terms().end(), [&](const ComplexSurfaceTerm& u) {
          return u.inner_derivative && u.outer == *t.inner_derivative && *u.inner_derivative == t.outer;
        });
    if (!has_partner) {
      paired.push_back({t.order, DerivativeMultiIndex(*t.inner_derivative), t.outer,
                        PolynomialSymbol(modes), -t.scalar});
    }
  }
  for (const auto& t : paired) {
    const auto inner = symbols::expand_derivative(*t.inner_derivative);
    for (const auto& o : symbols::expand_derivative(t.outer)) {
      for (const auto& i : inner) {
        generated[Key{t.order, o.index, i.index}] += t.scalar * o.coefficient * i.coefficient;
      }
    }
  }

  for (const auto& t : eom.complex_terms()) {
    if (t.inner_derivative && h_real) continue;
    const auto outer = symbols::expand_derivative(t.outer);
    {
      const RealSymbol inner = symbols::to_real_variables(t.inner_coeff);
      for (const auto& o : outer) {
        auto it = plain.try_emplace({t.order, o.index}, modes).first;
        it->second += inner.with_kind(SymbolKind::Untyped) * (t.scalar * o.coefficient);
      }
    }
  }

  double largest = 0.0;
  for (const auto& [k, s] : generated) largest = std::max(largest, std::abs(s));
  std::vector<RealSurfaceTerm> terms;
  for (const auto& [k, s] : generated) {
    // Vanishing C^n_{k,m} cancel exactly; the relative floor only guards rounding.
    if (std::abs(s) <= 1e-14 * largest) continue;
    const RealDerivativeIndex inner_idx(std::get<2>(k));
    RealSymbol coeff = symbols::differentiate(*h_real, inner_idx);
    if (coeff.empty()) continue;
    terms.push_back({std::get<0>(k), RealDerivativeIndex(std::get<1>(k)), inner_idx,
                     std::move(coeff), s});
  }
  for (auto& [k, p] : plain) {
    if (p.empty()) continue;
    terms.push_back({k.first, RealDerivativeIndex(k.second), std::nullopt, std::move(p), 1.0});
  }
  return EomSeries(eom.scheme(), modes, std::move(terms), eom.generator());
}

}  // namespace starfield::eom
