#pragma once

#include <optional>
#include <vector>

#include "starfield/symbols/calculus.hpp"

namespace starfield::star {

using symbols::PolynomialSymbol;

// f *_W g = sum_k (1/k!) d^k f . dbar^k g
PolynomialSymbol wick_star(const PolynomialSymbol& f, const PolynomialSymbol& g);
// f *_aW g = sum_k ((-1)^|k|/k!) dbar^k f . d^k g
PolynomialSymbol antiwick_star(const PolynomialSymbol& f, const PolynomialSymbol& g);

PolynomialSymbol wick_bracket(const PolynomialSymbol& f, const PolynomialSymbol& g);
PolynomialSymbol antiwick_bracket(const PolynomialSymbol& f, const PolynomialSymbol& g);

// Wick bracket {{f, g}}_W written with the anti-Wick symbol f_bar of f.
// max_order truncates the series (diagnostics only).
PolynomialSymbol wick_bracket_complementary(const PolynomialSymbol& f_bar,
                                            const PolynomialSymbol& g,
                                            std::optional<unsigned> max_order = std::nullopt);
// Anti-Wick bracket {{f, g}}_aW written with the Wick symbol f_tilde of f.
PolynomialSymbol antiwick_bracket_complementary(const PolynomialSymbol& f_tilde,
                                                const PolynomialSymbol& g,
                                                std::optional<unsigned> max_order = std::nullopt);

// Surface-derivative rewriting of (d^k f)(dbar^n g):
//   sum_j C(n,j) (-1)^(n-j) dbar^j( dbar^(n-j) d^k f . g ).
// With conjugate_roles the two variables trade places.
struct SurfaceExpansion {
  struct Entry {
    unsigned outer_order;
    PolynomialSymbol inner;
    double weight;
  };
  std::vector<Entry> entries;
  bool conjugate_roles = false;
  std::size_t mode = 0;

  PolynomialSymbol apply(const PolynomialSymbol& g) const;
};

SurfaceExpansion shift_derivatives(const PolynomialSymbol& f, unsigned k, unsigned n,
                                   bool conjugate_roles = false, std::size_t mode = 0);

// Left-hand side (d^k f)(dbar^n g) of the same identity.
PolynomialSymbol shift_derivatives_lhs(const PolynomialSymbol& f, const PolynomialSymbol& g,
                                       unsigned k, unsigned n, bool conjugate_roles = false,
                                       std::size_t mode = 0);

// Calls fn(m) for every multi-index with 0 <= m_j <= bound_j.
template <class Fn>
void for_each_multi_index(const std::vector<unsigned>& bound, Fn&& fn) {
  std::vector<unsigned> m(bound.size(), 0u);
  while (true) {
    fn(static_cast<const std::vector<unsigned>&>(m));
    std::size_t j = 0;
    for (; j < m.size(); ++j) {
      if (m[j] < bound[j]) {
        ++m[j];
        break;
      }
      m[j] = 0;
    }
    if (j == m.size()) return;
  }
}

}  // namespace starfield::star
