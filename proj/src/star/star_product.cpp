#include "starfield/star/star_product.hpp"

#include <algorithm>
#include <string>

namespace starfield::star {

using symbols::DerivativeMultiIndex;
using symbols::SymbolKind;
using symbols::Wirtinger;

namespace {

void require_same_modes(const PolynomialSymbol& f, const PolynomialSymbol& g) {
  if (f.num_modes() != g.num_modes()) {
    throw DimensionMismatch("star product operands have " + std::to_string(f.num_modes()) +
                            " and " + std::to_string(g.num_modes()) + " modes");
  }
}

void require_kind(const PolynomialSymbol& f, SymbolKind allowed, const char* where) {
  if (f.kind() != allowed && f.kind() != SymbolKind::Untyped) {
    throw ComplementarityError(std::string(where) + ": expected a " +
                               std::string(symbols::to_string(allowed)) +
                               " or untyped symbol, got " +
                               std::string(symbols::to_string(f.kind())));
  }
}

SymbolKind result_kind(const PolynomialSymbol& f, const PolynomialSymbol& g, SymbolKind k) {
  return (f.kind() == k || g.kind() == k) ? k : SymbolKind::Untyped;
}

// d^m (first = true) or dbar^m on all modes.
DerivativeMultiIndex derivative_index(const std::vector<unsigned>& m, bool on_alpha) {
  DerivativeMultiIndex idx(m.size());
  (on_alpha ? idx.first : idx.second) = m;
  return idx;
}

double inverse_multi_factorial(const std::vector<unsigned>& m) {
  return 1.0 / static_cast<double>(symbols::multi_factorial(m));
}

unsigned total(const std::vector<unsigned>& m) {
  unsigned s = 0;
  for (unsigned x : m) s += x;
  return s;
}

// sum_k w(k) d_{left}^k f . d_{right}^k g, left/right chosen by alpha_on_f.
PolynomialSymbol star_series(const PolynomialSymbol& f, const PolynomialSymbol& g,
                             bool alpha_on_f, bool alternating) {
  const std::size_t modes = f.num_modes();
  std::vector<unsigned> bound(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    bound[j] = alpha_on_f ? std::min(f.first_degree(j), g.second_degree(j))
                          : std::min(f.second_degree(j), g.first_degree(j));
  }
  const PolynomialSymbol fu = f.with_kind(SymbolKind::Untyped);
  const PolynomialSymbol gu = g.with_kind(SymbolKind::Untyped);
  PolynomialSymbol out(modes);
  for_each_multi_index(bound, [&](const std::vector<unsigned>& k) {
    const double sign = (alternating && total(k) % 2 == 1) ? -1.0 : 1.0;
    const PolynomialSymbol df = symbols::differentiate(fu, derivative_index(k, alpha_on_f));
    if (df.empty()) return;
    const PolynomialSymbol dg = symbols::differentiate(gu, derivative_index(k, !alpha_on_f));
    if (dg.empty()) return;
    out += (df * dg) * Complex{sign * inverse_multi_factorial(k)};
  });
  return out;
}

// sum_{|m|>=1} c(m) [dbar^m(d^m h . g) - d^m(dbar^m h . g)]
PolynomialSymbol complementary_series(const PolynomialSymbol& h, const PolynomialSymbol& g,
                                      bool alternating, std::optional<unsigned> max_order) {
  const std::size_t modes = h.num_modes();
  std::vector<unsigned> bound(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    bound[j] = std::max(h.first_degree(j), h.second_degree(j));
  }
  const PolynomialSymbol hu = h.with_kind(SymbolKind::Untyped);
  const PolynomialSymbol gu = g.with_kind(SymbolKind::Untyped);
  PolynomialSymbol out(modes);
  for_each_multi_index(bound, [&](const std::vector<unsigned>& m) {
    const unsigned n = total(m);
    if (n == 0 || (max_order && n > *max_order)) return;
    const double sign = (alternating && n % 2 == 1) ? -1.0 : 1.0;
    const Complex c{sign * inverse_multi_factorial(m)};
    const DerivativeMultiIndex d = derivative_index(m, true);
    const DerivativeMultiIndex dbar = derivative_index(m, false);
    const PolynomialSymbol dh = symbols::differentiate(hu, d);
    const PolynomialSymbol dbarh = symbols::differentiate(hu, dbar);
    if (!dh.empty()) out += symbols::differentiate(dh * gu, dbar) * c;
    if (!dbarh.empty()) out -= symbols::differentiate(dbarh * gu, d) * c;
  });
  return out;
}

}  // namespace

PolynomialSymbol wick_star(const PolynomialSymbol& f, const PolynomialSymbol& g) {
  require_same_modes(f, g);
  require_kind(f, SymbolKind::Wick, "wick_star");
  require_kind(g, SymbolKind::Wick, "wick_star");
  return star_series(f, g, true, false).with_kind(result_kind(f, g, SymbolKind::Wick));
}

PolynomialSymbol antiwick_star(const PolynomialSymbol& f, const PolynomialSymbol& g) {
  require_same_modes(f, g);
  require_kind(f, SymbolKind::AntiWick, "antiwick_star");
  require_kind(g, SymbolKind::AntiWick, "antiwick_star");
  return star_series(f, g, false, true).with_kind(result_kind(f, g, SymbolKind::AntiWick));
}

PolynomialSymbol wick_bracket(const PolynomialSymbol& f, const PolynomialSymbol& g) {
  return wick_star(f, g) - wick_star(g, f);
}

PolynomialSymbol antiwick_bracket(const PolynomialSymbol& f, const PolynomialSymbol& g) {
  return antiwick_star(f, g) - antiwick_star(g, f);
}

PolynomialSymbol wick_bracket_complementary(const PolynomialSymbol& f_bar,
                                            const PolynomialSymbol& g,
                                            std::optional<unsigned> max_order) {
  require_same_modes(f_bar, g);
  if (f_bar.kind() != SymbolKind::AntiWick) {
    throw ComplementarityError(
        "wick_bracket_complementary: first operand must be the anti-Wick symbol "
        "(apply berezin_inverse to the Wick symbol first)");
  }
  require_kind(g, SymbolKind::Wick, "wick_bracket_complementary");
  return complementary_series(f_bar, g, false, max_order).with_kind(SymbolKind::Wick);
}

PolynomialSymbol antiwick_bracket_complementary(const PolynomialSymbol& f_tilde,
                                                const PolynomialSymbol& g,
                                                std::optional<unsigned> max_order) {
  require_same_modes(f_tilde, g);
  if (f_tilde.kind() != SymbolKind::Wick) {
    throw ComplementarityError(
        "antiwick_bracket_complementary: first operand must be the Wick symbol "
        "(apply berezin_forward to the anti-Wick symbol first)");
  }
  require_kind(g, SymbolKind::AntiWick, "antiwick_bracket_complementary");
  return (-complementary_series(f_tilde, g, true, max_order)).with_kind(SymbolKind::AntiWick);
}

PolynomialSymbol SurfaceExpansion::apply(const PolynomialSymbol& g) const {
  const Wirtinger outer = conjugate_roles ? Wirtinger::Alpha : Wirtinger::AlphaStar;
  PolynomialSymbol out(g.num_modes());
  const PolynomialSymbol gu = g.with_kind(SymbolKind::Untyped);
  for (const auto& e : entries) {
    out += symbols::differentiate(e.inner * gu, outer, e.outer_order, mode) * Complex{e.weight};
  }
  return out;
}

SurfaceExpansion shift_derivatives(const PolynomialSymbol& f, unsigned k, unsigned n,
                                   bool conjugate_roles, std::size_t mode) {
  const Wirtinger first = conjugate_roles ? Wirtinger::AlphaStar : Wirtinger::Alpha;
  const Wirtinger second = conjugate_roles ? Wirtinger::Alpha : Wirtinger::AlphaStar;
  const PolynomialSymbol dk =
      symbols::differentiate(f.with_kind(SymbolKind::Untyped), first, k, mode);
  SurfaceExpansion s;
  s.conjugate_roles = conjugate_roles;
  s.mode = mode;
  for (unsigned j = 0; j <= n; ++j) {
    const double sign = (n - j) % 2 == 0 ? 1.0 : -1.0;
    s.entries.push_back({j, symbols::differentiate(dk, second, n - j, mode),
                         sign * static_cast<double>(symbols::binomial(n, j))});
  }
  return s;
}

PolynomialSymbol shift_derivatives_lhs(const PolynomialSymbol& f, const PolynomialSymbol& g,
                                       unsigned k, unsigned n, bool conjugate_roles,
                                       std::size_t mode) {
  require_same_modes(f, g);
  const Wirtinger first = conjugate_roles ? Wirtinger::AlphaStar : Wirtinger::Alpha;
  const Wirtinger second = conjugate_roles ? Wirtinger::Alpha : Wirtinger::AlphaStar;
  return symbols::differentiate(f.with_kind(SymbolKind::Untyped), first, k, mode) *
         symbols::differentiate(g.with_kind(SymbolKind::Untyped), second, n, mode);
}

}  // namespace starfield::star
