#include "starfield/eom/milburn.hpp"

#include <map>

#include "starfield/eom/derive.hpp"
#include "starfield/star/star_product.hpp"

namespace starfield::eom {

using symbols::Exponents;
using symbols::GradedOrder;
using symbols::SymbolKind;

namespace {

PolynomialSymbol number_symbol(double scale, SymbolKind kind) {
  return PolynomialSymbol::monomial(1, 1, scale, kind);
}

}  // namespace

PolynomialSymbol rotating_frame_wick(const PolynomialSymbol& h_wick, double omega0) {
  if (h_wick.kind() != SymbolKind::Wick) throw ComplementarityError("expected a Wick symbol");
  return h_wick - number_symbol(omega0, SymbolKind::Wick);
}

PolynomialSymbol rotating_frame_antiwick(const PolynomialSymbol& h_antiwick, double omega0) {
  if (h_antiwick.kind() != SymbolKind::AntiWick) {
    throw ComplementarityError("expected an anti-Wick symbol");
  }
  return symbols::berezin_inverse(
      rotating_frame_wick(symbols::berezin_forward(h_antiwick), omega0));
}

EomSeries classical_rotating_frame_liouville(double mu, double omega0) {
  const Complex c{0.0, 2.0 * mu * omega0};
  std::vector<ComplexSurfaceTerm> terms;
  if (c != Complex{}) {
    terms.push_back({1, symbols::DerivativeMultiIndex({1}, {0}), std::nullopt,
                     PolynomialSymbol::monomial(2, 1, 1.0, SymbolKind::Classical), c});
    terms.push_back({1, symbols::DerivativeMultiIndex({0}, {1}), std::nullopt,
                     PolynomialSymbol::monomial(1, 2, 1.0, SymbolKind::Classical), -c});
  }
  return EomSeries(Scheme::QFunction, 1, std::move(terms));
}

double drift_distance(const EomSeries& a, const EomSeries& b) {
  std::map<Exponents, std::pair<PolynomialSymbol, PolynomialSymbol>, GradedOrder> joined;
  for (auto& [o, p] : group_by_outer(a.block(1).complex_terms())) {
    joined.try_emplace(o, PolynomialSymbol(a.num_modes()), PolynomialSymbol(a.num_modes()))
        .first->second.first = p;
  }
  for (auto& [o, p] : group_by_outer(b.block(1).complex_terms())) {
    joined.try_emplace(o, PolynomialSymbol(b.num_modes()), PolynomialSymbol(b.num_modes()))
        .first->second.second = p;
  }
  double d = 0.0;
  for (const auto& [o, pq] : joined) {
    d = std::max(d, symbols::max_coefficient_distance(pq.first, pq.second));
  }
  return d;
}

MilburnScenario milburn_scenario(double mu, double omega0) {
  if (!(mu >= 0.0) || !(omega0 > 0.0)) {
    throw ConfigError("milburn_scenario needs mu >= 0 and omega0 > 0");
  }
  const PolynomialSymbol n_wick = number_symbol(1.0, SymbolKind::Wick);
  const PolynomialSymbol n2_wick = star::wick_star(n_wick, n_wick);
  const PolynomialSymbol free_wick = n_wick * Complex{omega0};
  const PolynomialSymbol free_antiwick = number_symbol(omega0, SymbolKind::AntiWick);

  PolynomialSymbol h_classical =
      number_symbol(omega0, SymbolKind::Classical) +
      PolynomialSymbol::monomial(2, 2, omega0 * mu, SymbolKind::Classical);

  // The frame change only touches the free part; applying it there keeps the
  // interaction coefficients free of cancellation error.
  const PolynomialSymbol int_wick = n2_wick * Complex{omega0 * mu};
  PolynomialSymbol h_lab_w = free_wick + int_wick;
  PolynomialSymbol h_int_w = rotating_frame_wick(free_wick, omega0) + int_wick;
  PolynomialSymbol h_int_aw = symbols::berezin_inverse(h_int_w);

  const PolynomialSymbol int_antiwick = PolynomialSymbol::monomial(2, 2, omega0 * mu, SymbolKind::AntiWick);
  PolynomialSymbol h_aw_lab = free_antiwick + int_antiwick;
  PolynomialSymbol h_aw_rot = rotating_frame_antiwick(free_antiwick, omega0) + int_antiwick;

  EomSeries eom_milburn = derive_q_eom(h_int_aw);
  EomSeries eom_antiwick = derive_q_eom(h_aw_rot);
  EomSeries eom_classical = classical_rotating_frame_liouville(mu, omega0);

  const bool artifact = drift_distance(eom_milburn, eom_classical) > 0.0;
  const bool matches = drift_distance(eom_antiwick, eom_classical) == 0.0;

  return MilburnScenario{mu,
                         omega0,
                         std::move(h_classical),
                         std::move(h_lab_w),
                         std::move(h_int_w),
                         std::move(h_int_aw),
                         std::move(h_aw_lab),
                         std::move(h_aw_rot),
                         std::move(eom_milburn),
                         std::move(eom_antiwick),
                         std::move(eom_classical),
                         artifact,
                         matches};
}

}  // namespace starfield::eom
