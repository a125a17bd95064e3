#include "starfield/pde/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "starfield/star/star_product.hpp"
#include "starfield/symbols/calculus.hpp"

namespace starfield::pde {

using symbols::PolynomialSymbol;
using symbols::SymbolKind;

namespace {

SymbolKind partner_kind(DistributionKind kind) {
  return kind == DistributionKind::Q ? SymbolKind::AntiWick : SymbolKind::Wick;
}

}  // namespace

Complex expectation(const PolynomialSymbol& a, const PhaseSpaceGrid& grid) {
  if (a.num_modes() != 1) throw DimensionMismatch("grid expectation is single-mode only");
  const SymbolKind want = partner_kind(grid.kind());
  if (a.kind() != want) {
    throw ComplementarityError("expectation over a " + std::string(to_string(grid.kind())) +
                               "-function needs the " + std::string(symbols::to_string(want)) +
                               " symbol of the observable, got " +
                               std::string(symbols::to_string(a.kind())));
  }
  const symbols::RealSymbol f = symbols::to_real_variables(a);
  const GridSpec& s = grid.spec();
  const unsigned dq = f.first_degree(0);
  const unsigned dp = f.second_degree(0);
  std::vector<Complex> rows(s.nq);
  const auto nq = static_cast<long>(s.nq);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nq; ++i) {
    std::vector<double> qp(dq + 1, 1.0), pp(dp + 1, 1.0);
    const double q = s.q(static_cast<std::size_t>(i));
    for (unsigned k = 1; k <= dq; ++k) qp[k] = qp[k - 1] * q;
    Complex row{};
    for (std::size_t j = 0; j < s.np; ++j) {
      const double p = s.p(j);
      for (unsigned k = 1; k <= dp; ++k) pp[k] = pp[k - 1] * p;
      Complex v{};
      for (const auto& [e, c] : f.terms()) v += c * (qp[e.first[0]] * pp[e.second[0]]);
      row += v * grid.at(static_cast<std::size_t>(i), j);
    }
    rows[static_cast<std::size_t>(i)] = row;
  }
  Complex sum{};
  for (const Complex& r : rows) sum += r;
  return sum * (s.dq() * s.dp() / (2.0 * std::numbers::pi));
}

PolynomialSymbol complementary_symbol(const PolynomialSymbol& a, DistributionKind kind) {
  const SymbolKind want = partner_kind(kind);
  if (a.kind() == want) return a;
  if (a.kind() == SymbolKind::Wick) return symbols::berezin_inverse(a);
  if (a.kind() == SymbolKind::AntiWick) return symbols::berezin_forward(a);
  throw ComplementarityError("observable must be tagged wick or antiwick, got " +
                             std::string(symbols::to_string(a.kind())));
}

double EhrenfestReport::max_residual() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.residual);
  return m;
}

EhrenfestReport ehrenfest_residual(const PolynomialSymbol& a, const PolynomialSymbol& h,
                                   const Trajectory& trajectory) {
  if (a.kind() != h.kind() || (a.kind() != SymbolKind::Wick && a.kind() != SymbolKind::AntiWick)) {
    throw ComplementarityError("observable and Hamiltonian must share one kind, wick or antiwick");
  }
  const auto& snaps = trajectory.snapshots;
  if (snaps.size() < 3) throw ConfigError("Ehrenfest check needs at least three snapshots");

  EhrenfestReport report;
  report.bracket = a.kind() == SymbolKind::Wick ? star::wick_bracket(a, h) : star::antiwick_bracket(a, h);
  report.bracket = report.bracket.with_kind(a.kind());
  report.bracket_is_zero = report.bracket.empty();

  const DistributionKind kind = snaps.front().grid.kind();
  const PolynomialSymbol a_c = complementary_symbol(a, kind);
  const PolynomialSymbol b_c =
      report.bracket_is_zero ? PolynomialSymbol(a.num_modes(), partner_kind(kind))
                             : complementary_symbol(report.bracket, kind);

  for (const auto& s : snaps) report.expectations.push_back(expectation(a_c, s.grid));

  const Complex minus_i(0.0, -1.0);
  for (std::size_t k = 1; k + 1 < snaps.size(); ++k) {
    const double h1 = snaps[k].time - snaps[k - 1].time;
    const double h2 = snaps[k + 1].time - snaps[k].time;
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw ConfigError("snapshot times must be strictly increasing");
    // Three-point derivative, exact for quadratics on uneven spacing.
    const Complex measured = -h2 / (h1 * (h1 + h2)) * report.expectations[k - 1] +
                             (h2 - h1) / (h1 * h2) * report.expectations[k] +
                             h1 / (h2 * (h1 + h2)) * report.expectations[k + 1];
    const Complex predicted =
        report.bracket_is_zero ? Complex{} : minus_i * expectation(b_c, snaps[k].grid);
    report.samples.push_back({snaps[k].time, measured, predicted, std::abs(measured - predicted)});
  }
  return report;
}

}  // namespace starfield::pde
