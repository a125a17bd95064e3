#include "starfield/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "starfield/pde/stencil.hpp"

namespace starfield::oracle {

namespace {

double log_term(unsigned n, double x) {
  return static_cast<double>(n) * std::log(x) - std::lgamma(static_cast<double>(n) + 1.0);
}

double grid_max_abs_alpha(const pde::GridSpec& s) {
  const double q = std::max(std::abs(s.q_min), std::abs(s.q_max));
  const double p = std::max(std::abs(s.p_min), std::abs(s.p_max));
  return std::hypot(q, p) / std::numbers::sqrt2;
}

std::vector<Complex> phase_table(double tau, double mu, unsigned n) {
  std::vector<Complex> phase(n);
  for (unsigned k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    phase[k] = std::polar(1.0, std::remainder(mu * tau * kk * (kk - 1.0), 2.0 * std::numbers::pi));
  }
  return phase;
}

double series_q(Complex a, Complex alpha0, const std::vector<Complex>& phase) {
  const Complex z = std::conj(alpha0) * a;
  const double x = std::abs(z);
  const double a0sq = std::norm(alpha0);
  if (x == 0.0) return std::exp(-std::norm(a) - a0sq);
  // Terms scaled by e^{-x}, so the prefactor becomes exp(2x - |a|^2 - |a0|^2).
  const Complex u = z / x;
  Complex s{};
  Complex un{1.0};
  for (std::size_t k = 0; k < phase.size(); ++k) {
    s += std::exp(log_term(static_cast<unsigned>(k), x) - x) * un * phase[k];
    un *= u;
  }
  return std::exp(2.0 * x - std::norm(a) - a0sq) * std::norm(s);
}

}  // namespace

unsigned anharmonic_required_terms(double x_max, double tolerance) {
  if (!(tolerance > 0.0)) throw ConfigError("tail tolerance must be positive");
  if (x_max <= 0.0) return 1;
  const double target = std::log(tolerance);
  // x^N/N! decreases once N > x; search from there.
  unsigned n = static_cast<unsigned>(std::ceil(x_max)) + 1;
  while (log_term(n, x_max) >= target) ++n;
  return n;
}

pde::PhaseSpaceGrid anharmonic_exact_q(const pde::GridSpec& spec, double tau, Complex alpha0,
                                       double mu, std::optional<unsigned> n_terms, double nu) {
  spec.validate();
  const double x_max = std::abs(alpha0) * grid_max_abs_alpha(spec);
  const unsigned required = anharmonic_required_terms(x_max);
  const unsigned n = n_terms.value_or(required);
  if (n < required) {
    std::ostringstream msg;
    msg << "S-series with " << n << " terms leaves a tail above 1e-14 on this grid (|alpha0 alpha| up to "
        << x_max << "); at least " << required << " terms are needed";
    throw TailBoundError(msg.str());
  }
  const std::vector<Complex> phase = phase_table(tau, mu, n);
  const Complex lab_turn = std::polar(1.0, nu * tau);
  return pde::sample_grid(spec, pde::DistributionKind::Q, [&](double q, double p) {
    return series_q(Complex(q, p) / std::numbers::sqrt2 * lab_turn, alpha0, phase);
  });
}

double anharmonic_series_q(Complex alpha, double tau, Complex alpha0, double mu, unsigned n_terms) {
  return series_q(alpha, alpha0, phase_table(tau, mu, n_terms));
}

std::optional<NumberConservingQuartic> match_number_conserving(const symbols::PolynomialSymbol& h_wick,
                                                               double tol) {
  if (h_wick.num_modes() != 1) return std::nullopt;
  NumberConservingQuartic out{0.0, 0.0};
  for (const auto& [e, c] : h_wick.terms()) {
    if (e.first[0] != e.second[0] || e.first[0] > 2 || std::abs(c.imag()) > tol) return std::nullopt;
    if (e.first[0] == 2) out.mu = c.real();
    if (e.first[0] == 1) out.nu = c.real();
  }
  return out;
}

pde::PhaseSpaceGrid harmonic_rotation_q(const pde::GridSpec& spec, double tau, Complex alpha0) {
  const Complex centre = alpha0 * std::polar(1.0, -tau);
  return pde::sample_grid(spec, pde::DistributionKind::Q, [centre](double q, double p) {
    return std::exp(-std::norm(Complex(q, p) / std::numbers::sqrt2 - centre));
  });
}

pde::PhaseSpaceGrid classical_liouville_rhs(const pde::PhaseSpaceGrid& grid, bool rotating_frame,
                                            double mu, unsigned stencil_order) {
  if (!rotating_frame) {
    throw ConfigError("the classical Liouville equation is only available in the rotating frame");
  }
  const pde::GridSpec& s = grid.spec();
  const std::size_t n = s.nq * s.np;
  std::vector<double> fq(n), fp(n), dq(n), dp(n);
  for (std::size_t i = 0; i < s.nq; ++i) {
    for (std::size_t j = 0; j < s.np; ++j) {
      const double q = s.q(i), p = s.p(j);
      const double r = mu * (q * q + p * p) * grid.at(i, j);
      fq[i * s.np + j] = p * r;
      fp[i * s.np + j] = q * r;
    }
  }
  pde::apply_stencil(pde::central_stencil(1, stencil_order, s.dq()), pde::Axis::Q, s.nq, s.np, fq, dq);
  pde::apply_stencil(pde::central_stencil(1, stencil_order, s.dp()), pde::Axis::P, s.nq, s.np, fp, dp);
  pde::PhaseSpaceGrid rate(s, grid.kind());
  for (std::size_t k = 0; k < n; ++k) rate.values()[k] = dp[k] - dq[k];
  return rate;
}

}  // namespace starfield::oracle
