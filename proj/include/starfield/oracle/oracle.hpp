#pragma once

#include <optional>

#include "starfield/pde/grid.hpp"

namespace starfield::oracle {

// Smallest N with x^N / N! < tolerance for every x <= x_max.
unsigned anharmonic_required_terms(double x_max, double tolerance = 1e-14);

// Exact Q for H = mu a+^2 a^2 from the coherent state alpha0:
//   exp(-|alpha|^2 - |alpha0|^2) |sum_n (alpha0* alpha)^n / n! exp(i mu tau n(n-1))|^2
// A free term nu a+ a turns alpha into alpha e^{i nu tau}; nu = 0 is the rotating frame.
// n_terms below the tail requirement throws TailBoundError.
pde::PhaseSpaceGrid anharmonic_exact_q(const pde::GridSpec& spec, double tau, Complex alpha0,
                                       double mu, std::optional<unsigned> n_terms = std::nullopt,
                                       double nu = 0.0);

// Wick symbol mu |alpha|^4 + nu |alpha|^2 + const with real mu, nu.
struct NumberConservingQuartic {
  double mu;
  double nu;
};
std::optional<NumberConservingQuartic> match_number_conserving(const symbols::PolynomialSymbol& h_wick,
                                                               double tol = 1e-13);

// Pointwise S-series with exactly n_terms terms, no tail check.
double anharmonic_series_q(Complex alpha, double tau, Complex alpha0, double mu, unsigned n_terms);

// exp(-|alpha - alpha0 e^{-i tau}|^2).
pde::PhaseSpaceGrid harmonic_rotation_q(const pde::GridSpec& spec, double tau, Complex alpha0);

// -d_q(mu p R Q) + d_p(mu q R Q) with R = q^2 + p^2, by central differences.
// Only the rotating frame is available.
pde::PhaseSpaceGrid classical_liouville_rhs(const pde::PhaseSpaceGrid& grid, bool rotating_frame,
                                            double mu, unsigned stencil_order = 2);

}  // namespace starfield::oracle
