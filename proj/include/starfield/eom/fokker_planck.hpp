#pragma once

#include <vector>

#include "starfield/eom/eom_series.hpp"

namespace starfield::eom {

// dQ/dt = -d_q(A_q Q) - d_p(A_p Q)
//         + 1/2 d_q^2(D_qq Q) + 1/2 d_p^2(D_pp Q) + d_q d_p(D_qp Q)
struct FpCoefficients {
  RealSymbol A_q;
  RealSymbol A_p;
  RealSymbol D_qq;
  RealSymbol D_pp;
  RealSymbol D_qp;

  bool traceless(double tol = 1e-12) const { return (D_qq + D_pp).is_zero(tol); }
};

// Requires a single-mode series with max_n <= 2.
FpCoefficients extract_fp(const EomSeries& eom);

// Real-form terms of series order n (n >= 3) for H under the given scheme.
std::vector<RealSurfaceTerm> beyond_diffusion_terms(const PolynomialSymbol& h, Scheme scheme,
                                                    unsigned n);

}  // namespace starfield::eom
