#pragma once

#include "starfield/eom/eom_series.hpp"

namespace starfield::eom {

// dQ/dt = -i sum_{|n|>=1} (1/n!) [dbar^n(d^n H . Q) - d^n(dbar^n H . Q)]
// H must be the anti-Wick symbol (Classical is accepted and read as anti-Wick).
EomSeries derive_q_eom(const PolynomialSymbol& h_antiwick);

// dP/dt = +i sum_{|n|>=1} ((-1)^|n|/n!) [dbar^n(d^n H . P) - d^n(dbar^n H . P)]
// H must be the Wick symbol (Classical is accepted and read as Wick).
EomSeries derive_p_eom(const PolynomialSymbol& h_wick);

EomSeries derive_eom(const PolynomialSymbol& h, Scheme scheme);

// Rewrites a complex-variable series in d_q, d_p surface derivatives.
EomSeries to_real_form(const EomSeries& eom);

}  // namespace starfield::eom
