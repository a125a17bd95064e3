#pragma once

#include <vector>

#include "starfield/pde/grid.hpp"
#include "starfield/pde/integrator.hpp"
#include "starfield/symbols/polynomial.hpp"

namespace starfield::pde {

// Integral of A against the grid with d^2 alpha / pi. A must be the anti-Wick
// symbol for a Q grid and the Wick symbol for a P grid.
Complex expectation(const symbols::PolynomialSymbol& a, const PhaseSpaceGrid& grid);

// The symbol of `a` that pairs with `kind` (Berezin transform when needed).
symbols::PolynomialSymbol complementary_symbol(const symbols::PolynomialSymbol& a,
                                               DistributionKind kind);

struct EhrenfestSample {
  double time;
  Complex measured;   // centred difference of <A>
  Complex predicted;  // -i <{{A, H}}>
  double residual;    // |measured - predicted|
};

struct EhrenfestReport {
  symbols::PolynomialSymbol bracket;  // {{A, H}} in the kind of A and H
  bool bracket_is_zero = false;
  std::vector<Complex> expectations;  // <A> at every snapshot
  std::vector<EhrenfestSample> samples;
  double max_residual() const;
};

// d<A>/dt against -i <{{A, H}}>; A and H share one kind (Wick or AntiWick).
EhrenfestReport ehrenfest_residual(const symbols::PolynomialSymbol& a,
                                   const symbols::PolynomialSymbol& h, const Trajectory& trajectory);

}  // namespace starfield::pde
