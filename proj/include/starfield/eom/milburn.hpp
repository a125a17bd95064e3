#pragma once

#include "starfield/eom/eom_series.hpp"

namespace starfield::eom {

// Interaction-picture Hamiltonians: remove omega0 |alpha|^2 on the Wick side.
PolynomialSymbol rotating_frame_wick(const PolynomialSymbol& h_wick, double omega0);
PolynomialSymbol rotating_frame_antiwick(const PolynomialSymbol& h_antiwick, double omega0);

// Classical rotating-frame Liouville equation of the Kerr oscillator,
// 2 i mu omega0 [d(alpha |alpha|^2 Q) - dbar(alpha* |alpha|^2 Q)], built by hand.
EomSeries classical_rotating_frame_liouville(double mu, double omega0 = 1.0);

struct MilburnScenario {
  double mu;
  double omega0;
  PolynomialSymbol H_classical;                 // omega0 (|a|^2 + mu |a|^4)
  PolynomialSymbol H_milburn_lab_W;             // omega0 (n + mu n^2) as a Wick symbol
  PolynomialSymbol H_milburn_interaction_W;
  PolynomialSymbol H_milburn_interaction_aW;
  PolynomialSymbol H_antiwick_lab;              // H_classical read as anti-Wick
  PolynomialSymbol H_antiwick_quantized;        // its rotating-frame anti-Wick symbol
  EomSeries eom_milburn;
  EomSeries eom_antiwick;
  EomSeries eom_classical;
  bool drift_artifact_present;
  bool antiwick_drift_matches_classical;
};

MilburnScenario milburn_scenario(double mu, double omega0 = 1.0);

// Largest coefficient gap between the n = 1 blocks of two complex series.
double drift_distance(const EomSeries& a, const EomSeries& b);

}  // namespace starfield::eom
