#pragma once

#include <span>
#include <vector>

namespace starfield::pde {

// Finite-difference weights for the m-th derivative at x0 from nodes x
// (Fornberg's recursion).
std::vector<double> fornberg_weights(double x0, std::span<const double> x, unsigned m);

struct Stencil {
  int radius = 0;
  std::vector<double> weights;  // weights[s + radius] multiplies f(x + s h)
};

// Central stencil of even accuracy order for d^m/dx^m on spacing h.
Stencil central_stencil(unsigned derivative_order, unsigned accuracy, double spacing);

enum class Axis { Q, P };

// out = D in along one axis of a row-major nq x np array; outside values are 0.
void apply_stencil(const Stencil& s, Axis axis, std::size_t nq, std::size_t np,
                   std::span<const double> in, std::span<double> out);

}  // namespace starfield::pde
