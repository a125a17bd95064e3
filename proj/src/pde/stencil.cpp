#include "starfield/pde/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "starfield/errors.hpp"

namespace starfield::pde {

std::vector<double> fornberg_weights(double x0, std::span<const double> x, unsigned m) {
  const std::size_t n = x.size();
  if (n <= m) throw ConfigError("stencil has too few nodes for the derivative order");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const unsigned mn = static_cast<unsigned>(std::min<std::size_t>(i, m));
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (unsigned k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (unsigned k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

Stencil central_stencil(unsigned derivative_order, unsigned accuracy, double spacing) {
  if (accuracy == 0 || accuracy % 2 != 0) {
    throw ConfigError("stencil accuracy must be a positive even number, got " + std::to_string(accuracy));
  }
  Stencil s;
  if (derivative_order == 0) {
    s.weights = {1.0};
    return s;
  }
  const unsigned points = 2 * ((derivative_order + 1) / 2) - 1 + accuracy;
  s.radius = static_cast<int>(points / 2);
  std::vector<double> nodes(points);
  for (unsigned k = 0; k < points; ++k) nodes[k] = static_cast<double>(static_cast<int>(k) - s.radius);
  s.weights = fornberg_weights(0.0, nodes, derivative_order);
  const double scale = std::pow(spacing, -static_cast<double>(derivative_order));
  for (double& w : s.weights) {
    // The weights are rationals with small denominators; snap away recursion noise.
    const double snapped = std::round(w * 5040.0) / 5040.0;
    if (std::abs(snapped - w) < 1e-12) w = snapped;
    w *= scale;
  }
  return s;
}

void apply_stencil(const Stencil& s, Axis axis, std::size_t nq, std::size_t np,
                   std::span<const double> in, std::span<double> out) {
  const long r = s.radius;
  const long lq = static_cast<long>(nq);
  const long lp = static_cast<long>(np);
  if (axis == Axis::P) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < lq; ++i) {
      const double* row = in.data() + i * lp;
      double* dst = out.data() + i * lp;
      for (long j = 0; j < lp; ++j) {
        double acc = 0.0;
        const long lo = std::max(-r, -j);
        const long hi = std::min(r, lp - 1 - j);
        for (long k = lo; k <= hi; ++k) acc += s.weights[k + r] * row[j + k];
        dst[j] = acc;
      }
    }
  } else {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < lq; ++i) {
      double* dst = out.data() + i * lp;
      std::fill(dst, dst + lp, 0.0);
      const long lo = std::max(-r, -i);
      const long hi = std::min(r, lq - 1 - i);
      for (long k = lo; k <= hi; ++k) {
        const double w = s.weights[k + r];
        const double* src = in.data() + (i + k) * lp;
        for (long j = 0; j < lp; ++j) dst[j] += w * src[j];
      }
    }
  }
}

}  // namespace starfield::pde
