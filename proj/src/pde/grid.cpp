#include "starfield/pde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace starfield::pde {

std::string_view to_string(DistributionKind kind) { return kind == DistributionKind::Q ? "Q" : "P"; }

GridSpec GridSpec::square_alpha(double half_width, std::size_t n) {
  const double e = half_width * std::numbers::sqrt2;
  return GridSpec{-e, e, -e, e, n, n};
}

GridSpec GridSpec::refined() const {
  GridSpec r = *this;
  r.nq = 2 * nq - 1;
  r.np = 2 * np - 1;
  return r;
}

double GridSpec::alpha_margin(Complex alpha0) const {
  const double q0 = std::numbers::sqrt2 * alpha0.real();
  const double p0 = std::numbers::sqrt2 * alpha0.imag();
  const double m = std::min({q0 - q_min, q_max - q0, p0 - p_min, p_max - p0});
  return m / std::numbers::sqrt2;
}

void GridSpec::validate() const {
  if (nq < 9 || np < 9) throw ConfigError("grid needs at least 9 points per axis");
  if (!(q_max > q_min) || !(p_max > p_min)) throw ConfigError("grid extents are empty or inverted");
  if (!std::isfinite(q_min) || !std::isfinite(q_max) || !std::isfinite(p_min) || !std::isfinite(p_max)) {
    throw ConfigError("grid extents must be finite");
  }
}

PhaseSpaceGrid::PhaseSpaceGrid(const GridSpec& spec, DistributionKind kind)
    : PhaseSpaceGrid(spec, kind, std::vector<double>(spec.nq * spec.np, 0.0)) {}

PhaseSpaceGrid::PhaseSpaceGrid(const GridSpec& spec, DistributionKind kind, std::vector<double> values)
    : spec_(spec), kind_(kind), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.nq * spec_.np) throw DimensionMismatch("grid value count does not match extents");
}

double PhaseSpaceGrid::norm() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * spec_.dq() * spec_.dp() / (2.0 * std::numbers::pi);
}

double PhaseSpaceGrid::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double PhaseSpaceGrid::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

PhaseSpaceGrid sample_grid(const GridSpec& spec, DistributionKind kind,
                           const std::function<double(double, double)>& f) {
  PhaseSpaceGrid g(spec, kind);
  const auto nq = static_cast<long>(spec.nq);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nq; ++i) {
    const double q = spec.q(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < spec.np; ++j) g.at(static_cast<std::size_t>(i), j) = f(q, spec.p(j));
  }
  return g;
}

double linf_distance(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
  if (!(a.spec() == b.spec())) throw DimensionMismatch("grids have different geometry");
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

namespace {

void check_margin(Complex alpha0, const GridSpec& spec, MarginPolicy margin) {
  spec.validate();
  if (margin.enforce && spec.alpha_margin(alpha0) < margin.min_margin) {
    throw ConfigError("initial state lies within " + std::to_string(spec.alpha_margin(alpha0)) +
                      " of the grid edge (alpha units); at least " +
                      std::to_string(margin.min_margin) + " is required");
  }
}

}  // namespace

PhaseSpaceGrid coherent_state_grid(Complex alpha0, const GridSpec& spec, MarginPolicy margin) {
  check_margin(alpha0, spec, margin);
  return sample_grid(spec, DistributionKind::Q, [alpha0](double q, double p) {
    const Complex a = Complex(q, p) / std::numbers::sqrt2;
    return std::exp(-std::norm(a - alpha0));
  });
}

PhaseSpaceGrid gaussian_p_grid(Complex alpha0, double nbar, const GridSpec& spec, MarginPolicy margin) {
  if (!(nbar > 0.0)) throw ConfigError("Gaussian P data needs nbar > 0");
  check_margin(alpha0, spec, margin);
  return sample_grid(spec, DistributionKind::P, [alpha0, nbar](double q, double p) {
    const Complex a = Complex(q, p) / std::numbers::sqrt2;
    return std::exp(-std::norm(a - alpha0) / nbar) / nbar;
  });
}

}  // namespace starfield::pde
