#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "starfield/symbols/polynomial.hpp"

namespace starfield::pde {

enum class DistributionKind { Q, P };

std::string_view to_string(DistributionKind kind);

// Uniform node-centred grid over (q, p); alpha = (q + i p)/sqrt2.
struct GridSpec {
  double q_min = -1.0;
  double q_max = 1.0;
  double p_min = -1.0;
  double p_max = 1.0;
  std::size_t nq = 9;
  std::size_t np = 9;

  // Square grid covering |Re alpha|, |Im alpha| <= half_width.
  static GridSpec square_alpha(double half_width, std::size_t n);

  double dq() const { return (q_max - q_min) / static_cast<double>(nq - 1); }
  double dp() const { return (p_max - p_min) / static_cast<double>(np - 1); }
  double q(std::size_t i) const { return q_min + dq() * static_cast<double>(i); }
  double p(std::size_t j) const { return p_min + dp() * static_cast<double>(j); }
  // Halves both spacings on the same extents.
  GridSpec refined() const;
  // Distance from alpha0 to the nearest edge, in alpha units.
  double alpha_margin(Complex alpha0) const;
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

class PhaseSpaceGrid {
public:
  PhaseSpaceGrid(const GridSpec& spec, DistributionKind kind);
  PhaseSpaceGrid(const GridSpec& spec, DistributionKind kind, std::vector<double> values);

  const GridSpec& spec() const noexcept { return spec_; }
  DistributionKind kind() const noexcept { return kind_; }
  std::size_t nq() const noexcept { return spec_.nq; }
  std::size_t np() const noexcept { return spec_.np; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * spec_.np + j]; }
  double& at(std::size_t i, std::size_t j) { return values_[i * spec_.np + j]; }

  // Integral against d^2 alpha / pi = dq dp / (2 pi).
  double norm() const;
  double max_abs() const;
  double max_value() const;

private:
  GridSpec spec_;
  DistributionKind kind_;
  std::vector<double> values_;
};

PhaseSpaceGrid sample_grid(const GridSpec& spec, DistributionKind kind,
                           const std::function<double(double q, double p)>& f);

double linf_distance(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b);

struct MarginPolicy {
  double min_margin = 4.0;
  bool enforce = true;
};

// exp(-|alpha - alpha0|^2) sampled on the grid.
PhaseSpaceGrid coherent_state_grid(Complex alpha0, const GridSpec& spec,
                                   MarginPolicy margin = {});

// Smooth Glauber P data: exp(-|alpha - alpha0|^2 / nbar) / nbar.
PhaseSpaceGrid gaussian_p_grid(Complex alpha0, double nbar, const GridSpec& spec,
                               MarginPolicy margin = {});

}  // namespace starfield::pde
