#pragma once

#include <limits>
#include <vector>

#include "starfield/eom/eom_series.hpp"
#include "starfield/pde/grid.hpp"
#include "starfield/pde/stencil.hpp"

namespace starfield::pde {

enum class Boundary { ZeroPad };

// A real-form series discretised on a fixed grid. Coefficient grids are
// precomputed once and terms sharing an outer derivative are merged.
class DiscreteEom {
public:
  DiscreteEom(const eom::EomSeries& eom, const GridSpec& spec, unsigned stencil_order);

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  unsigned max_derivative_order() const noexcept { return max_order_; }
  // max over the grid of |D_qq|, |D_pp|, |D_qp|; zero without diffusion.
  double max_diffusion() const noexcept { return max_diffusion_; }

  // rate = L values. Uses internal scratch space: one call at a time per instance.
  void apply(std::span<const double> values, std::span<double> rate) const;

private:
  struct Block {
    unsigned q_order;
    unsigned p_order;
    std::vector<double> coefficient;
    Stencil dq;
    Stencil dp;
  };

  GridSpec spec_;
  std::vector<Block> blocks_;
  unsigned max_order_ = 0;
  double max_diffusion_ = 0.0;
  mutable std::vector<double> scratch_a_;
  mutable std::vector<double> scratch_b_;
};

// Evaluates the right-hand side of a real-form series on a grid.
PhaseSpaceGrid apply_eom(const PhaseSpaceGrid& grid, const eom::EomSeries& eom,
                         unsigned stencil_order = 2);

struct IntegratorConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  unsigned stencil_order = 2;
  Boundary boundary = Boundary::ZeroPad;
  // dt <= step_bound_factor * min(dq, dp)^2 / max|D| when diffusion is present.
  double step_bound_factor = 0.25;
  bool enforce_step_bound = true;
  // Empty means {0, t_final}.
  std::vector<double> snapshot_times;
  // Abort once max|grid| exceeds this multiple of its initial value.
  double blowup_factor = 1e3;

  void validate() const;
};

std::vector<double> evenly_spaced_times(double t_final, std::size_t count);

struct Snapshot {
  double time;
  PhaseSpaceGrid grid;
  double norm;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  double initial_norm = 0.0;
  std::size_t steps = 0;
  double max_norm_drift() const;
};

// Largest dt allowed by the diffusion guard (infinity without diffusion).
double diffusion_step_bound(const DiscreteEom& op, double factor);

// Classical RK4 integration of the grid under the series.
Trajectory integrate(const PhaseSpaceGrid& initial, const eom::EomSeries& eom,
                     const IntegratorConfig& config);

}  // namespace starfield::pde
