#include "starfield/pde/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "starfield/eom/derive.hpp"

namespace starfield::pde {

namespace {

eom::EomSeries as_real(const eom::EomSeries& eom) {
  return eom.variable_form() == eom::VariableForm::Real ? eom : eom::to_real_form(eom);
}

std::vector<Complex> evaluate_on_grid(const symbols::RealSymbol& f, const GridSpec& spec) {
  const unsigned dq = f.first_degree(0);
  const unsigned dp = f.second_degree(0);
  std::vector<Complex> out(spec.nq * spec.np);
  const auto nq = static_cast<long>(spec.nq);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nq; ++i) {
    std::vector<double> qp(dq + 1, 1.0), pp(dp + 1, 1.0);
    const double q = spec.q(static_cast<std::size_t>(i));
    for (unsigned k = 1; k <= dq; ++k) qp[k] = qp[k - 1] * q;
    for (std::size_t j = 0; j < spec.np; ++j) {
      const double p = spec.p(j);
      for (unsigned k = 1; k <= dp; ++k) pp[k] = pp[k - 1] * p;
      Complex acc{};
      for (const auto& [e, c] : f.terms()) acc += c * (qp[e.first[0]] * pp[e.second[0]]);
      out[static_cast<std::size_t>(i) * spec.np + j] = acc;
    }
  }
  return out;
}

}  // namespace

DiscreteEom::DiscreteEom(const eom::EomSeries& eom, const GridSpec& spec, unsigned stencil_order)
    : spec_(spec) {
  spec_.validate();
  if (stencil_order != 2 && stencil_order != 4) {
    throw ConfigError("stencil_order must be 2 or 4");
  }
  if (eom.variable_form() != eom::VariableForm::Real) {
    throw ConfigError("grid application needs the real form of the series");
  }
  if (eom.num_modes() != 1) throw ConfigError("grid integration is single-mode only");

  const std::size_t n = spec_.nq * spec_.np;
  std::vector<double> dqq(n, 0.0), dpp(n, 0.0), dqp(n, 0.0);
  for (const auto& [outer, poly] : eom::group_by_outer(eom.real_terms())) {
    const std::vector<Complex> values = evaluate_on_grid(poly, spec_);
    double real_scale = 0.0, imag_worst = 0.0;
    for (const Complex& v : values) {
      real_scale = std::max(real_scale, std::abs(v.real()));
      imag_worst = std::max(imag_worst, std::abs(v.imag()));
    }
    if (imag_worst > 1e-12 * std::max(1.0, real_scale)) {
      std::ostringstream msg;
      msg << "series coefficient for outer derivative (" << outer.first[0] << "," << outer.second[0]
          << ") has imaginary part " << imag_worst << " on the grid; the Hamiltonian is not a real symbol";
      throw ConfigError(msg.str());
    }
    Block b{outer.first[0], outer.second[0], std::vector<double>(n),
            central_stencil(outer.first[0], stencil_order, spec_.dq()),
            central_stencil(outer.second[0], stencil_order, spec_.dp())};
    for (std::size_t k = 0; k < n; ++k) b.coefficient[k] = values[k].real();
    max_order_ = std::max(max_order_, b.q_order + b.p_order);
    // FP convention: 1/2 d_q^2 (D_qq .), 1/2 d_p^2 (D_pp .), d_q d_p (D_qp .).
    if (b.q_order == 2 && b.p_order == 0) {
      for (std::size_t k = 0; k < n; ++k) dqq[k] = 2.0 * b.coefficient[k];
    } else if (b.q_order == 0 && b.p_order == 2) {
      for (std::size_t k = 0; k < n; ++k) dpp[k] = 2.0 * b.coefficient[k];
    } else if (b.q_order == 1 && b.p_order == 1) {
      dqp = b.coefficient;
    }
    blocks_.push_back(std::move(b));
  }
  for (std::size_t k = 0; k < n; ++k) {
    max_diffusion_ = std::max({max_diffusion_, std::abs(dqq[k]), std::abs(dpp[k]), std::abs(dqp[k])});
  }
  scratch_a_.resize(n);
  scratch_b_.resize(n);
}

void DiscreteEom::apply(std::span<const double> values, std::span<double> rate) const {
  const std::size_t n = spec_.nq * spec_.np;
  if (values.size() != n || rate.size() != n) throw DimensionMismatch("grid size mismatch in apply");
  std::fill(rate.begin(), rate.end(), 0.0);
  for (const Block& b : blocks_) {
    for (std::size_t k = 0; k < n; ++k) scratch_a_[k] = b.coefficient[k] * values[k];
    std::vector<double>* cur = &scratch_a_;
    std::vector<double>* other = &scratch_b_;
    if (b.p_order > 0) {
      apply_stencil(b.dp, Axis::P, spec_.nq, spec_.np, *cur, *other);
      std::swap(cur, other);
    }
    if (b.q_order > 0) {
      apply_stencil(b.dq, Axis::Q, spec_.nq, spec_.np, *cur, *other);
      std::swap(cur, other);
    }
    for (std::size_t k = 0; k < n; ++k) rate[k] += (*cur)[k];
  }
}

PhaseSpaceGrid apply_eom(const PhaseSpaceGrid& grid, const eom::EomSeries& eom, unsigned stencil_order) {
  const DiscreteEom op(eom, grid.spec(), stencil_order);
  PhaseSpaceGrid rate(grid.spec(), grid.kind());
  op.apply(grid.values(), rate.values());
  return rate;
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be non-negative");
  if (stencil_order != 2 && stencil_order != 4) throw ConfigError("stencil_order must be 2 or 4");
  if (!(step_bound_factor > 0.0)) throw ConfigError("step_bound_factor must be positive");
  if (!(blowup_factor > 1.0)) throw ConfigError("blowup_factor must exceed 1");
  double last = -1.0;
  for (double t : snapshot_times) {
    if (t < 0.0 || t > t_final * (1.0 + 1e-12) || t < last) {
      throw ConfigError("snapshot times must be sorted and lie in [0, t_final]");
    }
    last = t;
  }
}

std::vector<double> evenly_spaced_times(double t_final, std::size_t count) {
  if (count < 2) throw ConfigError("need at least two snapshot times");
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k) {
    t[k] = t_final * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  return t;
}

double Trajectory::max_norm_drift() const {
  double d = 0.0;
  for (const auto& s : snapshots) d = std::max(d, std::abs(s.norm - initial_norm));
  return d;
}

double diffusion_step_bound(const DiscreteEom& op, double factor) {
  if (op.max_diffusion() == 0.0) return std::numeric_limits<double>::infinity();
  const double h = std::min(op.spec().dq(), op.spec().dp());
  return factor * h * h / op.max_diffusion();
}

Trajectory integrate(const PhaseSpaceGrid& initial, const eom::EomSeries& eom,
                     const IntegratorConfig& config) {
  config.validate();
  const bool q_grid = initial.kind() == DistributionKind::Q;
  if (q_grid != (eom.scheme() == eom::Scheme::QFunction)) {
    throw ComplementarityError("grid holds a " + std::string(to_string(initial.kind())) +
                               "-function but the series was derived for the " +
                               std::string(eom::to_string(eom.scheme())) + "-function");
  }
  const DiscreteEom op(as_real(eom), initial.spec(), config.stencil_order);
  if (config.enforce_step_bound) {
    const double bound = diffusion_step_bound(op, config.step_bound_factor);
    if (config.dt > bound) {
      std::ostringstream msg;
      msg << "dt = " << config.dt << " exceeds the diffusion step bound " << bound
          << " (factor " << config.step_bound_factor << ", max|D| = " << op.max_diffusion() << ")";
      throw ConfigError(msg.str());
    }
  }

  const std::vector<double> times =
      config.snapshot_times.empty() ? std::vector<double>{0.0, config.t_final} : config.snapshot_times;

  const std::size_t n = initial.values().size();
  std::vector<double> y(initial.values().begin(), initial.values().end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double limit = config.blowup_factor * std::max(initial.max_abs(), 1e-300);

  Trajectory traj;
  traj.initial_norm = initial.norm();
  double t = 0.0;
  double last_rate = 0.0;

  auto snapshot = [&](double time) {
    PhaseSpaceGrid g(initial.spec(), initial.kind(), y);
    const double norm = g.norm();
    traj.snapshots.push_back({time, std::move(g), norm});
  };

  for (double target : times) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<std::size_t>(std::ceil(span / config.dt - 1e-9));
      const double h = span / static_cast<double>(steps);
      for (std::size_t s = 0; s < steps; ++s) {
        op.apply(y, k1);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = y[k] + 0.5 * h * k1[k];
        op.apply(tmp, k2);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = y[k] + 0.5 * h * k2[k];
        op.apply(tmp, k3);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = y[k] + h * k3[k];
        op.apply(tmp, k4);
        double peak = 0.0;
        last_rate = 0.0;
        bool finite = true;
        for (std::size_t k = 0; k < n; ++k) {
          y[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
          peak = std::max(peak, std::abs(y[k]));
          last_rate = std::max(last_rate, std::abs(k1[k]));
          finite = finite && std::isfinite(y[k]);
        }
        t += h;
        ++traj.steps;
        if (!finite || peak > limit) {
          std::ostringstream msg;
          msg << "numerical instability at t = " << t << " (dt = " << h << ", max|rate| = " << last_rate
              << ", max|grid| = " << peak << ")";
          throw NumericalInstability(msg.str(), t, h, last_rate);
        }
      }
      t = target;
    }
    snapshot(target);
  }
  return traj;
}

}  // namespace starfield::pde
