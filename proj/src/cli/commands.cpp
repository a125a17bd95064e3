#include "starfield/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "starfield/eom/derive.hpp"
#include "starfield/eom/fokker_planck.hpp"
#include "starfield/eom/milburn.hpp"
#include "starfield/eom/serialization.hpp"
#include "starfield/oracle/oracle.hpp"
#include "starfield/pde/io.hpp"
#include "starfield/pde/observables.hpp"
#include "starfield/star/star_product.hpp"
#include "starfield/symbols/serialization.hpp"

namespace starfield::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using symbols::SymbolKind;

namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  return out;
}

json drift_json(const eom::EomSeries& e) {
  json out = json::array();
  const eom::EomSeries b = e.block(1);
  for (const auto& [outer, poly] : eom::group_by_outer(b.complex_terms())) {
    out.push_back({{"outer", {{"a", outer.first}, {"ad", outer.second}}},
                   {"coefficient", symbols::to_json(poly)},
                   {"display", symbols::to_display_string(poly)}});
  }
  return out;
}

std::vector<double> snapshot_times(const RunConfig& c) {
  return c.integrator.snapshot_times.empty() ? pde::evenly_spaced_times(c.integrator.t_final, c.snapshot_count)
                                             : c.integrator.snapshot_times;
}

pde::PhaseSpaceGrid initial_grid(const RunConfig& c, const pde::GridSpec& spec) {
  if (c.initial.type == "coherent") return pde::coherent_state_grid(c.initial.alpha0, spec, c.initial.margin);
  return pde::gaussian_p_grid(c.initial.alpha0, c.initial.nbar, spec, c.initial.margin);
}

PolynomialSymbol single_mode_hamiltonian(const RunConfig& c, const ComplementarityOverride& ov) {
  if (c.hamiltonian.modes != 1) throw ConfigError("grid commands are single-mode");
  return scheme_hamiltonian(c.hamiltonian, c.scheme, ov);
}

}  // namespace

json cmd_derive(const HamiltonianSpec& h, eom::Scheme scheme, const fs::path& out,
                const ComplementarityOverride& override) {
  const PolynomialSymbol hs = scheme_hamiltonian(h, scheme, override);
  const eom::EomSeries complex_form = eom::derive_eom(hs, scheme);
  const eom::EomSeries real_form = eom::to_real_form(complex_form);
  fs::create_directories(out);

  json eom_json = {{"quantization", std::string(to_string(h.quantization))},
                   {"input_symbol", symbols::to_json(h.symbol)},
                   {"hamiltonian", symbols::to_json(hs)},
                   {"complex", eom::to_json(complex_form)},
                   {"real", eom::to_json(real_form)}};
  pde::write_json(out / "eom.json", eom_json);

  json beyond = json::array();
  std::vector<unsigned> beyond_orders;
  for (const auto& t : real_form.real_terms()) {
    if (t.order < 3) continue;
    beyond.push_back(eom::to_json(t));
    if (beyond_orders.empty() || beyond_orders.back() != t.order) beyond_orders.push_back(t.order);
  }
  pde::write_json(out / "beyond_diffusion.json", {{"orders", beyond_orders}, {"terms", beyond}});

  std::optional<eom::FpCoefficients> fp;
  const fs::path fp_path = out / "fp.json";
  std::error_code ec;
  fs::remove(fp_path, ec);
  if (h.modes == 1 && beyond_orders.empty()) {
    fp = eom::extract_fp(real_form);
    pde::write_json(fp_path, eom::to_json(*fp));
  }

  std::ofstream summary = open_out(out / "summary.txt");
  summary << "scheme: " << eom::to_string(scheme) << "\n";
  summary << "quantization: " << to_string(h.quantization) << "\n";
  summary << "hamiltonian (" << symbols::to_string(hs.kind()) << "): " << symbols::to_display_string(hs) << "\n";
  summary << "series terms: " << complex_form.size() << " complex, " << real_form.size() << " real\n";
  summary << "highest order: " << complex_form.max_n() << "\n";
  if (fp) {
    summary << "A_q  = " << symbols::to_display_string(fp->A_q) << "\n";
    summary << "A_p  = " << symbols::to_display_string(fp->A_p) << "\n";
    summary << "D_qq = " << symbols::to_display_string(fp->D_qq) << "\n";
    summary << "D_pp = " << symbols::to_display_string(fp->D_pp) << "\n";
    summary << "D_qp = " << symbols::to_display_string(fp->D_qp) << "\n";
    summary << "diffusion traceless (D_qq + D_pp = 0): " << (fp->traceless() ? "yes" : "no") << "\n";
  } else if (h.modes != 1) {
    summary << "Fokker-Planck form: not extracted (several modes)\n";
  } else {
    summary << "Fokker-Planck form: none, the series has derivatives of order";
    for (unsigned n : beyond_orders) summary << " " << n;
    summary << "\n";
  }

  json report = {{"command", "derive"},
                 {"scheme", std::string(eom::to_string(scheme))},
                 {"terms", complex_form.size()},
                 {"max_n", complex_form.max_n()},
                 {"beyond_diffusion_orders", beyond_orders},
                 {"fp_written", fp.has_value()}};
  if (fp) report["traceless"] = fp->traceless();
  return report;
}

json cmd_evolve(const RunConfig& config, const ComplementarityOverride& override) {
  config.validate();
  const PolynomialSymbol h = single_mode_hamiltonian(config, override);
  const eom::EomSeries series = eom::to_real_form(eom::derive_eom(h, config.scheme));

  std::optional<oracle::NumberConservingQuartic> exact;
  if (config.scheme == eom::Scheme::QFunction && config.initial.type == "coherent") {
    exact = oracle::match_number_conserving(symbols::berezin_forward(h));
  }
  if (config.compare_oracle == OracleMode::On && !exact) {
    throw ConfigError("no closed-form oracle for this run: it needs the Q scheme, a coherent initial state and "
                      "a Hamiltonian whose Wick symbol is mu |alpha|^4 + nu |alpha|^2 + const");
  }
  const bool compare = exact && config.compare_oracle != OracleMode::Off;

  pde::IntegratorConfig ic = config.integrator;
  ic.snapshot_times = snapshot_times(config);
  const pde::PhaseSpaceGrid q0 = initial_grid(config, config.grid);
  const pde::DiscreteEom op(series, config.grid, ic.stencil_order);
  const double bound = pde::diffusion_step_bound(op, ic.step_bound_factor);

  fs::create_directories(config.outputs);
  json report = {{"command", "evolve"},
                 {"scheme", std::string(eom::to_string(config.scheme))},
                 {"dt", ic.dt},
                 {"diffusion_step_bound", std::isfinite(bound) ? json(bound) : json(nullptr)},
                 {"max_diffusion", op.max_diffusion()}};
  pde::Trajectory traj;
  try {
    traj = pde::integrate(q0, series, ic);
  } catch (const NumericalInstability& e) {
    report["status"] = "unstable";
    report["instability"] = {{"time", e.time()}, {"dt", e.dt()}, {"max_rate", e.max_rate()}, {"message", e.what()}};
    pde::write_json(config.outputs / "report.json", report);
    throw;
  }
  report["status"] = "ok";
  report["manifest"] = pde::write_trajectory(config.outputs, traj);
  report["steps"] = traj.steps;
  report["max_norm_drift"] = traj.max_norm_drift();

  if (compare) {
    json rows = json::array();
    std::optional<std::ofstream> csv;
    if (config.compare_oracle == OracleMode::On) {
      csv = open_out(config.outputs / "error_vs_time.csv");
      *csv << "time,linf,linf_relative,norm\n";
    }
    for (const auto& s : traj.snapshots) {
      const pde::PhaseSpaceGrid ref =
          exact->mu == 0.0 ? oracle::harmonic_rotation_q(config.grid, exact->nu * s.time, config.initial.alpha0)
                           : oracle::anharmonic_exact_q(config.grid, s.time, config.initial.alpha0, exact->mu,
                                                        std::nullopt, exact->nu);
      const double linf = pde::linf_distance(s.grid, ref);
      const double rel = linf / ref.max_value();
      if (csv) *csv << fmt9(s.time) << ',' << fmt9(linf) << ',' << fmt9(rel) << ',' << fmt9(s.norm) << '\n';
      rows.push_back({{"time", s.time}, {"linf", linf}, {"linf_relative", rel}});
    }
    report["oracle"] = {{"mu", exact->mu},
                        {"nu", exact->nu},
                        {"final_linf", rows.back()["linf"]},
                        {"final_linf_relative", rows.back()["linf_relative"]},
                        {"error_vs_time", rows}};
  }
  pde::write_json(config.outputs / "report.json", report);
  return report;
}

json cmd_milburn(const MilburnOptions& o) {
  const eom::MilburnScenario s = eom::milburn_scenario(o.mu, o.omega0);
  json extra = json::array();
  {
    const eom::EomSeries mb = s.eom_milburn.block(1);
    const eom::EomSeries cl = s.eom_classical.block(1);
    const auto m = eom::group_by_outer(mb.complex_terms());
    const auto c = eom::group_by_outer(cl.complex_terms());
    for (const auto& [outer, poly] : m) {
      PolynomialSymbol diff = poly.with_kind(SymbolKind::Untyped);
      for (const auto& [o2, p2] : c) {
        if (o2 == outer) diff -= p2.with_kind(SymbolKind::Untyped);
      }
      if (!diff.empty()) {
        extra.push_back({{"outer", {{"a", outer.first}, {"ad", outer.second}}},
                         {"coefficient", symbols::to_json(diff)},
                         {"display", symbols::to_display_string(diff)}});
      }
    }
  }
  json op_form = json::array();
  for (const auto& [d, c] : eom::operator_form(s.eom_milburn)) {
    op_form.push_back({{"derivative", {{"a", d.first}, {"ad", d.second}}},
                       {"coefficient", symbols::to_json(c)},
                       {"display", symbols::to_display_string(c)}});
  }
  json report = {
      {"command", "milburn"},
      {"parameters", {{"mu", o.mu}, {"omega0", o.omega0}}},
      {"hamiltonians",
       {{"classical", symbols::to_json(s.H_classical)},
        {"milburn_lab_wick", symbols::to_json(s.H_milburn_lab_W)},
        {"milburn_interaction_wick", symbols::to_json(s.H_milburn_interaction_W)},
        {"milburn_interaction_antiwick", symbols::to_json(s.H_milburn_interaction_aW)},
        {"antiwick_lab", symbols::to_json(s.H_antiwick_lab)},
        {"antiwick_interaction", symbols::to_json(s.H_antiwick_quantized)}}},
      {"drift",
       {{"milburn", drift_json(s.eom_milburn)},
        {"antiwick", drift_json(s.eom_antiwick)},
        {"classical", drift_json(s.eom_classical)}}},
      {"milburn_extra_drift", extra},
      {"milburn_operator_form", op_form},
      {"drift_artifact_present", s.drift_artifact_present},
      {"antiwick_drift_matches_classical", s.antiwick_drift_matches_classical}};

  if (!o.taus.empty()) {
    // Both quantum branches are number-conserving, so their exact solutions differ
    // only through the Wick coefficients; tau = omega0 t.
    const auto mb = oracle::match_number_conserving(s.H_milburn_interaction_W);
    const auto aw = oracle::match_number_conserving(symbols::berezin_forward(s.H_antiwick_quantized));
    json rows = json::array();
    for (double tau : o.taus) {
      const double t = tau / o.omega0;
      const auto qm = oracle::anharmonic_exact_q(o.grid, t, o.alpha0, mb->mu, std::nullopt, mb->nu);
      const auto qa = oracle::anharmonic_exact_q(o.grid, t, o.alpha0, aw->mu, std::nullopt, aw->nu);
      rows.push_back({{"tau", tau}, {"linf_milburn_vs_antiwick", pde::linf_distance(qm, qa)}});
    }
    report["evolved"] = rows;
  }
  fs::create_directories(o.out);
  pde::write_json(o.out / "milburn.json", report);
  return report;
}

json cmd_ehrenfest(const RunConfig& config, const std::string& observable,
                   const ComplementarityOverride& override) {
  config.validate();
  const PolynomialSymbol h = single_mode_hamiltonian(config, override);
  PolynomialSymbol a(1, h.kind());
  if (observable == "hamiltonian") {
    a = h;
  } else if (observable == "identity") {
    a = PolynomialSymbol::constant(1.0, 1, h.kind());
  } else if (observable == "alpha") {
    a = symbols::alpha(0, 1, h.kind());
  } else if (!observable.empty()) {
    a = parse_observable(load_json_file(observable), config.hamiltonian.parameters, 1);
  } else if (config.observable) {
    a = parse_observable(*config.observable, config.hamiltonian.parameters, 1);
  } else {
    throw ConfigError("ehrenfest needs an observable (--observable or \"observable\" in the config)");
  }
  if (a.kind() != h.kind()) {
    throw ComplementarityError("the " + std::string(eom::to_string(config.scheme)) + " scheme pairs with " +
                               std::string(symbols::to_string(h.kind())) + " symbols, but the observable is " +
                               std::string(symbols::to_string(a.kind())));
  }
  const eom::EomSeries series = eom::to_real_form(eom::derive_eom(h, config.scheme));

  auto run = [&](const pde::GridSpec& spec, double spacing) {
    pde::IntegratorConfig ic = config.integrator;
    const auto count = static_cast<std::size_t>(std::lround(ic.t_final / spacing)) + 1;
    ic.snapshot_times = pde::evenly_spaced_times(ic.t_final, std::max<std::size_t>(count, 3));
    return pde::ehrenfest_residual(a, h, pde::integrate(initial_grid(config, spec), series, ic));
  };
  auto write_csv = [](const fs::path& p, const pde::EhrenfestReport& r) {
    std::ofstream out = open_out(p);
    out << "time,measured_re,measured_im,predicted_re,predicted_im,residual\n";
    for (const auto& s : r.samples) {
      out << fmt9(s.time) << ',' << fmt9(s.measured.real()) << ',' << fmt9(s.measured.imag()) << ','
          << fmt9(s.predicted.real()) << ',' << fmt9(s.predicted.imag()) << ',' << fmt9(s.residual) << '\n';
    }
  };

  const pde::EhrenfestReport base = run(config.grid, config.ehrenfest_spacing);
  const pde::EhrenfestReport fine = run(config.grid.refined(), config.ehrenfest_spacing / 2);
  fs::create_directories(config.outputs);
  write_csv(config.outputs / "ehrenfest.csv", base);
  write_csv(config.outputs / "ehrenfest_refined.csv", fine);
  json summary = {{"command", "ehrenfest"},
                  {"observable", symbols::to_json(a)},
                  {"bracket", symbols::to_json(base.bracket)},
                  {"bracket_is_zero", base.bracket_is_zero},
                  {"max_residual", base.max_residual()},
                  {"refined_max_residual", fine.max_residual()}};
  if (fine.max_residual() > 0.0 && base.max_residual() > 0.0) {
    const double ratio = base.max_residual() / fine.max_residual();
    summary["refinement_ratio"] = ratio;
    summary["observed_order"] = std::log2(ratio);
  } else {
    summary["refinement_ratio"] = nullptr;
    summary["observed_order"] = nullptr;
  }
  pde::write_json(config.outputs / "ehrenfest_summary.json", summary);
  return summary;
}

json cmd_oracle(const OracleOptions& o) {
  if (o.kind != "anharmonic" && o.kind != "harmonic") throw ConfigError("oracle kind must be anharmonic or harmonic");
  if (o.taus.empty()) throw ConfigError("oracle needs at least one time");
  pde::Trajectory traj;
  for (double tau : o.taus) {
    pde::PhaseSpaceGrid g = o.kind == "harmonic" ? oracle::harmonic_rotation_q(o.grid, tau, o.alpha0)
                                                 : oracle::anharmonic_exact_q(o.grid, tau, o.alpha0, o.mu, o.n_terms, o.nu);
    const double norm = g.norm();
    traj.snapshots.push_back({tau, std::move(g), norm});
  }
  traj.initial_norm = traj.snapshots.front().norm;
  json manifest = pde::write_trajectory(o.out, traj, "oracle");
  return {{"command", "oracle"}, {"kind", o.kind}, {"manifest", manifest}};
}

json cmd_symbol(const SymbolOptions& o) {
  auto load = [](const fs::path& p) { return parse_observable(load_json_file(p), {{"omega0", 1.0}}, 1); };
  const PolynomialSymbol f = load(o.f);
  auto need_g = [&]() {
    if (!o.g) throw ConfigError("operation " + o.op + " needs a second symbol (--g)");
    return load(*o.g);
  };
  json result;
  if (o.op == "wick_star") result = symbols::to_json(star::wick_star(f, need_g()));
  else if (o.op == "antiwick_star") result = symbols::to_json(star::antiwick_star(f, need_g()));
  else if (o.op == "wick_bracket") result = symbols::to_json(star::wick_bracket(f, need_g()));
  else if (o.op == "antiwick_bracket") result = symbols::to_json(star::antiwick_bracket(f, need_g()));
  else if (o.op == "berezin_inverse") result = symbols::to_json(symbols::berezin_inverse(f));
  else if (o.op == "berezin_forward") result = symbols::to_json(symbols::berezin_forward(f));
  else if (o.op == "adjoint") result = symbols::to_json(symbols::adjoint(f));
  else if (o.op == "to_real") result = symbols::to_json(symbols::to_real_variables(f));
  else throw ConfigError("unknown symbol operation \"" + o.op + "\"");
  return {{"op", o.op}, {"result", result}};
}

}  // namespace starfield::cli
