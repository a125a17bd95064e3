#include <CLI11.hpp>

#include <algorithm>
#include <numbers>
#include <ostream>

#include "starfield/cli/commands.hpp"
#include "starfield/pde/io.hpp"

namespace starfield::cli {

using nlohmann::json;

namespace {

struct RunOverrides {
  std::string config;
  std::string out;
  std::string scheme;
  std::optional<double> dt, t_final, half_width;
  std::optional<std::size_t> n, snapshots;
  std::optional<unsigned> stencil_order;
  std::vector<double> alpha0;
  bool compare_oracle = false;
  bool no_compare_oracle = false;
  bool no_step_bound = false;
};

void add_run_options(CLI::App* cmd, RunOverrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", o.out, "output directory (overrides \"outputs\")");
  cmd->add_option("--scheme", o.scheme, "Q or P")->check(CLI::IsMember({"Q", "P"}));
  cmd->add_option("--dt", o.dt, "time step");
  cmd->add_option("--t-final", o.t_final, "final time");
  cmd->add_option("--n", o.n, "points per axis of a square grid");
  cmd->add_option("--half-width", o.half_width, "square grid half-width in alpha units");
  cmd->add_option("--stencil-order", o.stencil_order, "2 or 4");
  cmd->add_option("--snapshots", o.snapshots, "number of evenly spaced snapshots");
  cmd->add_option("--alpha0", o.alpha0, "initial amplitude: re im")->expected(2);
  cmd->add_flag("--compare-oracle", o.compare_oracle, "require the closed-form comparison");
  cmd->add_flag("--no-compare-oracle", o.no_compare_oracle, "skip the closed-form comparison");
  cmd->add_flag("--no-step-bound", o.no_step_bound, "do not enforce the diffusion step bound");
}

RunConfig build_config(const RunOverrides& o) {
  RunConfig c = parse_run_config(load_json_file(o.config));
  if (!o.out.empty()) c.outputs = o.out;
  if (!o.scheme.empty()) {
    c.scheme = o.scheme == "Q" ? eom::Scheme::QFunction : eom::Scheme::PFunction;
  }
  if (o.dt) c.integrator.dt = *o.dt;
  if (o.t_final) c.integrator.t_final = *o.t_final;
  if (o.n || o.half_width) {
    const double hw = o.half_width.value_or(c.grid.q_max / std::numbers::sqrt2);
    c.grid = pde::GridSpec::square_alpha(hw, o.n.value_or(c.grid.nq));
  }
  if (o.stencil_order) c.integrator.stencil_order = *o.stencil_order;
  if (o.snapshots) {
    c.snapshot_count = *o.snapshots;
    c.integrator.snapshot_times.clear();
  }
  if (o.alpha0.size() == 2) c.initial.alpha0 = Complex(o.alpha0[0], o.alpha0[1]);
  if (o.compare_oracle && o.no_compare_oracle) throw ConfigError("--compare-oracle and --no-compare-oracle conflict");
  if (o.compare_oracle) c.compare_oracle = OracleMode::On;
  if (o.no_compare_oracle) c.compare_oracle = OracleMode::Off;
  if (o.no_step_bound) c.integrator.enforce_step_bound = false;
  return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"starfield: Husimi and Glauber-Sudarshan dynamics from complementary symbols"};
  app.require_subcommand(1);
  app.fallthrough();
  ComplementarityOverride ov;
  app.add_flag("--i-know-this-is-wick", ov.wick_for_q,
               "allow a Wick-side Hamiltonian in the Q scheme through its anti-Wick symbol");
  app.add_flag("--i-know-this-is-antiwick", ov.antiwick_for_p,
               "allow an anti-Wick Hamiltonian in the P scheme through its Wick symbol");

  std::string derive_config, derive_out, derive_scheme;
  auto* derive = app.add_subcommand("derive", "derive the evolution equation and Fokker-Planck report");
  derive->add_option("-c,--config", derive_config, "JSON file with a \"hamiltonian\" entry")
      ->required()
      ->check(CLI::ExistingFile);
  derive->add_option("-o,--out", derive_out, "output directory");
  derive->add_option("--scheme", derive_scheme, "Q or P")->check(CLI::IsMember({"Q", "P"}));

  RunOverrides evolve_o;
  auto* evolve = app.add_subcommand("evolve", "integrate the distribution on a grid");
  add_run_options(evolve, evolve_o);

  RunOverrides ehr_o;
  std::string observable;
  auto* ehrenfest = app.add_subcommand("ehrenfest", "check d<A>/dt against the bracket expectation");
  add_run_options(ehrenfest, ehr_o);
  ehrenfest->add_option("--observable", observable, "hamiltonian, identity, alpha, or a JSON symbol file");

  MilburnOptions mil;
  std::vector<double> mil_alpha0;
  std::optional<std::size_t> mil_n;
  std::optional<double> mil_hw;
  auto* milburn = app.add_subcommand("milburn", "compare the Milburn, anti-Wick and classical drifts");
  milburn->add_option("--mu", mil.mu, "anharmonicity")->check(CLI::NonNegativeNumber);
  milburn->add_option("--omega0", mil.omega0, "oscillator frequency")->check(CLI::PositiveNumber);
  milburn->add_option("--tau", mil.taus, "times for evolved-grid differences");
  milburn->add_option("--alpha0", mil_alpha0, "initial amplitude: re im")->expected(2);
  milburn->add_option("--n", mil_n, "points per axis");
  milburn->add_option("--half-width", mil_hw, "grid half-width in alpha units");
  milburn->add_option("-o,--out", mil.out, "output directory");

  OracleOptions orc;
  std::vector<double> orc_alpha0;
  std::optional<std::size_t> orc_n;
  std::optional<double> orc_hw;
  std::optional<unsigned> orc_terms;
  auto* orcl = app.add_subcommand("oracle", "write closed-form reference grids");
  orcl->add_option("--kind", orc.kind, "anharmonic or harmonic")->check(CLI::IsMember({"anharmonic", "harmonic"}));
  orcl->add_option("--mu", orc.mu, "coefficient of a+^2 a^2");
  orcl->add_option("--nu", orc.nu, "coefficient of a+ a (0 for the rotating frame)");
  orcl->add_option("--tau", orc.taus, "times");
  orcl->add_option("--alpha0", orc_alpha0, "initial amplitude: re im")->expected(2);
  orcl->add_option("--n", orc_n, "points per axis");
  orcl->add_option("--half-width", orc_hw, "grid half-width in alpha units");
  orcl->add_option("--terms", orc_terms, "S-series terms (default: from the tail bound)");
  orcl->add_option("-o,--out", orc.out, "output directory");

  SymbolOptions sym;
  std::string sym_out;
  std::string sym_g;
  auto* symbol = app.add_subcommand("symbol", "star products and Berezin transforms on JSON symbols");
  symbol->add_option("op", sym.op, "operation")
      ->required()
      ->check(CLI::IsMember({"wick_star", "antiwick_star", "wick_bracket", "antiwick_bracket", "berezin_inverse",
                             "berezin_forward", "adjoint", "to_real"}));
  symbol->add_option("--f", sym.f, "first symbol")->required()->check(CLI::ExistingFile);
  symbol->add_option("--g", sym_g, "second symbol")->check(CLI::ExistingFile);
  symbol->add_option("-o,--out", sym_out, "write the result here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    pde::apply_thread_limit_from_env();
    json report;
    if (*derive) {
      const RunConfig c = parse_run_config(load_json_file(derive_config));
      eom::Scheme scheme = c.scheme;
      if (!derive_scheme.empty()) scheme = derive_scheme == "P" ? eom::Scheme::PFunction : eom::Scheme::QFunction;
      const std::filesystem::path dir = !derive_out.empty() ? std::filesystem::path(derive_out) : c.outputs;
      report = cmd_derive(c.hamiltonian, scheme, dir, ov);
    } else if (*evolve) {
      report = cmd_evolve(build_config(evolve_o), ov);
      report.erase("manifest");
    } else if (*ehrenfest) {
      report = cmd_ehrenfest(build_config(ehr_o), observable, ov);
    } else if (*milburn) {
      if (mil_alpha0.size() == 2) mil.alpha0 = Complex(mil_alpha0[0], mil_alpha0[1]);
      if (mil_n || mil_hw) mil.grid = pde::GridSpec::square_alpha(mil_hw.value_or(6.5), mil_n.value_or(121));
      report = cmd_milburn(mil);
      report = {{"drift_artifact_present", report["drift_artifact_present"]},
                {"antiwick_drift_matches_classical", report["antiwick_drift_matches_classical"]},
                {"milburn_extra_drift_terms", report["milburn_extra_drift"].size()}};
    } else if (*orcl) {
      if (orc_alpha0.size() == 2) orc.alpha0 = Complex(orc_alpha0[0], orc_alpha0[1]);
      if (orc_n || orc_hw) orc.grid = pde::GridSpec::square_alpha(orc_hw.value_or(6.5), orc_n.value_or(121));
      orc.n_terms = orc_terms;
      report = cmd_oracle(orc);
      report.erase("manifest");
    } else if (*symbol) {
      if (!sym_g.empty()) sym.g = sym_g;
      report = cmd_symbol(sym);
      if (!sym_out.empty()) {
        pde::write_json(sym_out, report);
        return kExitOk;
      }
    }
    out << pde::format_json(report) << '\n';
    return kExitOk;
  } catch (const ComplementarityError& e) {
    err << "complementarity violation: " << e.what() << '\n';
    return kExitComplementarity;
  } catch (const NumericalInstability& e) {
    err << "numerical instability: " << e.what() << '\n';
    return kExitInstability;
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace starfield::cli
