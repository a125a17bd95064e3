#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "starfield/cli/config.hpp"

namespace starfield::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInstability = 3;
inline constexpr int kExitComplementarity = 4;

// eom.json, fp.json (single mode, order <= 2), beyond_diffusion.json, summary.txt.
nlohmann::json cmd_derive(const HamiltonianSpec& h, eom::Scheme scheme, const std::filesystem::path& out,
                          const ComplementarityOverride& override);

// Snapshot CSVs with sidecars, manifest.json, report.json and, with oracle
// comparison switched on, error_vs_time.csv.
nlohmann::json cmd_evolve(const RunConfig& config, const ComplementarityOverride& override);

struct MilburnOptions {
  double mu = 0.1;
  double omega0 = 1.0;
  std::vector<double> taus;  // evolved-grid comparison times; empty skips it
  pde::GridSpec grid = pde::GridSpec::square_alpha(6.5, 121);
  Complex alpha0{2.0, 0.0};
  std::filesystem::path out = "starfield_out";
};

// milburn.json: the three Hamiltonian branches, their drifts and verdicts.
nlohmann::json cmd_milburn(const MilburnOptions& options);

// observable: "hamiltonian", "identity", "alpha", a JSON file, or empty to use
// the config's observable. Writes ehrenfest.csv, ehrenfest_refined.csv and
// ehrenfest_summary.json.
nlohmann::json cmd_ehrenfest(const RunConfig& config, const std::string& observable,
                             const ComplementarityOverride& override);

struct OracleOptions {
  std::string kind = "anharmonic";  // or "harmonic"
  double mu = 0.1;
  double nu = 0.0;
  Complex alpha0{2.0, 0.0};
  std::vector<double> taus{0.0, 1.0};
  pde::GridSpec grid = pde::GridSpec::square_alpha(6.5, 121);
  std::optional<unsigned> n_terms;
  std::filesystem::path out = "starfield_out";
};

nlohmann::json cmd_oracle(const OracleOptions& options);

struct SymbolOptions {
  std::string op;
  std::filesystem::path f;
  std::optional<std::filesystem::path> g;
};

// wick_star, antiwick_star, wick_bracket, antiwick_bracket, berezin_inverse,
// berezin_forward, adjoint, to_real.
nlohmann::json cmd_symbol(const SymbolOptions& options);

// Full command line (without the program name). Maps errors to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace starfield::cli
