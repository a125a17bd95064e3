#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "starfield/eom/eom_series.hpp"
#include "starfield/pde/grid.hpp"
#include "starfield/pde/integrator.hpp"

namespace starfield::cli {

using symbols::PolynomialSymbol;

enum class Quantization { ClassicalAntiWick, ClassicalWick, NormalOrderedOperator };

std::string_view to_string(Quantization q);
Quantization parse_quantization(std::string_view text);

struct HamiltonianSpec {
  Quantization quantization = Quantization::ClassicalAntiWick;
  std::size_t modes = 1;
  std::map<std::string, double> parameters;  // omega0 defaults to 1
  bool self_adjoint = true;
  bool rotating_frame = false;
  // Wick symbol for the Wick-side tags, anti-Wick symbol otherwise.
  PolynomialSymbol symbol;

  double omega0() const;
};

// {"quantization", "monomials" | "preset", "parameters", "modes", "frame", "self_adjoint"}.
// Coefficients are numbers, [re, im], {"re", "im"} or products of parameter
// names and numbers such as "-0.5*omega0*mu".
HamiltonianSpec parse_hamiltonian(const nlohmann::json& j);

// Parses a symbol given as {"kind", "monomials"} with the Hamiltonian
// monomial syntax, or in the serialized {"modes", "terms", "kind"} form.
PolynomialSymbol parse_observable(const nlohmann::json& j, const std::map<std::string, double>& parameters,
                                  std::size_t modes);

struct ComplementarityOverride {
  bool wick_for_q = false;      // --i-know-this-is-wick
  bool antiwick_for_p = false;  // --i-know-this-is-antiwick
};

// The Hamiltonian symbol the scheme's series needs: anti-Wick for Q, Wick for P.
// A mismatched kind is a ComplementarityError unless explicitly overridden, in
// which case the Berezin transform supplies the complementary symbol.
PolynomialSymbol scheme_hamiltonian(const HamiltonianSpec& h, eom::Scheme scheme,
                                    const ComplementarityOverride& override);

struct InitialState {
  std::string type = "coherent";  // or "gaussian_p"
  Complex alpha0{2.0, 0.0};
  double nbar = 0.5;
  pde::MarginPolicy margin{};
};

enum class OracleMode { Auto, On, Off };

struct RunConfig {
  HamiltonianSpec hamiltonian;
  eom::Scheme scheme = eom::Scheme::QFunction;
  pde::GridSpec grid = pde::GridSpec::square_alpha(6.5, 121);
  InitialState initial;
  pde::IntegratorConfig integrator;
  std::size_t snapshot_count = 5;
  std::filesystem::path outputs = "starfield_out";
  OracleMode compare_oracle = OracleMode::Auto;
  double ehrenfest_spacing = 0.04;
  std::optional<nlohmann::json> observable;

  // Rejects inconsistent settings before any computation.
  void validate() const;
};

RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json load_json_file(const std::filesystem::path& path);

}  // namespace starfield::cli
