#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "starfield/pde/integrator.hpp"

namespace starfield::pde {

// Rows "q,p,value" with 9 significant digits.
void write_grid_csv(const std::filesystem::path& path, const PhaseSpaceGrid& grid);
PhaseSpaceGrid read_grid_csv(const std::filesystem::path& path, DistributionKind kind);

nlohmann::json grid_sidecar(const PhaseSpaceGrid& grid, double time);

// snapshot_NNN.csv + .json per snapshot and manifest.json listing them.
nlohmann::json write_trajectory(const std::filesystem::path& dir, const Trajectory& trajectory,
                                const std::string& prefix = "snapshot");

// Indented JSON with floats at 17 significant digits; object keys keep JSON order.
std::string format_json(const nlohmann::json& j, int indent = 2);

// Writes format_json output with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Caps OpenMP threads from STARFIELD_THREADS; returns the cap or 0 when unset.
int apply_thread_limit_from_env();

}  // namespace starfield::pde
