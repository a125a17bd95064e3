#include "starfield/pde/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace starfield::pde {

namespace {

std::string format9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void emit_json(std::string& out, const nlohmann::json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (v == 0.0) v = 0.0;
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
      break;
    }
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + ": ";
        emit_json(out, it.value(), indent, depth + 1);
      }
      out += "\n" + close + "}";
      break;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        emit_json(out, j[k], indent, depth + 1);
      }
      out += "\n" + close + "]";
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_json(const nlohmann::json& j, int indent) {
  std::string out;
  emit_json(out, j, indent, 0);
  return out;
}

void write_grid_csv(const std::filesystem::path& path, const PhaseSpaceGrid& grid) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "q,p,value\n";
  const GridSpec& s = grid.spec();
  for (std::size_t i = 0; i < s.nq; ++i) {
    const std::string q = format9(s.q(i));
    for (std::size_t j = 0; j < s.np; ++j) {
      out << q << ',' << format9(s.p(j)) << ',' << format9(grid.at(i, j)) << '\n';
    }
  }
}

PhaseSpaceGrid read_grid_csv(const std::filesystem::path& path, DistributionKind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "q,p,value") throw ConfigError(path.string() + ": missing q,p,value header");
  std::map<double, std::map<double, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double q, p, v;
    char c1, c2;
    if (!(ss >> q >> c1 >> p >> c2 >> v) || c1 != ',' || c2 != ',') {
      throw ConfigError(path.string() + ": malformed row '" + line + "'");
    }
    rows[q][p] = v;
  }
  if (rows.empty()) throw ConfigError(path.string() + ": no rows");
  const std::size_t np = rows.begin()->second.size();
  GridSpec spec{rows.begin()->first, rows.rbegin()->first, rows.begin()->second.begin()->first,
                rows.begin()->second.rbegin()->first, rows.size(), np};
  std::vector<double> values;
  values.reserve(spec.nq * np);
  for (const auto& [q, row] : rows) {
    if (row.size() != np) throw ConfigError(path.string() + ": ragged grid");
    for (const auto& [p, v] : row) values.push_back(v);
  }
  return PhaseSpaceGrid(spec, kind, std::move(values));
}

nlohmann::json grid_sidecar(const PhaseSpaceGrid& grid, double time) {
  const GridSpec& s = grid.spec();
  return {{"time", time},
          {"norm", grid.norm()},
          {"kind", std::string(to_string(grid.kind()))},
          {"extents", {{"q_min", s.q_min}, {"q_max", s.q_max}, {"p_min", s.p_min}, {"p_max", s.p_max}}},
          {"points", {{"nq", s.nq}, {"np", s.np}}},
          {"spacing", {{"dq", s.dq()}, {"dp", s.dp()}}}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << format_json(j) << '\n';
}

nlohmann::json write_trajectory(const std::filesystem::path& dir, const Trajectory& trajectory,
                                const std::string& prefix) {
  std::filesystem::create_directories(dir);
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k) {
    const auto& s = trajectory.snapshots[k];
    char stem[64];
    std::snprintf(stem, sizeof stem, "%s_%03zu", prefix.c_str(), k);
    write_grid_csv(dir / (std::string(stem) + ".csv"), s.grid);
    write_json(dir / (std::string(stem) + ".json"), grid_sidecar(s.grid, s.time));
    files.push_back({{"time", s.time},
                     {"norm", s.norm},
                     {"csv", std::string(stem) + ".csv"},
                     {"sidecar", std::string(stem) + ".json"}});
  }
  nlohmann::json manifest = {{"snapshots", files},
                             {"initial_norm", trajectory.initial_norm},
                             {"max_norm_drift", trajectory.max_norm_drift()},
                             {"steps", trajectory.steps}};
  write_json(dir / "manifest.json", manifest);
  return manifest;
}

int apply_thread_limit_from_env() {
  const char* v = std::getenv("STARFIELD_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError("STARFIELD_THREADS must be a positive integer");
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(n));
#endif
  return static_cast<int>(n);
}

}  // namespace starfield::pde
