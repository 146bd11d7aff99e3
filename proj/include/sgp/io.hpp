#pragma once

// File formats: node-value fields, run reports and density cuts.
// docs/formats.md carries the full reference.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgp/config.hpp"
#include "sgp/error.hpp"
#include "sgp/grid.hpp"
#include "sgp/potentials.hpp"

namespace sgp {

inline constexpr int kReportFormatVersion = 1;
inline constexpr const char* kFieldMagic = "# sgp-field v1";

// ---------------------------------------------------------------------------
// Field CSV
//
//   # sgp-field v1 dim=2 counts=64,64 half_lengths=10,10
//   <value>
//   ...
//
// One value per line in row-major order (last axis fastest), printed with
// 17 significant digits so a write/read cycle is bit-exact. half_lengths is
// optional on input.

inline std::string write_field_csv(const Field& f) {
  const Grid& g = f.grid();
  std::ostringstream out;
  out << kFieldMagic << " dim=" << g.dim() << " counts=";
  for (std::size_t i = 0; i < g.dim(); ++i) out << (i ? "," : "") << g.count(i);
  out << " half_lengths=";
  for (std::size_t i = 0; i < g.dim(); ++i) out << (i ? "," : "") << detail::fmt_double(g.half_length(i));
  out << '\n';
  char buf[32];
  for (double v : f.values()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
  return out.str();
}

struct FieldHeader {
  std::size_t dim = 0;
  std::vector<std::size_t> counts;
  std::vector<double> half_lengths;  // empty when absent
};

inline FieldHeader parse_field_header(const std::string& line) {
  if (line.rfind(kFieldMagic, 0) != 0) throw InvalidArgument("field file: missing '# sgp-field v1' header");
  FieldHeader h;
  std::istringstream ss(line.substr(std::string(kFieldMagic).size()));
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InvalidArgument("field file: malformed header token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const auto items = detail::split_list(tok.substr(eq + 1));
    try {
      if (key == "dim") {
        h.dim = detail::to_uint("dim", items.at(0));
      } else if (key == "counts") {
        for (const auto& s : items) h.counts.push_back(detail::to_uint("counts", s));
      } else if (key == "half_lengths") {
        for (const auto& s : items) h.half_lengths.push_back(detail::to_double("half_lengths", s));
      } else {
        throw InvalidArgument("field file: unknown header key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw InvalidArgument(std::string("field file header: ") + e.what());
    }
  }
  if (h.dim < 1 || h.dim > kMaxDim || h.counts.size() != h.dim)
    throw InvalidArgument("field file: header must declare dim in 1..3 and one count per axis");
  if (!h.half_lengths.empty() && h.half_lengths.size() != h.dim)
    throw InvalidArgument("field file: half_lengths must list one value per axis");
  return h;
}

/// Reads a field onto `grid`; the header must match the grid exactly.
inline Field read_field_csv(const std::string& text, const Grid& grid) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("field file: empty");
  const auto h = parse_field_header(line);
  if (h.dim != grid.dim()) throw GridMismatch("field file: dimension does not match the grid");
  for (std::size_t i = 0; i < h.dim; ++i) {
    if (h.counts[i] != grid.count(i)) throw GridMismatch("field file: node counts do not match the grid");
    if (!h.half_lengths.empty() && h.half_lengths[i] != grid.half_length(i))
      throw GridMismatch("field file: half-lengths do not match the grid");
  }
  std::vector<double> values;
  values.reserve(grid.size());
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    try {
      values.push_back(detail::to_double("value", t));
    } catch (const ConfigError&) {
      throw InvalidArgument("field file: bad value '" + t + "'");
    }
  }
  if (values.size() != grid.size())
    throw GridMismatch("field file: expected " + std::to_string(grid.size()) + " values, found " +
                       std::to_string(values.size()));
  return Field(grid, std::move(values));
}

/// Reads a field whose grid is fully described by its own header.
inline Field read_field_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("field file: empty");
  const auto h = parse_field_header(line);
  if (h.half_lengths.empty()) throw InvalidArgument("field file: half_lengths required to rebuild the grid");
  return read_field_csv(text, build_grid(h.dim, h.half_lengths, h.counts));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes via a temporary sibling and rename, so readers never see a
/// partially written file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw InvalidArgument("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

/// Potential for a configuration, loading tabulated data when requested.
inline PotentialSpec load_potential(const RunConfig& c, const Grid& grid) {
  if (c.potential != PotentialKind::tabulated) return c.analytic_potential();
  PotentialSpec spec;
  spec.shift = c.potential_shift;
  spec.shape = Tabulated{read_field_csv(read_file(c.potential_file), grid)};
  return spec;
}

// ---------------------------------------------------------------------------
// Run report (JSON)

struct SolveReport {
  int format_version = kReportFormatVersion;
  std::string config;  // serialize_config text of the run
  std::uint64_t seed = 0;
  std::string status = "ok";  // ok | failed
  std::string error;
  double mu = 0.0;
  double energy = 0.0;
  double beta_residual = 0.0;
  std::size_t descent_iterations = 0;
  std::size_t newton_iterations = 0;
  std::size_t newton_attempts = 0;
  double descent_tolerance = 0.0;
  std::string terminated_by;  // tolerance | max_iterations
  bool newton_converged = false;
  double newton_residual = 0.0;
  double wall_time_s = 0.0;
  std::vector<double> energy_trace;
  std::vector<double> newton_trace;
  std::vector<std::string> notes;
  std::string field_file;  // relative to the report's directory

  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

inline nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j;
  j["format_version"] = r.format_version;
  j["config"] = r.config;
  j["seed"] = r.seed;
  j["status"] = r.status;
  j["error"] = r.error;
  j["mu"] = r.mu;
  j["energy"] = r.energy;
  j["beta_residual"] = r.beta_residual;
  j["descent_iterations"] = r.descent_iterations;
  j["newton_iterations"] = r.newton_iterations;
  j["newton_attempts"] = r.newton_attempts;
  j["descent_tolerance"] = r.descent_tolerance;
  j["terminated_by"] = r.terminated_by;
  j["newton_converged"] = r.newton_converged;
  j["newton_residual"] = r.newton_residual;
  j["wall_time_s"] = r.wall_time_s;
  j["energy_trace"] = r.energy_trace;
  j["newton_trace"] = r.newton_trace;
  j["notes"] = r.notes;
  j["field_file"] = r.field_file;
  return j;
}

inline SolveReport report_from_json(const nlohmann::json& j) {
  SolveReport r;
  try {
    r.format_version = j.at("format_version").get<int>();
    if (r.format_version != kReportFormatVersion)
      throw InvalidArgument("unsupported report format_version " + std::to_string(r.format_version));
    r.config = j.at("config").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.status = j.at("status").get<std::string>();
    r.error = j.at("error").get<std::string>();
    r.mu = j.at("mu").get<double>();
    r.energy = j.at("energy").get<double>();
    r.beta_residual = j.at("beta_residual").get<double>();
    r.descent_iterations = j.at("descent_iterations").get<std::size_t>();
    r.newton_iterations = j.at("newton_iterations").get<std::size_t>();
    r.newton_attempts = j.at("newton_attempts").get<std::size_t>();
    r.descent_tolerance = j.at("descent_tolerance").get<double>();
    r.terminated_by = j.at("terminated_by").get<std::string>();
    r.newton_converged = j.at("newton_converged").get<bool>();
    r.newton_residual = j.at("newton_residual").get<double>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.energy_trace = j.at("energy_trace").get<std::vector<double>>();
    r.newton_trace = j.at("newton_trace").get<std::vector<double>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.field_file = j.at("field_file").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed report: ") + e.what());
  }
  return r;
}

inline std::string write_report(const SolveReport& r) { return to_json(r).dump(2) + "\n"; }

inline SolveReport read_report(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("report is not valid JSON: ") + e.what());
  }
  return report_from_json(j);
}

// ---------------------------------------------------------------------------
// Density cuts
//
// One CSV per axis. The header names the cut axis and pins the remaining
// coordinates, e.g. "x,density[y=0;z=0]"; each row is (coordinate, u^2)
// along the grid line through the node nearest the origin.

struct DensityCut {
  std::size_t axis = 0;
  std::string csv;
};

inline const char* axis_name(std::size_t axis) {
  static const char* names[] = {"x", "y", "z"};
  return axis < kMaxDim ? names[axis] : "?";
}

/// Index of the node closest to 0 along an axis (lowest index on ties).
inline std::size_t origin_index(const Grid& g, std::size_t axis) {
  std::size_t best = 0;
  for (std::size_t n = 1; n < g.count(axis); ++n)
    if (std::abs(g.coordinate(axis, n)) < std::abs(g.coordinate(axis, best))) best = n;
  return best;
}

inline std::vector<DensityCut> emit_density_cuts(const Field& u, const std::vector<std::size_t>& axes) {
  const Grid& g = u.grid();
  std::vector<DensityCut> cuts;
  std::array<std::size_t, kMaxDim> center{};
  for (std::size_t i = 0; i < g.dim(); ++i) center[i] = origin_index(g, i);
  for (std::size_t axis : axes) {
    if (axis >= g.dim())
      throw InvalidArgument("cut axis " + std::to_string(axis) + " out of range for a " + std::to_string(g.dim()) +
                            "D field");
    std::ostringstream out;
    out << axis_name(axis) << ",density";
    if (g.dim() > 1) {
      out << '[';
      bool first = true;
      for (std::size_t i = 0; i < g.dim(); ++i) {
        if (i == axis) continue;
        out << (first ? "" : ";") << axis_name(i) << '=' << detail::fmt_double(g.coordinate(i, center[i]));
        first = false;
      }
      out << ']';
    }
    out << '\n';
    auto idx = center;
    char buf[64];
    for (std::size_t n = 0; n < g.count(axis); ++n) {
      idx[axis] = n;
      const double v = u[g.flatten(idx)];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.coordinate(axis, n), v * v);
      out << buf;
    }
    cuts.push_back({axis, out.str()});
  }
  return cuts;
}

/// Rows of a cut CSV as (coordinate, density) pairs.
inline std::vector<std::pair<double, double>> parse_cut_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument("cut csv: malformed row '" + line + "'");
    rows.emplace_back(detail::to_double("x", detail::trim(line.substr(0, comma))),
                      detail::to_double("density", detail::trim(line.substr(comma + 1))));
  }
  return rows;
}

}  // namespace sgp
