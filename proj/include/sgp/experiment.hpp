#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sgp/config.hpp"
#include "sgp/energy.hpp"
#include "sgp/io.hpp"
#include "sgp/reference_tables.hpp"
#include "sgp/solver.hpp"

namespace sgp {

struct SeedRun {
  SolveReport report;
  std::optional<Field> u;  // absent when the seed failed
};

/// Min/max over the successful seeds of a batch.
struct BatchSummary {
  std::size_t seeds = 0;
  std::size_t failures = 0;
  double mu_min = 0.0, mu_max = 0.0;
  std::size_t descent_min = 0, descent_max = 0;
  std::size_t newton_min = 0, newton_max = 0;
  double time_min = 0.0, time_max = 0.0;
};

struct ExperimentResult {
  RunConfig config;
  std::vector<SeedRun> runs;
  BatchSummary summary;

  bool all_ok() const { return summary.failures == 0; }
};

inline Problem make_problem(const RunConfig& c) {
  const Grid grid = c.grid();
  return Problem(grid, load_potential(c, grid), c.g, c.particles);
}

/// Full pipeline for one seed. Solver errors end up in the report instead
/// of propagating, so a batch keeps going.
inline SeedRun run_seed(const RunConfig& c, const Problem& p, std::uint64_t seed) {
  SeedRun run;
  SolveReport& r = run.report;
  r.config = serialize_config(c);
  r.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto gs = solve_ground_state(p, c.pipeline(seed));
    r.mu = gs.mu;
    r.energy = gs.energy;
    r.beta_residual = gs.beta_residual;
    r.descent_iterations = gs.descent_iterations;
    r.newton_iterations = gs.newton_iterations;
    r.newton_attempts = gs.newton_attempts;
    r.descent_tolerance = gs.descent_tolerance;
    r.terminated_by = to_string(gs.descent_terminated_by);
    r.newton_converged = gs.newton_converged;
    r.newton_residual = gs.newton_residual;
    r.energy_trace = std::move(gs.energy_trace);
    r.newton_trace = std::move(gs.newton_trace);
    r.notes = std::move(gs.notes);
    if (!gs.newton_converged) {
      r.status = "failed";
      r.error = "newton refinement did not converge";
    }
    run.u = std::move(gs.u);
  } catch (const Error& e) {
    r.status = "failed";
    r.error = e.what();
  }
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

inline BatchSummary summarize(const std::vector<SeedRun>& runs) {
  BatchSummary s;
  s.seeds = runs.size();
  bool first = true;
  for (const auto& run : runs) {
    const auto& r = run.report;
    if (r.status != "ok") {
      ++s.failures;
      continue;
    }
    if (first) {
      s.mu_min = s.mu_max = r.mu;
      s.descent_min = s.descent_max = r.descent_iterations;
      s.newton_min = s.newton_max = r.newton_iterations;
      s.time_min = s.time_max = r.wall_time_s;
      first = false;
      continue;
    }
    s.mu_min = std::min(s.mu_min, r.mu);
    s.mu_max = std::max(s.mu_max, r.mu);
    s.descent_min = std::min(s.descent_min, r.descent_iterations);
    s.descent_max = std::max(s.descent_max, r.descent_iterations);
    s.newton_min = std::min(s.newton_min, r.newton_iterations);
    s.newton_max = std::max(s.newton_max, r.newton_iterations);
    s.time_min = std::min(s.time_min, r.wall_time_s);
    s.time_max = std::max(s.time_max, r.wall_time_s);
  }
  return s;
}

/// Runs every seed of the configuration in order. Configuration problems
/// (including an unreadable potential file) throw before any compute.
inline ExperimentResult run_experiment(const RunConfig& c) {
  validate(c);
  const Problem p = make_problem(c);
  ExperimentResult res;
  res.config = c;
  for (auto seed : c.seeds) res.runs.push_back(run_seed(c, p, seed));
  res.summary = summarize(res.runs);
  return res;
}

// ---------------------------------------------------------------------------
// Output

/// Output directory: the config value, else $SGP_OUTPUT_DIR, else ".".
inline std::filesystem::path output_directory(const RunConfig& c) {
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv("SGP_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

inline std::string seed_stem(const RunConfig& c, std::uint64_t seed) {
  return c.output_name + "_seed" + std::to_string(seed);
}

inline std::string cut_file_name(const std::string& stem, std::size_t axis) {
  return stem + "_cut_" + axis_name(axis) + ".csv";
}

inline std::vector<std::size_t> cut_axes_or_all(const std::vector<std::size_t>& axes, std::size_t dim) {
  if (!axes.empty()) return axes;
  std::vector<std::size_t> all(dim);
  for (std::size_t i = 0; i < dim; ++i) all[i] = i;
  return all;
}

inline std::string summary_json(const ExperimentResult& res) {
  const auto& s = res.summary;
  nlohmann::json j;
  j["format_version"] = kReportFormatVersion;
  j["config"] = serialize_config(res.config);
  j["seeds"] = s.seeds;
  j["failures"] = s.failures;
  j["mu_min"] = s.mu_min;
  j["mu_max"] = s.mu_max;
  j["descent_iterations_min"] = s.descent_min;
  j["descent_iterations_max"] = s.descent_max;
  j["newton_iterations_min"] = s.newton_min;
  j["newton_iterations_max"] = s.newton_max;
  j["wall_time_min_s"] = s.time_min;
  j["wall_time_max_s"] = s.time_max;
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& run : res.runs) reports.push_back(seed_stem(res.config, run.report.seed) + ".json");
  j["reports"] = reports;
  return j.dump(2) + "\n";
}

/// Writes <name>_seed<k>.json, the solution field and its density cuts for
/// every seed, plus <name>_summary.json. Returns the files written.
inline std::vector<std::filesystem::path> write_experiment(ExperimentResult& res) {
  const auto dir = output_directory(res.config);
  std::vector<std::filesystem::path> written;
  for (auto& run : res.runs) {
    const auto stem = seed_stem(res.config, run.report.seed);
    if (run.u) {
      run.report.field_file = stem + ".field.csv";
      write_file_atomic(dir / run.report.field_file, write_field_csv(*run.u));
      written.push_back(dir / run.report.field_file);
      for (const auto& cut : emit_density_cuts(*run.u, cut_axes_or_all(res.config.cut_axes, res.config.dim))) {
        write_file_atomic(dir / cut_file_name(stem, cut.axis), cut.csv);
        written.push_back(dir / cut_file_name(stem, cut.axis));
      }
    }
    write_file_atomic(dir / (stem + ".json"), write_report(run.report));
    written.push_back(dir / (stem + ".json"));
  }
  write_file_atomic(dir / (res.config.output_name + "_summary.json"), summary_json(res));
  written.push_back(dir / (res.config.output_name + "_summary.json"));
  return written;
}

/// Loads the field a report points at and checks it against the report's
/// configuration grid.
inline Field load_report_field(const std::filesystem::path& report_path, const SolveReport& r) {
  if (r.field_file.empty()) throw InvalidArgument("report has no field file (failed run?)");
  const RunConfig c = parse_config(r.config);
  return read_field_csv(read_file(report_path.parent_path() / r.field_file), c.grid());
}

// ---------------------------------------------------------------------------
// Table reproduction

struct TableCellResult {
  ReferenceCell paper;
  BatchSummary ours;
  double mu = 0.0;  // mean over successful seeds
  double rel_deviation = 0.0;
};

inline RunConfig table_config(const ReferenceTable& t, const ReferenceCell& cell, std::size_t seeds) {
  RunConfig c = default_config(t.dim);
  c.count.assign(t.dim, cell.count);
  c.half_length.assign(t.dim, t.half_length);
  c.particles = t.particles;
  c.g = cell.g;
  c.seeds.clear();
  for (std::size_t s = 1; s <= seeds; ++s) c.seeds.push_back(s);
  return c;
}

inline TableCellResult run_table_cell(const ReferenceTable& t, const ReferenceCell& cell, std::size_t seeds) {
  auto res = run_experiment(table_config(t, cell, seeds));
  TableCellResult out;
  out.paper = cell;
  out.ours = res.summary;
  double sum = 0.0;
  std::size_t ok = 0;
  for (const auto& run : res.runs)
    if (run.report.status == "ok") {
      sum += run.report.mu;
      ++ok;
    }
  out.mu = ok ? sum / static_cast<double>(ok) : std::nan("");
  out.rel_deviation = std::abs(out.mu - cell.mu) / cell.mu;
  return out;
}

/// Runs the cells of a published table (rows beyond the desk-scale limit
/// only with `full`) and prints our mu next to the paper's. Iteration and
/// time columns are informational.
inline std::vector<TableCellResult> reproduce_table(int id, std::size_t seeds, bool full, std::ostream& os) {
  const auto t = reference_table(id);
  if (t.id == 0) throw InvalidArgument("table id must be 1, 2 or 3");
  char line[256];
  std::snprintf(line, sizeof line, "Table %d: %zuD, N = %g, L = %g, %zu seed(s)\n", t.id, t.dim, t.particles,
                t.half_length, seeds);
  os << line;
  std::snprintf(line, sizeof line, "%6s %6s %11s %11s %9s | %13s %13s | %9s %9s | %19s\n", "n", "g", "mu(paper)",
                "mu(ours)", "rel.dev", "#S paper", "#S ours", "#N paper", "#N ours", "time paper/ours[s]");
  os << line;
  std::vector<TableCellResult> results;
  for (const auto& cell : t.cells) {
    if (!full && cell.count > t.desk_max_count) continue;
    auto r = run_table_cell(t, cell, seeds);
    std::snprintf(line, sizeof line,
                  "%6zu %6g %11.5g %11.7g %8.3f%% | %5zu..%-6zu %5zu..%-6zu | %3zu..%-4zu %3zu..%-4zu | %7.2g / %-8.3g%s\n",
                  cell.count, cell.g, cell.mu, r.mu, 100.0 * r.rel_deviation, cell.descent_min, cell.descent_max,
                  r.ours.descent_min, r.ours.descent_max, cell.newton_min, cell.newton_max, r.ours.newton_min,
                  r.ours.newton_max, cell.time_max, r.ours.time_max, r.ours.failures ? "  (seed failures)" : "");
    os << line << std::flush;
    results.push_back(r);
  }
  return results;
}

}  // namespace sgp
