// sgp: ground states of the discretized Gross-Pitaevskii energy.
//
//   sgp solve <config> [--<key> value]... [--set key=value]...
//   sgp table <1|2|3> [--seeds k] [--full]
//   sgp cuts <report.json> <axes>
//
// Exit status: 0 success, 1 configuration/input error, 2 solver failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgp/sgp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

std::vector<std::size_t> parse_axes(const std::string& text) {
  std::vector<std::size_t> axes;
  for (const auto& s : sgp::detail::split_list(text)) {
    if (s == "x") axes.push_back(0);
    else if (s == "y") axes.push_back(1);
    else if (s == "z") axes.push_back(2);
    else axes.push_back(sgp::detail::to_uint("axes", s));
  }
  if (axes.empty()) throw sgp::ConfigError("axes", "no axis given");
  return axes;
}

int cmd_solve(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::string text = sgp::read_file(path);
  text += "\n";
  for (const auto& [k, v] : overrides) text += k + " = " + v + "\n";
  const auto cfg = sgp::parse_config(text);

  auto res = sgp::run_experiment(cfg);
  const auto files = sgp::write_experiment(res);

  for (const auto& run : res.runs) {
    const auto& r = run.report;
    if (r.status == "ok") {
      std::printf("seed %llu: mu = %.10g  E = %.10g  descent %zu  newton %zu (attempt %zu)  %.2fs\n",
                  static_cast<unsigned long long>(r.seed), r.mu, r.energy, r.descent_iterations,
                  r.newton_iterations, r.newton_attempts, r.wall_time_s);
    } else {
      std::printf("seed %llu: FAILED: %s\n", static_cast<unsigned long long>(r.seed), r.error.c_str());
    }
  }
  const auto& s = res.summary;
  if (s.seeds > 1)
    std::printf("summary: mu in [%.10g, %.10g], descent %zu..%zu, newton %zu..%zu, %zu failure(s)\n", s.mu_min,
                s.mu_max, s.descent_min, s.descent_max, s.newton_min, s.newton_max, s.failures);
  std::printf("wrote %zu file(s) to %s\n", files.size(), sgp::output_directory(cfg).string().c_str());
  return res.all_ok() ? kExitOk : kExitSolver;
}

int cmd_table(int id, std::size_t seeds, bool full) {
  const auto cells = sgp::reproduce_table(id, seeds, full, std::cout);
  for (const auto& c : cells)
    if (c.ours.failures) return kExitSolver;
  return kExitOk;
}

int cmd_cuts(const std::string& report_path, const std::string& axes_text, const std::string& out_dir) {
  const auto report = sgp::read_report(sgp::read_file(report_path));
  const auto u = sgp::load_report_field(report_path, report);
  const auto axes = parse_axes(axes_text);

  std::filesystem::path dir = out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("SGP_OUTPUT_DIR");
    dir = env && *env ? std::filesystem::path(env) : std::filesystem::path(report_path).parent_path();
  }
  if (dir.empty()) dir = ".";
  const auto stem = std::filesystem::path(report_path).stem().string();
  for (const auto& cut : sgp::emit_density_cuts(u, axes)) {
    const auto file = dir / sgp::cut_file_name(stem, cut.axis);
    sgp::write_file_atomic(file, cut.csv);
    std::printf("%s\n", file.string().c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sobolev gradient ground states of the Gross-Pitaevskii energy"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "run descent + Newton for every seed of a config file");
  std::string config_path;
  solve->add_option("config", config_path, "configuration file")->required();
  std::vector<std::string> sets;
  solve->add_option("--set", sets, "override a config key, key=value (repeatable)");
  // One flag per config key; "--output.dir" also answers to -o.
  std::map<std::string, std::string> key_flags;
  for (const auto& key : sgp::config_keys()) {
    const std::string names = key == "output.dir" ? "-o,--" + key : "--" + key;
    solve->add_option(names, key_flags[key], "override '" + key + "'");
  }

  auto* table = app.add_subcommand("table", "reproduce a published results table");
  int table_id = 0;
  std::size_t table_seeds = 3;
  bool full = false;
  table->add_option("id", table_id, "table number")->required()->check(CLI::IsMember({1, 2, 3}));
  table->add_option("--seeds", table_seeds, "seeds per cell")->check(CLI::PositiveNumber);
  table->add_flag("--full", full, "include grids beyond the desk-scale default");

  auto* cuts = app.add_subcommand("cuts", "write density cuts for a saved run");
  std::string report_path, axes_text, cuts_dir;
  cuts->add_option("report", report_path, "per-seed report (JSON)")->required();
  cuts->add_option("axes", axes_text, "comma-separated axes, e.g. x,y or 0,1")->required();
  cuts->add_option("-o,--output-dir", cuts_dir, "directory for the CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*solve) {
      std::vector<std::pair<std::string, std::string>> overrides;
      for (const auto& key : sgp::config_keys())
        if (solve->count("--" + key)) overrides.emplace_back(key, key_flags[key]);
      for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw sgp::ConfigError(kv, "--set expects key=value");
        overrides.emplace_back(sgp::detail::trim(kv.substr(0, eq)), sgp::detail::trim(kv.substr(eq + 1)));
      }
      return cmd_solve(config_path, overrides);
    }
    if (*table) return cmd_table(table_id, table_seeds, full);
    return cmd_cuts(report_path, axes_text, cuts_dir);
  } catch (const sgp::ConfigError& e) {
    std::fprintf(stderr, "sgp: %s\n", e.what());
    return kExitConfig;
  } catch (const sgp::SolverError& e) {
    std::fprintf(stderr, "sgp: solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const sgp::Error& e) {
    std::fprintf(stderr, "sgp: %s\n", e.what());
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "sgp: %s\n", e.what());
    return kExitConfig;
  }
}
