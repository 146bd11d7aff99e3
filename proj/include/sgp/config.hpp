#pragma once

// Flat `key = value` run configuration.
//
// Grammar (one entry per line):
//   line    := blank | comment | entry
//   comment := '#' any*
//   entry   := key '=' value [ '#' any* ]
//   value   := scalar | scalar (',' scalar)*
// Keys are case-sensitive; whitespace around keys, values and commas is
// ignored. A key given twice keeps the later value, which is how command
// line overrides are layered on top of a file. Unknown keys are rejected.
// See docs/config.md for the key reference.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sgp/descent.hpp"
#include "sgp/error.hpp"
#include "sgp/newton.hpp"
#include "sgp/potentials.hpp"
#include "sgp/solver.hpp"

namespace sgp {

enum class PotentialKind { mexican_hat, harmonic, tabulated };

struct RunConfig {
  std::size_t dim = 1;
  std::vector<double> half_length{10.0};
  std::vector<std::size_t> count{128};

  PotentialKind potential = PotentialKind::mexican_hat;
  double A = 0.1;
  double B = 16.0;
  std::vector<double> C{1.0};
  double potential_shift = 0.0;
  std::string potential_file;

  double g = 1.0;
  double particles = 100.0;
  std::vector<std::uint64_t> seeds{1};

  double descent_rel_energy_tol = 1e-4;
  std::size_t descent_max_iterations = 100000;
  double descent_step_fallback = 1e-3;
  InitDistribution descent_init = InitDistribution::unit;
  std::size_t descent_max_escalations = 4;

  double newton_residual_tol = 1e-8;
  std::size_t newton_max_iterations = 100;
  double newton_linear_rel_tol = 1e-10;

  double elliptic_rel_residual_tol = 1e-10;

  std::string output_dir;  // empty: SGP_OUTPUT_DIR or the working directory
  std::string output_name = "run";
  std::vector<std::size_t> cut_axes;  // empty: every axis

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  PipelineConfig pipeline(std::uint64_t seed) const {
    PipelineConfig pc;
    pc.descent.rel_energy_tol = descent_rel_energy_tol;
    pc.descent.max_iterations = descent_max_iterations;
    pc.descent.step_fallback = descent_step_fallback;
    pc.descent.init = descent_init;
    pc.descent.seed = seed;
    pc.descent.elliptic.rel_residual_tol = elliptic_rel_residual_tol;
    pc.newton.residual_tol = newton_residual_tol;
    pc.newton.max_iterations = newton_max_iterations;
    pc.newton.linear_rel_tol = newton_linear_rel_tol;
    pc.max_escalations = descent_max_escalations;
    return pc;
  }

  Grid grid() const { return build_grid(dim, half_length, count); }

  /// Potential spec without tabulated data; see load_potential in io.hpp.
  PotentialSpec analytic_potential() const {
    PotentialSpec spec;
    spec.shift = potential_shift;
    if (potential == PotentialKind::harmonic) {
      spec.shape = Harmonic{};
    } else {
      MexicanHat m;
      m.A = A;
      m.B = B;
      for (std::size_t i = 0; i < C.size() && i < kMaxDim; ++i) m.C[i] = C[i];
      spec.shape = m;
    }
    return spec;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || v.empty()) throw ConfigError(key, "expected a real number, got '" + v + "'");
  if (!std::isfinite(x)) throw ConfigError(key, "value must be finite");
  return x;
}

inline std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || v.empty())
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  return x;
}

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += f(xs[i]);
  }
  return out;
}

}  // namespace detail

inline const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::mexican_hat: return "mexican_hat";
    case PotentialKind::harmonic: return "harmonic";
    default: return "tabulated";
  }
}

inline const char* to_string(InitDistribution d) { return d == InitDistribution::unit ? "unit" : "symmetric"; }

/// Default configuration for a dimension: [-10, 10)^d, Mexican hat with
/// A = 0.1, B = 16, C = (1, 1.5, 2), and the published particle numbers,
/// grid sizes and descent tolerances.
inline RunConfig default_config(std::size_t dim) {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("dim", "must be 1, 2 or 3");
  RunConfig c;
  c.dim = dim;
  c.half_length.assign(dim, 10.0);
  const std::size_t n = dim == 1 ? 128 : dim == 2 ? 64 : 32;
  c.count.assign(dim, n);
  c.C = std::vector<double>{1.0, 1.5, 2.0};
  c.C.resize(dim);
  c.particles = dim == 1 ? 1e2 : dim == 2 ? 1e3 : 1e4;
  c.descent_rel_energy_tol = DescentConfig::default_tolerance(dim);
  return c;
}

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "dim", "L", "n", "potential", "A", "B", "C", "potential_shift", "potential_file", "g", "N", "seeds",
      "descent.rel_energy_tol", "descent.max_iterations", "descent.step_fallback", "descent.init",
      "descent.max_escalations", "newton.residual_tol", "newton.max_iterations", "newton.linear_rel_tol",
      "elliptic.rel_residual_tol", "output.dir", "output.name", "output.cut_axes"};
  return keys;
}

/// Validates every module precondition that can be checked without
/// touching the filesystem.
inline void validate(const RunConfig& c) {
  if (c.dim < 1 || c.dim > kMaxDim) throw ConfigError("dim", "must be 1, 2 or 3");
  if (c.half_length.size() != c.dim) throw ConfigError("L", "needs one value per axis (or a single value)");
  for (double l : c.half_length)
    if (!(l > 0.0)) throw ConfigError("L", "half-lengths must be positive");
  if (c.count.size() != c.dim) throw ConfigError("n", "needs one value per axis (or a single value)");
  for (std::size_t n : c.count)
    if (n < 4) throw ConfigError("n", "each axis needs at least 4 nodes");
  if (c.potential == PotentialKind::mexican_hat) {
    if (!(c.A > 0.0)) throw ConfigError("A", "must be positive");
    if (c.C.size() < c.dim) throw ConfigError("C", "needs at least one coefficient per axis");
    for (std::size_t i = 0; i < c.dim; ++i)
      if (c.C[i] == 0.0) throw ConfigError("C", "coefficients must be nonzero");
  }
  if (c.potential == PotentialKind::tabulated && c.potential_file.empty())
    throw ConfigError("potential_file", "required when potential = tabulated");
  if (!(c.g >= 0.0)) throw ConfigError("g", "coupling must be >= 0");
  if (!(c.particles > 0.0)) throw ConfigError("N", "particle number must be > 0");
  if (c.seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (!(c.descent_rel_energy_tol > 0.0)) throw ConfigError("descent.rel_energy_tol", "must be > 0");
  if (c.descent_max_iterations < 1) throw ConfigError("descent.max_iterations", "must be >= 1");
  if (!(c.descent_step_fallback > 0.0)) throw ConfigError("descent.step_fallback", "must be > 0");
  if (!(c.newton_residual_tol > 0.0)) throw ConfigError("newton.residual_tol", "must be > 0");
  if (c.newton_max_iterations < 1) throw ConfigError("newton.max_iterations", "must be >= 1");
  if (!(c.newton_linear_rel_tol > 0.0 && c.newton_linear_rel_tol < 1.0))
    throw ConfigError("newton.linear_rel_tol", "must lie in (0, 1)");
  if (!(c.elliptic_rel_residual_tol > 0.0 && c.elliptic_rel_residual_tol <= 1e-4))
    throw ConfigError("elliptic.rel_residual_tol", "must lie in (0, 1e-4]");
  if (c.output_name.empty() || c.output_name.find('/') != std::string::npos)
    throw ConfigError("output.name", "must be a plain, non-empty file stem");
  for (std::size_t a : c.cut_axes)
    if (a >= c.dim) throw ConfigError("output.cut_axes", "axis index out of range");
}

/// Parses a configuration document. Dimension-dependent defaults come from
/// default_config(dim); scalar L and n broadcast to every axis.
inline RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value', got '" + t + "'");
    std::string key = detail::trim(std::string_view(t).substr(0, eq));
    std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
      throw ConfigError(key, "unknown key");
    if (value.empty()) throw ConfigError(key, "missing value");
    kv[key] = value;
  }

  std::size_t dim = 1;
  if (auto it = kv.find("dim"); it != kv.end()) {
    dim = detail::to_uint("dim", it->second);
    if (dim < 1 || dim > kMaxDim) throw ConfigError("dim", "must be 1, 2 or 3");
  }
  RunConfig c = default_config(dim);

  auto real = [&](const char* key, double& out) {
    if (auto it = kv.find(key); it != kv.end()) out = detail::to_double(key, it->second);
  };
  auto count = [&](const char* key, std::size_t& out) {
    if (auto it = kv.find(key); it != kv.end()) out = detail::to_uint(key, it->second);
  };
  auto real_list = [&](const char* key, std::vector<double>& out, bool broadcast) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    out.clear();
    for (const auto& s : detail::split_list(it->second)) out.push_back(detail::to_double(key, s));
    if (broadcast && out.size() == 1) out.assign(dim, out[0]);
  };

  real_list("L", c.half_length, true);
  if (auto it = kv.find("n"); it != kv.end()) {
    c.count.clear();
    for (const auto& s : detail::split_list(it->second)) c.count.push_back(detail::to_uint("n", s));
    if (c.count.size() == 1) c.count.assign(dim, c.count[0]);
  }
  if (auto it = kv.find("potential"); it != kv.end()) {
    if (it->second == "mexican_hat") c.potential = PotentialKind::mexican_hat;
    else if (it->second == "harmonic") c.potential = PotentialKind::harmonic;
    else if (it->second == "tabulated") c.potential = PotentialKind::tabulated;
    else throw ConfigError("potential", "expected mexican_hat, harmonic or tabulated, got '" + it->second + "'");
  }
  real("A", c.A);
  real("B", c.B);
  real_list("C", c.C, false);
  real("potential_shift", c.potential_shift);
  if (auto it = kv.find("potential_file"); it != kv.end()) c.potential_file = it->second;
  real("g", c.g);
  real("N", c.particles);
  if (auto it = kv.find("seeds"); it != kv.end()) {
    c.seeds.clear();
    for (const auto& s : detail::split_list(it->second)) c.seeds.push_back(detail::to_uint("seeds", s));
  }
  real("descent.rel_energy_tol", c.descent_rel_energy_tol);
  count("descent.max_iterations", c.descent_max_iterations);
  real("descent.step_fallback", c.descent_step_fallback);
  if (auto it = kv.find("descent.init"); it != kv.end()) {
    if (it->second == "unit") c.descent_init = InitDistribution::unit;
    else if (it->second == "symmetric") c.descent_init = InitDistribution::symmetric;
    else throw ConfigError("descent.init", "expected unit or symmetric, got '" + it->second + "'");
  }
  count("descent.max_escalations", c.descent_max_escalations);
  real("newton.residual_tol", c.newton_residual_tol);
  count("newton.max_iterations", c.newton_max_iterations);
  real("newton.linear_rel_tol", c.newton_linear_rel_tol);
  real("elliptic.rel_residual_tol", c.elliptic_rel_residual_tol);
  if (auto it = kv.find("output.dir"); it != kv.end()) c.output_dir = it->second;
  if (auto it = kv.find("output.name"); it != kv.end()) c.output_name = it->second;
  if (auto it = kv.find("output.cut_axes"); it != kv.end()) {
    for (const auto& s : detail::split_list(it->second)) {
      if (s == "x") c.cut_axes.push_back(0);
      else if (s == "y") c.cut_axes.push_back(1);
      else if (s == "z") c.cut_axes.push_back(2);
      else c.cut_axes.push_back(detail::to_uint("output.cut_axes", s));
    }
  }
  validate(c);
  return c;
}

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& c) {
  using detail::fmt_double;
  auto dbl = [](double x) { return fmt_double(x); };
  auto u64 = [](auto x) { return std::to_string(x); };
  std::ostringstream out;
  out << "dim = " << c.dim << '\n';
  out << "L = " << detail::join(c.half_length, dbl) << '\n';
  out << "n = " << detail::join(c.count, u64) << '\n';
  out << "potential = " << to_string(c.potential) << '\n';
  out << "A = " << fmt_double(c.A) << '\n';
  out << "B = " << fmt_double(c.B) << '\n';
  out << "C = " << detail::join(c.C, dbl) << '\n';
  out << "potential_shift = " << fmt_double(c.potential_shift) << '\n';
  if (!c.potential_file.empty()) out << "potential_file = " << c.potential_file << '\n';
  out << "g = " << fmt_double(c.g) << '\n';
  out << "N = " << fmt_double(c.particles) << '\n';
  out << "seeds = " << detail::join(c.seeds, u64) << '\n';
  out << "descent.rel_energy_tol = " << fmt_double(c.descent_rel_energy_tol) << '\n';
  out << "descent.max_iterations = " << c.descent_max_iterations << '\n';
  out << "descent.step_fallback = " << fmt_double(c.descent_step_fallback) << '\n';
  out << "descent.init = " << to_string(c.descent_init) << '\n';
  out << "descent.max_escalations = " << c.descent_max_escalations << '\n';
  out << "newton.residual_tol = " << fmt_double(c.newton_residual_tol) << '\n';
  out << "newton.max_iterations = " << c.newton_max_iterations << '\n';
  out << "newton.linear_rel_tol = " << fmt_double(c.newton_linear_rel_tol) << '\n';
  out << "elliptic.rel_residual_tol = " << fmt_double(c.elliptic_rel_residual_tol) << '\n';
  if (!c.output_dir.empty()) out << "output.dir = " << c.output_dir << '\n';
  out << "output.name = " << c.output_name << '\n';
  if (!c.cut_axes.empty()) out << "output.cut_axes = " << detail::join(c.cut_axes, u64) << '\n';
  return out.str();
}

}  // namespace sgp
