#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sgp/energy.hpp"
#include "sgp/error.hpp"
#include "sgp/grid.hpp"
#include "sgp/sobolev.hpp"

namespace sgp {

/// Distribution of the interior values of the random starting field.
enum class InitDistribution {
  unit,       // uniform on [0, 1)
  symmetric,  // uniform on [-1, 1)
};

struct DescentConfig {
  double rel_energy_tol = 1e-4;
  std::size_t max_iterations = 100000;
  std::uint64_t seed = 1;
  double step_fallback = 1e-3;
  InitDistribution init = InitDistribution::unit;
  EllipticSolveConfig elliptic{};

  /// Stopping tolerance on the relative energy change used for each dimension.
  static double default_tolerance(std::size_t dim) { return dim == 2 ? 1e-3 : 1e-4; }

  void validate() const {
    if (!(rel_energy_tol > 0.0)) throw InvalidArgument("descent rel_energy_tol must be > 0");
    if (max_iterations < 1) throw InvalidArgument("descent max_iterations must be >= 1");
    if (!(step_fallback > 0.0)) throw InvalidArgument("descent step_fallback must be > 0");
    elliptic.validate();
  }
};

enum class Termination { tolerance, max_iterations };

inline const char* to_string(Termination t) {
  return t == Termination::tolerance ? "tolerance" : "max_iterations";
}

/// Evolving iterate of the projected Sobolev-gradient flow.
struct DescentState {
  Field u;
  double energy = 0.0;
  std::size_t iteration = 0;
  std::vector<double> energy_trace;         // energy_trace[k] = E(u_k)
  std::vector<double> beta_residual_trace;  // |beta(u_k) - N| / N
  // Diagnostics of the most recent step.
  double last_step = 0.0;
  double last_direction_norm = 0.0;    // ||d||_H
  double last_direction_dot_grad = 0.0;  // <d, grad_H E(u)>_H
  std::size_t last_halvings = 0;
};

struct DescentResult {
  Field u;
  std::size_t iterations = 0;
  std::vector<double> energy_trace;
  std::vector<double> beta_residual_trace;
  Termination terminated_by = Termination::max_iterations;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit Mersenne
/// Twister draw. std::mt19937_64 is fully specified by the standard, so
/// a given seed reproduces the same sequence on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Random field with iid uniform interior values, zero on the outer layer of
/// every axis, scaled to beta = N.
///
/// The default [0, 1) draw keeps the start sign-definite. Sign-changing
/// starts tend to settle onto stationary states with nodes, which are
/// saddles of the constrained energy but can hold the flow for a very long
/// time when g is large.
inline Field init_random(const Grid& grid, double particles, std::uint64_t seed,
                         InitDistribution dist = InitDistribution::unit) {
  if (!(particles > 0.0)) throw InvalidArgument("particle number N must be > 0");
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::mt19937_64 rng(attempt == 0 ? seed : seed ^ 0x9e3779b97f4a7c15ULL);
    Field u(grid);
    double sum = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto idx = grid.unflatten(k);
      bool boundary = false;
      for (std::size_t i = 0; i < grid.dim(); ++i)
        boundary = boundary || idx[i] == 0 || idx[i] + 1 == grid.count(i);
      if (boundary) continue;
      u[k] = dist == InitDistribution::unit ? uniform01(rng) : 2.0 * uniform01(rng) - 1.0;
      sum += u[k] * u[k];
    }
    if (sum > 0.0) {
      u *= std::sqrt(particles / (grid.quad_weight() * sum));
      return u;
    }
  }
  throw SolverError("random initial field vanished twice", 0.0, 2);
}

/// p(s) = E(u - s d) = c0 + c1 s + c2 s^2 + c3 s^3 + c4 s^4.
struct QuarticProfile {
  std::array<double, 5> c{};
  double direction_norm_h = 0.0;

  double value(double s) const { return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * c[4]))); }
  double slope(double s) const { return c[1] + s * (2.0 * c[2] + s * (3.0 * c[3] + s * 4.0 * c[4])); }
  double curvature(double s) const { return 2.0 * c[2] + s * (6.0 * c[3] + s * 12.0 * c[4]); }
};

inline QuarticProfile line_profile(const Problem& p, const Field& u, const Field& d) {
  require_grid(p.grid(), u);
  require_grid(p.grid(), d);
  const auto& grid = p.grid();
  const auto x = u.values();
  const auto y = d.values();
  const auto v = p.potential().values();
  const double k_uu = detail::gradient_dot(grid, x, x);
  const double k_ud = detail::gradient_dot(grid, x, y);
  const double k_dd = detail::gradient_dot(grid, y, y);
  double v_uu = 0, v_ud = 0, v_dd = 0, s4 = 0, s3 = 0, s2 = 0, s1 = 0, s0 = 0, dd = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = x[k], b = y[k];
    v_uu += v[k] * a * a;
    v_ud += v[k] * a * b;
    v_dd += v[k] * b * b;
    s4 += a * a * a * a;
    s3 += a * a * a * b;
    s2 += a * a * b * b;
    s1 += a * b * b * b;
    s0 += b * b * b * b;
    dd += b * b;
  }
  const double w = grid.quad_weight();
  const double g = p.g();
  QuarticProfile q;
  q.c = {w * (0.5 * k_uu + v_uu + 0.5 * g * s4), -w * (k_ud + 2.0 * v_ud + 2.0 * g * s3),
         w * (0.5 * k_dd + v_dd + 3.0 * g * s2), -w * 2.0 * g * s1, w * 0.5 * g * s0};
  q.direction_norm_h = std::sqrt(w * (dd + k_dd));
  return q;
}

namespace detail {

// Real roots of a3 s^3 + a2 s^2 + a1 s + a0 with a3 != 0.
inline std::vector<double> cubic_roots(double a3, double a2, double a1, double a0) {
  const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
  const double q = (b * b - 3.0 * c) / 9.0;
  const double r = (2.0 * b * b * b - 9.0 * b * c + 27.0 * d) / 54.0;
  std::vector<double> roots;
  if (r * r < q * q * q) {
    const double theta = std::acos(std::clamp(r / std::sqrt(q * q * q), -1.0, 1.0));
    const double m = -2.0 * std::sqrt(q);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (double shift : {0.0, two_pi, -two_pi}) roots.push_back(m * std::cos((theta + shift) / 3.0) - b / 3.0);
  } else {
    const double a = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q * q * q)), r);
    const double bb = a == 0.0 ? 0.0 : q / a;
    roots.push_back(a + bb - b / 3.0);
  }
  return roots;
}

}  // namespace detail

/// Step size minimizing E(u - s d) over s > 0.
///
/// The stationary points of the quartic are the real roots of its cubic
/// derivative; the positive one with the smallest energy wins. Returns
/// `fallback` when ||d||_H < 1e-14 or no positive stationary point exists.
inline double line_search(const QuarticProfile& q, double fallback) {
  if (q.direction_norm_h < 1e-14) return fallback;
  std::vector<double> candidates;
  if (q.c[2] > 0.0) candidates.push_back(-q.c[1] / (2.0 * q.c[2]));
  if (q.c[4] != 0.0 || q.c[3] != 0.0) {
    std::vector<double> r = q.c[4] != 0.0 ? detail::cubic_roots(4.0 * q.c[4], 3.0 * q.c[3], 2.0 * q.c[2], q.c[1])
                                          : std::vector<double>{};
    candidates.insert(candidates.end(), r.begin(), r.end());
    // Polish on p' since the quadratic guess and the closed-form roots both
    // lose digits when the quartic term is small.
    for (double& s : candidates)
      for (int it = 0; it < 4; ++it) {
        const double h = q.curvature(s);
        if (h == 0.0) break;
        const double step = q.slope(s) / h;
        if (!std::isfinite(step)) break;
        s -= step;
      }
  }
  double best = fallback;
  double best_val = std::numeric_limits<double>::infinity();
  for (double s : candidates) {
    if (!(s > 0.0) || !std::isfinite(s)) continue;
    const double val = q.value(s);
    if (val < best_val) {
      best_val = val;
      best = s;
    }
  }
  return best;
}

inline double line_search(const Problem& p, const Field& u, const Field& d, double fallback = 1e-3) {
  return line_search(line_profile(p, u, d), fallback);
}

inline DescentState make_state(const Problem& p, Field u) {
  require_grid(p.grid(), u);
  DescentState st;
  st.energy = energy(p, u);
  st.energy_trace.push_back(st.energy);
  st.beta_residual_trace.push_back(std::abs(beta(p, u) - p.particles()) / p.particles());
  st.u = std::move(u);
  return st;
}

/// One explicit Euler step of the projected Sobolev-gradient flow with
/// exact line search and renormalization onto beta = N.
inline DescentState descent_step(const Problem& p, DescentState state, const DescentConfig& cfg) {
  const Grid& grid = p.grid();
  ProjectionCache cache(grid, state.u, cfg.elliptic);
  const Field grad = sobolev_gradient(p, cache, cfg.elliptic);
  const Field d = project(cache, grad);
  const auto profile = line_profile(p, state.u, d);
  double s = line_search(profile, cfg.step_fallback);

  const double limit = state.energy * (1.0 + 1e-12);
  std::size_t halvings = 0;
  Field next;
  double e_next = 0.0;
  for (;;) {
    next = state.u;
    next.axpy(-s, d);
    const double b = beta(p, next);
    if (!(b > 0.0)) throw SolverError("descent step produced the zero field", b, state.iteration);
    next *= std::sqrt(p.particles() / b);
    e_next = energy(p, next);
    if (e_next <= limit && std::isfinite(e_next)) break;
    if (++halvings > 30)
      throw SolverError("descent stagnated: energy rose after 30 step halvings (E=" +
                            std::to_string(state.energy) + ", step " + std::to_string(s) + ")",
                        e_next, state.iteration);
    s *= 0.5;
  }

  state.last_step = s;
  state.last_direction_norm = profile.direction_norm_h;
  state.last_direction_dot_grad = inner_h1(grid, d, grad);
  state.last_halvings = halvings;
  state.u = std::move(next);
  state.energy = e_next;
  ++state.iteration;
  state.energy_trace.push_back(e_next);
  state.beta_residual_trace.push_back(std::abs(beta(p, state.u) - p.particles()) / p.particles());
  return state;
}

/// Advances `state` until the relative energy change of one step drops
/// below cfg.rel_energy_tol or the total iteration count reaches
/// cfg.max_iterations.
inline Termination descend(const Problem& p, DescentState& state, const DescentConfig& cfg) {
  cfg.validate();
  while (state.iteration < cfg.max_iterations) {
    const double before = state.energy;
    state = descent_step(p, std::move(state), cfg);
    if (std::abs(state.energy - before) / std::abs(before) < cfg.rel_energy_tol) return Termination::tolerance;
  }
  return Termination::max_iterations;
}

inline DescentResult to_result(DescentState state, Termination t) {
  DescentResult res;
  res.u = std::move(state.u);
  res.iterations = state.iteration;
  res.energy_trace = std::move(state.energy_trace);
  res.beta_residual_trace = std::move(state.beta_residual_trace);
  res.terminated_by = t;
  return res;
}

inline DescentResult run_descent(const Problem& p, Field u0, const DescentConfig& cfg) {
  cfg.validate();
  auto state = make_state(p, normalize(p, std::move(u0)));
  const auto t = descend(p, state, cfg);
  return to_result(std::move(state), t);
}

/// Full descent from the seeded random start.
inline DescentResult run_descent(const Problem& p, const DescentConfig& cfg) {
  return run_descent(p, init_random(p.grid(), p.particles(), cfg.seed, cfg.init), cfg);
}

}  // namespace sgp
