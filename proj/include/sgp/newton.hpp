#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sgp/energy.hpp"
#include "sgp/error.hpp"
#include "sgp/grid.hpp"
#include "sgp/linalg.hpp"

namespace sgp {

struct NewtonConfig {
  double residual_tol = 1e-8;
  std::size_t max_iterations = 100;
  double linear_rel_tol = 1e-10;
  std::size_t linear_max_iterations = 0;  // 0: min(2 n + 10, 20000)
  std::size_t max_halvings = 10;
  // Consecutive steps damped below 1/4 before the start is declared outside
  // the Newton basin. 0 disables the check.
  std::size_t stall_limit = 5;

  void validate() const {
    if (!(residual_tol > 0.0)) throw InvalidArgument("newton residual_tol must be > 0");
    if (max_iterations < 1) throw InvalidArgument("newton max_iterations must be >= 1");
    if (!(linear_rel_tol > 0.0 && linear_rel_tol < 1.0))
      throw InvalidArgument("newton linear_rel_tol must lie in (0, 1)");
  }
};

struct NewtonResult {
  Field u;
  double mu = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;  // combined measure, see newton_residual_norm
  std::vector<double> residual_trace;
  std::size_t linear_iterations = 0;
};

/// Stationary equation and constraint: (el_residual(u, mu), beta(u) - N).
inline std::pair<Field, double> newton_residual(const Problem& p, const Field& u, double mu) {
  return {el_residual(p, u, mu), beta(p, u) - p.particles()};
}

/// max( max_k |F_k|, |beta - N| / N ).
inline double newton_residual_norm(const Problem& p, const std::pair<Field, double>& r) {
  return std::max(max_abs(r.first.values()), std::abs(r.second) / p.particles());
}

namespace detail {

// Merit for step damping: Euclidean norm of the system in the symmetric
// scaling used by the linear solver.
inline double newton_merit(const Problem& p, const std::pair<Field, double>& r) {
  const double c = r.second / (2.0 * p.grid().quad_weight());
  return std::sqrt(dot(r.first.values(), r.first.values()) + c * c);
}

}  // namespace detail

/// Derivative of newton_residual at (u, mu) applied to (h, nu):
/// (1/2 W^T W h + V h + 3 g u^2 h - mu h - nu u, 2 <u, h>_L2).
inline std::pair<Field, double> apply_jacobian(const Problem& p, const Field& u, double mu,
                                               const Field& h, double nu) {
  require_grid(p.grid(), u);
  require_grid(p.grid(), h);
  Field out(p.grid());
  detail::wtw(p.grid(), h.values(), out.values());
  const auto v = p.potential().values();
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = 0.5 * out[k] + (v[k] + 3.0 * p.g() * u[k] * u[k] - mu) * h[k] - nu * u[k];
  return {std::move(out), 2.0 * inner_l2(p.grid(), u, h)};
}

namespace detail {

// Solves the bordered Newton system J (h, nu) = -(r, c). The constraint row
// is scaled by -1/(2 w) so the operator [J11, -u; -u^T, 0] is symmetric and
// MINRES applies.
inline std::pair<Field, double> solve_bordered(const Problem& p, const Field& u, double mu,
                                               const std::pair<Field, double>& res,
                                               const NewtonConfig& cfg, std::size_t& lin_iters) {
  const Grid& grid = p.grid();
  const std::size_t n = grid.size();
  const auto v = p.potential().values();
  const double g = p.g();

  std::vector<double> b(n + 1), x(n + 1), inv_diag(n + 1);
  for (std::size_t k = 0; k < n; ++k) b[k] = -res.first[k];
  b[n] = res.second / (2.0 * grid.quad_weight());

  auto wdiag = wtw_diagonal(grid);
  double schur = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = std::abs(0.5 * wdiag[k] + v[k] + 3.0 * g * u[k] * u[k] - mu);
    inv_diag[k] = 1.0 / std::max(d, 1e-8 * (1.0 + std::abs(mu)));
    schur += u[k] * u[k] * inv_diag[k];
  }
  inv_diag[n] = schur > 0.0 ? 1.0 / schur : 1.0;

  std::vector<double> tmp(n);
  auto op = [&](std::span<const double> in, std::span<double> out) {
    const auto h = in.first(n);
    wtw(grid, h, tmp);
    double border = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      out[k] = 0.5 * tmp[k] + (v[k] + 3.0 * g * u[k] * u[k] - mu) * h[k] - in[n] * u[k];
      border += u[k] * h[k];
    }
    out[n] = -border;
  };
  const std::size_t max_it =
      cfg.linear_max_iterations ? cfg.linear_max_iterations : std::min<std::size_t>(2 * n + 10, 20000);
  const auto st = linalg::minres(op, inv_diag, b, x, cfg.linear_rel_tol, max_it);
  lin_iters += st.iterations;
  // An inexact step is still a usable Newton direction; the outer damping
  // and residual checks decide whether it helps.
  Field h(grid, std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)));
  return {std::move(h), x[n]};
}

}  // namespace detail

/// Flips the global sign so the entry of largest magnitude is nonnegative.
inline void canonical_sign(Field& u) {
  const auto vals = u.values();
  if (vals.empty()) return;
  const auto it = std::max_element(vals.begin(), vals.end(),
                                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0.0) u *= -1.0;
}

/// Newton refinement of (u, mu) on the stationary equation bordered with
/// the normalization constraint. mu starts from the chemical potential of u0.
inline NewtonResult newton_solve(const Problem& p, Field u0, const NewtonConfig& cfg = {}) {
  cfg.validate();
  require_grid(p.grid(), u0);
  NewtonResult out;
  out.mu = chemical_potential(p, u0);
  out.u = std::move(u0);

  auto res = newton_residual(p, out.u, out.mu);
  double norm = newton_residual_norm(p, res);
  double merit = detail::newton_merit(p, res);
  out.residual_trace.push_back(norm);
  std::size_t growth = 0;
  std::size_t stalled = 0;

  while (norm > cfg.residual_tol) {
    if (out.iterations >= cfg.max_iterations)
      throw SolverError("newton did not reach residual " + std::to_string(cfg.residual_tol) + " in " +
                            std::to_string(cfg.max_iterations) + " iterations (residual " +
                            std::to_string(norm) + ")",
                        norm, out.iterations);
    const auto [h, nu] = detail::solve_bordered(p, out.u, out.mu, res, cfg, out.linear_iterations);

    double t = 1.0;
    Field trial;
    double trial_mu = 0.0, trial_merit = 0.0;
    std::pair<Field, double> trial_res;
    for (std::size_t halving = 0;; ++halving) {
      trial = out.u;
      trial.axpy(t, h);
      trial_mu = out.mu + t * nu;
      trial_res = newton_residual(p, trial, trial_mu);
      trial_merit = detail::newton_merit(p, trial_res);
      if (trial_merit <= merit && std::isfinite(trial_merit)) break;
      if (halving == cfg.max_halvings) break;
      t *= 0.5;
    }
    if (!(trial_merit <= merit)) {
      if (!std::isfinite(trial_merit) || ++growth >= 3)
        throw SolverError("newton diverged: residual grew for 3 consecutive iterations (residual " +
                              std::to_string(newton_residual_norm(p, trial_res)) + ")",
                          trial_merit, out.iterations + 1);
    } else {
      growth = 0;
    }
    stalled = t < 0.25 ? stalled + 1 : 0;
    if (cfg.stall_limit && stalled >= cfg.stall_limit)
      throw SolverError("newton stalled: " + std::to_string(stalled) +
                            " consecutive heavily damped steps (residual " +
                            std::to_string(newton_residual_norm(p, trial_res)) + ")",
                        newton_residual_norm(p, trial_res), out.iterations + 1);
    out.u = std::move(trial);
    out.mu = trial_mu;
    res = std::move(trial_res);
    merit = trial_merit;
    norm = newton_residual_norm(p, res);
    ++out.iterations;
    out.residual_trace.push_back(norm);
  }
  out.residual = norm;
  canonical_sign(out.u);
  return out;
}

}  // namespace sgp
