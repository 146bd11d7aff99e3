#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sgp/energy.hpp"
#include "sgp/error.hpp"
#include "sgp/grid.hpp"
#include "sgp/linalg.hpp"

namespace sgp {

enum class EllipticMethod {
  automatic,    // tridiagonal in 1D, Krylov otherwise
  krylov,       // Jacobi-preconditioned CG
  tridiagonal,  // 1D only
};

struct EllipticSolveConfig {
  double rel_residual_tol = 1e-10;
  std::size_t max_iterations = 0;  // 0: 10 * grid size
  EllipticMethod method = EllipticMethod::automatic;

  void validate() const {
    if (!(rel_residual_tol > 0.0 && rel_residual_tol <= 1e-4))
      throw InvalidArgument("elliptic rel_residual_tol must lie in (0, 1e-4]");
  }
};

/// Riesz map M = (I + W^T W)^{-1}: the v with <h, f>_L2 = <h, v>_H for all h.
inline Field apply_M(const Grid& grid, const Field& f, const EllipticSolveConfig& cfg = {}) {
  require_grid(grid, f);
  cfg.validate();
  Field v(grid);
  const std::size_t n = grid.size();

  const bool tridiag = cfg.method == EllipticMethod::tridiagonal ||
                       (cfg.method == EllipticMethod::automatic && grid.dim() == 1);
  if (tridiag) {
    if (grid.dim() != 1) throw InvalidArgument("tridiagonal Riesz solve requires a 1D grid");
    const double inv2 = 1.0 / (grid.spacing(0) * grid.spacing(0));
    std::vector<double> diag(n, 1.0 + 2.0 * inv2), off(n - 1, -inv2);
    diag.front() = diag.back() = 1.0 + inv2;
    linalg::solve_tridiagonal(diag, off, f.values(), v.values());
    return v;
  }

  auto diag = detail::wtw_diagonal(grid);
  for (double& d : diag) d = 1.0 / (1.0 + d);
  for (std::size_t k = 0; k < n; ++k) v[k] = diag[k] * f[k];
  auto op = [&grid](std::span<const double> x, std::span<double> y) {
    detail::wtw(grid, x, y);
    for (std::size_t k = 0; k < x.size(); ++k) y[k] += x[k];
  };
  const std::size_t max_it = cfg.max_iterations ? cfg.max_iterations : 10 * n;
  const auto st = linalg::pcg(op, diag, f.values(), v.values(), cfg.rel_residual_tol, max_it);
  if (!st.converged)
    throw SolverError("Riesz map solve did not converge (relative residual " +
                          std::to_string(st.rel_residual) + ")",
                      st.rel_residual, st.iterations);
  return v;
}

/// Cached ingredients of the constraint projection at a fixed u.
class ProjectionCache {
public:
  ProjectionCache(const Grid& grid, Field u, const EllipticSolveConfig& cfg = {})
      : u_(std::move(u)) {
    require_grid(grid, u_);
    if (!(norm_l2(grid, u_) > 1e-300))
      throw InvalidArgument("projection is undefined at the zero field");
    mu_ = apply_M(grid, u_, cfg);
    denom_ = inner_l2(grid, u_, mu_);
    if (!(denom_ > 1e-300)) throw InvalidArgument("projection denominator <u, Mu> vanished");
  }

  const Grid& grid() const noexcept { return u_.grid(); }
  const Field& u() const noexcept { return u_; }
  const Field& Mu() const noexcept { return mu_; }
  double denom() const noexcept { return denom_; }

private:
  Field u_;
  Field mu_;
  double denom_ = 0.0;
};

/// P_u h = h - (<u, h>_L2 / <u, Mu>_L2) Mu, the H-orthogonal projection onto
/// the tangent space of the constraint beta(u) = N.
inline Field project(const ProjectionCache& cache, Field h) {
  const double c = inner_l2(cache.grid(), cache.u(), h) / cache.denom();
  h.axpy(-c, cache.Mu());
  return h;
}

namespace detail {

// 2 V u + 2 g u^3
inline Field l2_gradient_part(const Problem& p, const Field& u) {
  Field r(p.grid());
  const auto v = p.potential().values();
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double x = u[k];
    r[k] = 2.0 * (v[k] + p.g() * x * x) * x;
  }
  return r;
}

}  // namespace detail

/// grad_H E(u) = u + M(2 V u + 2 g u^3 - u).
inline Field sobolev_gradient(const Problem& p, const Field& u, const EllipticSolveConfig& cfg = {}) {
  require_grid(p.grid(), u);
  auto rhs = detail::l2_gradient_part(p, u);
  rhs -= u;
  return u + apply_M(p.grid(), rhs, cfg);
}

/// Same as above with M u taken from the cache (M is linear, so
/// M(f - u) = M f - M u), saving one elliptic solve.
inline Field sobolev_gradient(const Problem& p, const ProjectionCache& cache,
                              const EllipticSolveConfig& cfg = {}) {
  const Field& u = cache.u();
  require_grid(p.grid(), u);
  Field grad = apply_M(p.grid(), detail::l2_gradient_part(p, u), cfg);
  grad += u;
  grad -= cache.Mu();
  return grad;
}

}  // namespace sgp
