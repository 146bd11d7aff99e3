#pragma once

// Matrix-free Krylov solvers and a tridiagonal direct solver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "sgp/error.hpp"

namespace sgp::linalg {

struct KrylovStats {
  std::size_t iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

/// Jacobi-preconditioned conjugate gradients for SPD A.
///
/// `apply(x, y)` writes y = A x. On entry `x` is the initial guess; the
/// iteration stops when ||b - A x|| <= tol * ||b||.
template <class Apply>
KrylovStats pcg(Apply&& apply, std::span<const double> inv_diag, std::span<const double> b,
                std::span<double> x, double tol, std::size_t max_iter) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  apply(std::span<const double>(x.data(), n), std::span<double>(q));
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
  const double bnorm = detail::norm(b);
  KrylovStats st;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    st.converged = true;
    return st;
  }
  double rnorm = detail::norm(r);
  st.rel_residual = rnorm / bnorm;
  if (st.rel_residual <= tol) {
    st.converged = true;
    return st;
  }
  for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
  p = z;
  double rz = detail::dot(r, z);
  while (st.iterations < max_iter) {
    apply(std::span<const double>(p), std::span<double>(q));
    const double alpha = rz / detail::dot(p, q);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    ++st.iterations;
    rnorm = detail::norm(r);
    st.rel_residual = rnorm / bnorm;
    if (st.rel_residual <= tol) {
      st.converged = true;
      break;
    }
    for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
    const double rz_new = detail::dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  return st;
}

/// Preconditioned MINRES (Paige-Saunders) for symmetric, possibly indefinite
/// A with an SPD diagonal preconditioner. x starts at zero. Convergence is
/// declared on the explicit residual ||b - A x|| <= tol * ||b||.
template <class Apply>
KrylovStats minres(Apply&& apply, std::span<const double> inv_diag, std::span<const double> b,
                   std::span<double> x, double tol, std::size_t max_iter) {
  const std::size_t n = b.size();
  KrylovStats st;
  std::fill(x.begin(), x.end(), 0.0);
  const double bnorm = detail::norm(b);
  if (bnorm == 0.0) {
    st.converged = true;
    return st;
  }

  std::vector<double> r1(b.begin(), b.end()), r2 = r1, y(n), v(n), w(n, 0.0), w1(n, 0.0),
      w2(n, 0.0), ax(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = inv_diag[k] * r1[k];
  double beta1 = detail::dot(r1, y);
  if (!(beta1 > 0.0)) throw SolverError("minres: preconditioner is not positive definite", beta1, 0);
  beta1 = std::sqrt(beta1);

  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;

  auto true_residual = [&] {
    apply(std::span<const double>(x.data(), n), std::span<double>(ax));
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += (b[k] - ax[k]) * (b[k] - ax[k]);
    return std::sqrt(s) / bnorm;
  };

  while (st.iterations < max_iter) {
    ++st.iterations;
    const double s = 1.0 / beta;
    for (std::size_t k = 0; k < n; ++k) v[k] = s * y[k];
    apply(std::span<const double>(v), std::span<double>(y));
    if (st.iterations >= 2)
      for (std::size_t k = 0; k < n; ++k) y[k] -= (beta / oldb) * r1[k];
    const double alfa = detail::dot(v, y);
    for (std::size_t k = 0; k < n; ++k) y[k] -= (alfa / beta) * r2[k];
    r1.swap(r2);
    r2 = y;
    for (std::size_t k = 0; k < n; ++k) y[k] = inv_diag[k] * r2[k];
    oldb = beta;
    beta = detail::dot(r2, y);
    if (beta < 0.0) throw SolverError("minres: preconditioner is not positive definite", beta, st.iterations);
    beta = std::sqrt(beta);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;

    double gamma = std::sqrt(gbar * gbar + beta * beta);
    gamma = std::max(gamma, std::numeric_limits<double>::min());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    const double denom = 1.0 / gamma;
    w1.swap(w2);
    w2.swap(w);
    for (std::size_t k = 0; k < n; ++k) {
      w[k] = (v[k] - oldeps * w1[k] - delta * w2[k]) * denom;
      x[k] += phi * w[k];
    }

    // phibar bounds the preconditioned residual norm.
    if (phibar <= 0.1 * tol * beta1 || beta == 0.0) {
      st.rel_residual = true_residual();
      if (st.rel_residual <= tol) {
        st.converged = true;
        return st;
      }
    }
  }
  st.rel_residual = true_residual();
  st.converged = st.rel_residual <= tol;
  return st;
}

/// Solves a symmetric tridiagonal system (Thomas algorithm, no pivoting).
/// Suitable for diagonally dominant matrices such as I + W^T W.
inline void solve_tridiagonal(std::span<const double> diag, std::span<const double> off,
                              std::span<const double> rhs, std::span<double> x) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), d(n);
  double m = diag[0];
  c[0] = n > 1 ? off[0] / m : 0.0;
  d[0] = rhs[0] / m;
  for (std::size_t k = 1; k < n; ++k) {
    m = diag[k] - off[k - 1] * c[k - 1];
    c[k] = k + 1 < n ? off[k] / m : 0.0;
    d[k] = (rhs[k] - off[k - 1] * d[k - 1]) / m;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) x[k] = d[k] - c[k] * x[k + 1];
}

}  // namespace sgp::linalg
