#pragma once

// Dense reference implementations used as test oracles. Everything here is
// built from explicit matrices with Eigen, independently of the matrix-free
// operators in the library.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "sgp/sgp.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline VectorXd vec(const sgp::Field& f) {
  VectorXd v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t k = 0; k < f.size(); ++k) v(static_cast<Eigen::Index>(k)) = f[k];
  return v;
}

inline sgp::Field field(const sgp::Grid& g, const VectorXd& v) {
  sgp::Field f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = v(static_cast<Eigen::Index>(k));
  return f;
}

/// 1D forward-difference matrix, (n-1) x n, entries +-1/delta.
inline MatrixXd w_1d(std::size_t n, double delta) {
  MatrixXd w = MatrixXd::Zero(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r + 1 < static_cast<Eigen::Index>(n); ++r) {
    w(r, r) = -1.0 / delta;
    w(r, r + 1) = 1.0 / delta;
  }
  return w;
}

inline MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

/// Per-axis difference matrix on the row-major tensor grid:
/// I (x) ... (x) W_axis (x) ... (x) I.
inline MatrixXd w_axis(const sgp::Grid& g, std::size_t axis) {
  MatrixXd m = MatrixXd::Identity(1, 1);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const auto n = static_cast<Eigen::Index>(g.count(i));
    m = kron(m, i == axis ? w_1d(g.count(i), g.spacing(i)) : MatrixXd::Identity(n, n));
  }
  return m;
}

inline MatrixXd wtw(const sgp::Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  MatrixXd a = MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const MatrixXd w = w_axis(g, i);
    a += w.transpose() * w;
  }
  return a;
}

inline MatrixXd m_dense(const sgp::Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  return (MatrixXd::Identity(n, n) + wtw(g)).inverse();
}

inline sgp::Field random_field(const sgp::Grid& g, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  sgp::Field f(g);
  for (auto& v : f.values()) v = dist(rng);
  return f;
}

/// Smooth, localized field vanishing near the boundary.
inline sgp::Field bump(const sgp::Grid& g, double width = 2.0) {
  sgp::Field f(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.point(k);
    double r2 = 0.0;
    for (std::size_t i = 0; i < g.dim(); ++i) r2 += (x[i] - 0.3 * static_cast<double>(i + 1)) * (x[i] - 0.3 * static_cast<double>(i + 1));
    f[k] = std::exp(-r2 / (width * width));
  }
  return f;
}

/// Dense energy with the same discretization, written from the formula.
inline double energy(const sgp::Problem& p, const sgp::Field& u) {
  const sgp::Grid& g = p.grid();
  const VectorXd x = vec(u);
  const VectorXd v = vec(p.potential());
  double kin = 0.0;
  for (std::size_t i = 0; i < g.dim(); ++i) kin += (w_axis(g, i) * x).squaredNorm();
  const double pot = (v.array() * x.array().square()).sum();
  const double inter = x.array().pow(4).sum();
  return g.quad_weight() * (0.5 * kin + pot + 0.5 * p.g() * inter);
}

}  // namespace oracle
