#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sgp/error.hpp"

namespace sgp {

inline constexpr std::size_t kMaxDim = 3;

/// Tensor-product grid on [-L_i, L_i) per axis.
///
/// Node n (0-based) along axis i sits at 2 L_i (-1/2 + n / N_i), so the
/// right endpoint +L_i is not part of the grid. Flat storage is row-major:
/// the last axis varies fastest.
class Grid {
public:
  Grid() = default;

  std::size_t dim() const noexcept { return dim_; }
  double half_length(std::size_t axis) const { return half_length_[axis]; }
  std::size_t count(std::size_t axis) const { return count_[axis]; }
  double spacing(std::size_t axis) const { return spacing_[axis]; }
  std::size_t stride(std::size_t axis) const { return stride_[axis]; }
  std::size_t size() const noexcept { return size_; }
  double quad_weight() const noexcept { return quad_weight_; }

  double coordinate(std::size_t axis, std::size_t n) const {
    return 2.0 * half_length_[axis] *
           (-0.5 + static_cast<double>(n) / static_cast<double>(count_[axis]));
  }

  std::vector<double> coordinates(std::size_t axis) const {
    std::vector<double> x(count_[axis]);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = coordinate(axis, n);
    return x;
  }

  std::size_t flatten(const std::array<std::size_t, kMaxDim>& idx) const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < dim_; ++i) k += idx[i] * stride_[i];
    return k;
  }

  std::array<std::size_t, kMaxDim> unflatten(std::size_t k) const {
    std::array<std::size_t, kMaxDim> idx{};
    for (std::size_t i = 0; i < dim_; ++i) {
      idx[i] = k / stride_[i];
      k -= idx[i] * stride_[i];
    }
    return idx;
  }

  /// Physical coordinates of flat node k; unused trailing entries are 0.
  std::array<double, kMaxDim> point(std::size_t k) const {
    auto idx = unflatten(k);
    std::array<double, kMaxDim> x{};
    for (std::size_t i = 0; i < dim_; ++i) x[i] = coordinate(i, idx[i]);
    return x;
  }

  /// Number of edges along one axis: (N_i - 1) * prod_{j != i} N_j.
  std::size_t edge_count(std::size_t axis) const {
    return size_ / count_[axis] * (count_[axis] - 1);
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i)
      if (a.count_[i] != b.count_[i] || a.half_length_[i] != b.half_length_[i]) return false;
    return true;
  }

  friend Grid build_grid(std::size_t dim, std::span<const double> half_lengths,
                         std::span<const std::size_t> counts);

private:
  std::size_t dim_ = 0;
  std::array<double, kMaxDim> half_length_{};
  std::array<std::size_t, kMaxDim> count_{};
  std::array<double, kMaxDim> spacing_{};
  std::array<std::size_t, kMaxDim> stride_{};
  std::size_t size_ = 0;
  double quad_weight_ = 0.0;
};

inline Grid build_grid(std::size_t dim, std::span<const double> half_lengths,
                       std::span<const std::size_t> counts) {
  if (dim < 1 || dim > kMaxDim)
    throw InvalidArgument("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  if (half_lengths.size() != dim || counts.size() != dim)
    throw InvalidArgument("grid needs exactly one half-length and one count per axis");
  Grid g;
  g.dim_ = dim;
  g.quad_weight_ = 1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(half_lengths[i] > 0.0) || !std::isfinite(half_lengths[i]))
      throw InvalidArgument("grid half-length must be positive and finite");
    if (counts[i] < 4) throw InvalidArgument("grid needs at least 4 nodes per axis");
    g.half_length_[i] = half_lengths[i];
    g.count_[i] = counts[i];
    g.spacing_[i] = 2.0 * half_lengths[i] / static_cast<double>(counts[i]);
    g.quad_weight_ *= g.spacing_[i];
  }
  std::size_t s = 1;
  for (std::size_t i = dim; i-- > 0;) {
    g.stride_[i] = s;
    s *= counts[i];
  }
  g.size_ = s;
  return g;
}

/// Isotropic convenience overload: same (L, N) on every axis.
inline Grid build_grid(std::size_t dim, double half_length, std::size_t count) {
  std::vector<double> l(dim, half_length);
  std::vector<std::size_t> n(dim, count);
  return build_grid(dim, l, n);
}

/// Real-valued function sampled on a grid.
class Field {
public:
  Field() = default;
  explicit Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}
  Field(Grid grid, double fill) : grid_(std::move(grid)), values_(grid_.size(), fill) {}
  Field(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw GridMismatch("field length " + std::to_string(values_.size()) +
                         " does not match grid size " + std::to_string(grid_.size()));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  Field& operator+=(const Field& o) {
    check_same(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_same(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
  }
  Field& operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
  }
  /// this += a * x
  Field& axpy(double a, const Field& x) {
    check_same(x);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * x.values_[k];
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double c, Field a) { return a *= c; }

  friend bool operator==(const Field& a, const Field& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }

  void check_same(const Field& o) const {
    if (!(grid_ == o.grid_)) throw GridMismatch("fields live on different grids");
  }

private:
  Grid grid_;
  std::vector<double> values_;
};

inline void require_grid(const Grid& g, const Field& f) {
  if (!(g == f.grid())) throw GridMismatch("field is not defined on the expected grid");
}

inline bool all_finite(const Field& f) {
  for (double v : f.values())
    if (!std::isfinite(v)) return false;
  return true;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Directional differences, one array per axis.
struct EdgeField {
  std::vector<std::vector<double>> axes;
};

namespace detail {

// Visits every edge (k, k + stride) along `axis`, i.e. every node pair whose
// axis index differs by one.
template <class F>
void for_each_edge(const Grid& g, std::size_t axis, F&& f) {
  const std::size_t n = g.count(axis);
  const std::size_t s = g.stride(axis);
  const std::size_t outer = g.size() / (n * s);
  std::size_t e = 0;
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * n * s;
    for (std::size_t j = 0; j + 1 < n; ++j)
      for (std::size_t t = 0; t < s; ++t, ++e) {
        const std::size_t k = base + j * s + t;
        f(e, k, k + s);
      }
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Unweighted sum over axes of <W_i f, W_i g>, computed without materializing W.
inline double gradient_dot(const Grid& grid, std::span<const double> f, std::span<const double> g) {
  double total = 0.0;
  for (std::size_t i = 0; i < grid.dim(); ++i) {
    const double inv = 1.0 / grid.spacing(i);
    double s = 0.0;
    for_each_edge(grid, i, [&](std::size_t, std::size_t a, std::size_t b) {
      s += (f[b] - f[a]) * (g[b] - g[a]);
    });
    total += s * inv * inv;
  }
  return total;
}

// out = sum_i W_i^T W_i u
inline void wtw(const Grid& grid, std::span<const double> u, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < grid.dim(); ++i) {
    const double inv2 = 1.0 / (grid.spacing(i) * grid.spacing(i));
    for_each_edge(grid, i, [&](std::size_t, std::size_t a, std::size_t b) {
      const double d = (u[b] - u[a]) * inv2;
      out[a] -= d;
      out[b] += d;
    });
  }
}

// Diagonal of sum_i W_i^T W_i.
inline std::vector<double> wtw_diagonal(const Grid& grid) {
  std::vector<double> diag(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.dim(); ++i) {
    const double inv2 = 1.0 / (grid.spacing(i) * grid.spacing(i));
    for_each_edge(grid, i, [&](std::size_t, std::size_t a, std::size_t b) {
      diag[a] += inv2;
      diag[b] += inv2;
    });
  }
  return diag;
}

}  // namespace detail

inline EdgeField apply_W(const Grid& grid, const Field& u) {
  require_grid(grid, u);
  EdgeField w;
  w.axes.resize(grid.dim());
  for (std::size_t i = 0; i < grid.dim(); ++i) {
    auto& out = w.axes[i];
    out.resize(grid.edge_count(i));
    const double inv = 1.0 / grid.spacing(i);
    detail::for_each_edge(grid, i, [&](std::size_t e, std::size_t a, std::size_t b) {
      out[e] = (u[b] - u[a]) * inv;
    });
  }
  return w;
}

/// Sum over axes of W_i^T W_i u, with W_i^T the plain transpose.
inline Field apply_WtW(const Grid& grid, const Field& u) {
  require_grid(grid, u);
  Field out(grid);
  detail::wtw(grid, u.values(), out.values());
  return out;
}

/// Rectangle-rule L2 inner product.
inline double inner_l2(const Grid& grid, const Field& f, const Field& g) {
  require_grid(grid, f);
  require_grid(grid, g);
  return grid.quad_weight() * detail::dot(f.values(), g.values());
}

/// Discrete H^{1,2} inner product: <f, (I + W^T W) g> times the quadrature weight.
inline double inner_h1(const Grid& grid, const Field& f, const Field& g) {
  require_grid(grid, f);
  require_grid(grid, g);
  return grid.quad_weight() *
         (detail::dot(f.values(), g.values()) + detail::gradient_dot(grid, f.values(), g.values()));
}

inline double norm_l2(const Grid& grid, const Field& f) { return std::sqrt(inner_l2(grid, f, f)); }
inline double norm_h1(const Grid& grid, const Field& f) { return std::sqrt(inner_h1(grid, f, f)); }

}  // namespace sgp
