#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace sgp;

TEST(Grid, NodesStartAtMinusLWithSpacingTwoLOverN) {
  const auto g = build_grid(1, 10.0, 4);
  EXPECT_DOUBLE_EQ(g.spacing(0), 5.0);
  const std::vector<double> expected{-10.0, -5.0, 0.0, 5.0};
  EXPECT_EQ(g.coordinates(0), expected);
  EXPECT_DOUBLE_EQ(build_grid(1, 10.0, 512).spacing(0), 0.0390625);
}

TEST(Grid, TwoDimensionalSizeAndWeight) {
  const auto g = build_grid(2, 10.0, 8);
  EXPECT_EQ(g.size(), 64u);
  EXPECT_DOUBLE_EQ(g.quad_weight(), 6.25);
}

TEST(Grid, AnisotropicAxesAndRowMajorLayout) {
  const std::vector<double> L{1.0, 2.0, 3.0};
  const std::vector<std::size_t> n{4, 5, 6};
  const auto g = build_grid(3, L, n);
  EXPECT_EQ(g.stride(2), 1u);
  EXPECT_EQ(g.stride(1), 6u);
  EXPECT_EQ(g.stride(0), 30u);
  EXPECT_DOUBLE_EQ(g.quad_weight(), 0.5 * 0.8 * 1.0);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(g.flatten(g.unflatten(k)), k);
  EXPECT_EQ(g.flatten({1, 2, 3}), 30u + 12u + 3u);
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(build_grid(0, 10.0, 8), InvalidArgument);
  EXPECT_THROW(build_grid(4, 10.0, 8), InvalidArgument);
  EXPECT_THROW(build_grid(1, 0.0, 8), InvalidArgument);
  EXPECT_THROW(build_grid(1, -1.0, 8), InvalidArgument);
  EXPECT_THROW(build_grid(1, 10.0, 3), InvalidArgument);
  const std::vector<double> L{1.0};
  const std::vector<std::size_t> n{8, 8};
  EXPECT_THROW(build_grid(2, L, n), InvalidArgument);
}

TEST(Field, ArithmeticChecksGrids) {
  const auto a = build_grid(1, 10.0, 8);
  const auto b = build_grid(1, 10.0, 16);
  Field f(a, 1.0), h(b, 1.0);
  EXPECT_THROW(f += h, GridMismatch);
  EXPECT_THROW(Field(a, std::vector<double>(5)), GridMismatch);
  EXPECT_THROW(inner_l2(a, f, h), GridMismatch);
  Field s = f + f;
  EXPECT_EQ(s[3], 2.0);
}

TEST(DifferenceOperator, SmallExamples) {
  // 1D, spacing 1: u = (1, 2, 4) -> (1, 2)
  const auto g = build_grid(1, 2.0, 4);  // spacing 1
  Field u(g, std::vector<double>{1.0, 2.0, 4.0, 4.0});
  const auto w = apply_W(g, u);
  ASSERT_EQ(w.axes.size(), 1u);
  EXPECT_EQ(w.axes[0], (std::vector<double>{1.0, 2.0, 0.0}));

  Field c(build_grid(3, 5.0, 5), 3.7);
  for (const auto& axis : apply_W(c.grid(), c).axes)
    for (double d : axis) EXPECT_EQ(d, 0.0);
  const auto lap = apply_WtW(c.grid(), c);
  for (double v : lap.values()) EXPECT_EQ(v, 0.0);
}

TEST(DifferenceOperator, TwoDimensionalIndexRamp) {
  const auto g = build_grid(2, 2.0, 4);
  Field u(g);
  for (std::size_t k = 0; k < g.size(); ++k) u[k] = static_cast<double>(g.unflatten(k)[0]);
  const auto w = apply_W(g, u);
  for (double d : w.axes[0]) EXPECT_DOUBLE_EQ(d, 1.0);
  for (double d : w.axes[1]) EXPECT_DOUBLE_EQ(d, 0.0);
}

TEST(DifferenceOperator, WtWOfSpike) {
  const auto g = build_grid(1, 2.0, 4);
  Field u(g, std::vector<double>{0.0, 1.0, 0.0, 0.0});
  const auto r = apply_WtW(g, u);
  EXPECT_EQ(r.values()[0], -1.0);
  EXPECT_EQ(r.values()[1], 2.0);
  EXPECT_EQ(r.values()[2], -1.0);
  EXPECT_EQ(r.values()[3], 0.0);
}

class DenseOracle : public ::testing::TestWithParam<std::vector<std::size_t>> {};

TEST_P(DenseOracle, WAndWtWMatchExplicitMatrices) {
  const auto n = GetParam();
  std::vector<double> L(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) L[i] = 3.0 + static_cast<double>(i);
  const auto g = build_grid(n.size(), L, n);
  const auto u = oracle::random_field(g, 11);
  const auto v = oracle::random_field(g, 12);

  const auto w = apply_W(g, u);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    // Edge ordering of apply_W is not the Kronecker row ordering, so compare
    // as multisets via sorted values and through the quadratic form below.
    Eigen::VectorXd ref = oracle::w_axis(g, i) * oracle::vec(u);
    std::vector<double> a(w.axes[i]), b(ref.data(), ref.data() + ref.size());
    ASSERT_EQ(a.size(), b.size());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t e = 0; e < a.size(); ++e) EXPECT_NEAR(a[e], b[e], 1e-13 * (1.0 + std::abs(b[e])));
  }

  const Eigen::VectorXd ref = oracle::wtw(g) * oracle::vec(u);
  const auto got = apply_WtW(g, u);
  const double scale = ref.lpNorm<Eigen::Infinity>();
  for (std::size_t k = 0; k < g.size(); ++k)
    EXPECT_NEAR(got[k], ref(static_cast<Eigen::Index>(k)), 1e-13 * scale);

  // sum_i <W_i u, W_i v> = <u, W^T W v>
  double lhs = 0.0;
  const auto wv = apply_W(g, v);
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t e = 0; e < w.axes[i].size(); ++e) lhs += w.axes[i][e] * wv.axes[i][e];
  const double rhs = detail::dot(u.values(), apply_WtW(g, v).values());
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));

  const double h1 = inner_h1(g, u, v);
  const double h1_ref =
      g.quad_weight() * oracle::vec(u).dot((Eigen::MatrixXd::Identity(g.size(), g.size()) + oracle::wtw(g)) *
                                           oracle::vec(v));
  EXPECT_NEAR(h1, h1_ref, 1e-12 * std::abs(h1_ref));
}

INSTANTIATE_TEST_SUITE_P(Shapes, DenseOracle,
                         ::testing::Values(std::vector<std::size_t>{8}, std::vector<std::size_t>{16},
                                           std::vector<std::size_t>{5, 7}, std::vector<std::size_t>{8, 8},
                                           std::vector<std::size_t>{4, 5, 6}));

TEST(InnerProducts, WorkedExamples) {
  const auto g = build_grid(1, 10.0, 4);
  Field one(g, 1.0);
  EXPECT_DOUBLE_EQ(inner_l2(g, one, one), 20.0);
  EXPECT_DOUBLE_EQ(inner_l2(g, Field(g), one), 0.0);
  Field c(g, 3.0);
  EXPECT_DOUBLE_EQ(inner_h1(g, c, c), 20.0 * 9.0);
}

TEST(InnerProducts, GaussianQuadrature) {
  const auto g = build_grid(1, 10.0, 64);
  Field f(g);
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = std::exp(-g.coordinate(0, k) * g.coordinate(0, k));
  // integral of exp(-2 x^2) over the real line
  const double exact = std::sqrt(std::numbers::pi / 2.0);
  EXPECT_NEAR(inner_l2(g, f, f), exact, 1e-6);
}
