#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dscale/numerics.hpp"

using namespace dscale;

namespace {

using Vec = VectorX<double>;

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST(FindRoot, OddFunction) {
  const double x = find_root([](double v) { return v; }, Bracket<double>(-1.0, 1.0), 1e-12);
  EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(FindRoot, SquareRootOfTwo) {
  const double x = find_root([](double v) { return v * v - 2.0; }, Bracket<double>(1.0, 2.0), 1e-12);
  EXPECT_NEAR(x, std::sqrt(2.0), 1e-12);
}

TEST(FindRoot, HeliumXiQuadratic) {
  // 64 xi^2 + xi - 2 = 0 has the positive root (-1 + sqrt(513)) / 128.
  const double expected = (-1.0 + std::sqrt(513.0)) / 128.0;
  const double x =
      find_root([](double v) { return 64.0 * v * v + v - 2.0; }, Bracket<double>(0.0, 1.0), 1e-12);
  EXPECT_NEAR(x, expected, 1e-12);
  EXPECT_NEAR(x, 0.16913674, 5e-9);
}

TEST(FindRoot, ErrorsAndDegenerateBrackets) {
  EXPECT_THROW(find_root([](double v) { return v * v + 1.0; }, Bracket<double>(-1.0, 1.0), 1e-12),
               BracketError);
  EXPECT_THROW(Bracket<double>(1.0, 1.0), BracketError);
  EXPECT_THROW(Bracket<double>(2.0, 1.0), BracketError);
  EXPECT_THROW(find_root([](double v) { return v * v * v - 0.3; }, Bracket<double>(0.0, 1.0), 1e-300, 3),
               ConvergenceError);
  EXPECT_EQ(find_root([](double v) { return v - 1.0; }, Bracket<double>(1.0, 2.0), 1e-12), 1.0);
}

TEST(FindRoot, PolynomialsWithKnownRootsProperty) {
  std::mt19937 gen(20240611);
  std::uniform_real_distribution<double> root(-5.0, 5.0);
  std::uniform_real_distribution<double> gap(0.05, 1.0);
  const double tol = 1e-12;
  for (int trial = 0; trial < 300; ++trial) {
    const double r0 = root(gen);
    const double r1 = r0 + gap(gen) + 0.2, r2 = r0 - gap(gen) - 0.2;
    auto f = [&](double x) { return (x - r0) * (x - r1) * (x - r2); };
    const double x = find_root(f, Bracket<double>(r0 - 0.1, r0 + 0.1), tol);
    EXPECT_LE(std::abs(f(x)), 10 * tol) << "trial " << trial;
    EXPECT_NEAR(x, r0, 1e-9);
  }
}

TEST(FindRoot, Deterministic) {
  auto f = [](double x) { return std::cos(x) - x; };
  const double a = find_root(f, Bracket<double>(0.0, 1.0), 1e-12);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a, find_root(f, Bracket<double>(0.0, 1.0), 1e-12));
}

TEST(ScanSmallestPositiveRoot, Examples) {
  const double expected = (-1.0 + std::sqrt(513.0)) / 128.0;
  EXPECT_NEAR(scan_smallest_positive_root([](double v) { return 64.0 * v * v + v - 2.0; }, 2.0, 1000, 1e-12),
              expected, 1e-12);
  EXPECT_NEAR(scan_smallest_positive_root([](double v) { return (v - 0.3) * (v - 0.7); }, 1.0, 1000, 1e-12), 0.3,
              1e-12);
  EXPECT_THROW(scan_smallest_positive_root([](double v) { return v * v + 1.0; }, 2.0, 1000, 1e-12), NoRootError);
  EXPECT_THROW(scan_smallest_positive_root([](double v) { return v; }, 2.0, 50, 1e-12), DomainError);
  EXPECT_THROW(scan_smallest_positive_root([](double v) { return v; }, -1.0, 1000, 1e-12), DomainError);
}

TEST(ScanSmallestPositiveRoot, RootBelowFirstGridPoint) {
  // Sign change between 0 and the first grid node.
  const double x = scan_smallest_positive_root([](double v) { return v - 1e-7; }, 1.0, 100, 1e-15);
  EXPECT_NEAR(x, 1e-7, 1e-15);
}

TEST(MinimizeScalar, Examples) {
  auto r1 = minimize_scalar([](double x) { return (x - 1) * (x - 1); }, 0.0, 3.0, 1e-10);
  EXPECT_TRUE(r1.converged);
  EXPECT_NEAR(r1.x(), 1.0, 1e-9);
  EXPECT_NEAR(r1.value, 0.0, 1e-18);

  auto r2 = minimize_scalar([](double p) { return 9.0 / (8 * p * p) - 3.0 / (2 * p); }, 0.5, 5.0, 1e-10);
  EXPECT_NEAR(r2.x(), 1.5, 1e-7);
  EXPECT_NEAR(r2.value, -0.5, 1e-14);

  auto r3 = minimize_scalar([](double x) { return std::cos(x); }, 2.0, 4.0, 1e-10);
  EXPECT_NEAR(r3.x(), std::numbers::pi, 1e-7);
  EXPECT_LE(r3.iterations, defaults::scalar_min_max_iter);
}

TEST(MinimizeScalar, Errors) {
  auto f = [](double x) { return x * x; };
  EXPECT_THROW(minimize_scalar(f, 1.0, 0.0, 1e-10), DomainError);
  EXPECT_THROW(minimize_scalar(f, -1.0, 1.0, 1e-10, 5), ConvergenceError);
}

TEST(MinimizeScalar, ConvexQuadraticsProperty) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> curv(0.1, 50.0), vertex(-3.0, 3.0), offset(-2.0, 2.0);
  const double tol = 1e-6;
  for (int trial = 0; trial < 200; ++trial) {
    const double a = curv(gen), c = vertex(gen), d = offset(gen);
    auto r = minimize_scalar([&](double x) { return a * (x - c) * (x - c) + d; }, -4.0, 4.0, tol);
    EXPECT_NEAR(r.x(), c, tol) << "a=" << a << " c=" << c;
  }
}

TEST(MinimizeSimplex, Examples) {
  auto sq = [](const Vec& v) { return v.squaredNorm(); };
  auto r1 = minimize_simplex(sq, vec3(0.1, 0.1, 0.1), 0.02, 1e-12, 5000);
  EXPECT_TRUE(r1.converged);
  EXPECT_LT(r1.argmin.cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(r1.value, 0.0, 1e-12);

  auto shifted = [](const Vec& v) {
    return (v(0) - 1) * (v(0) - 1) + (v(1) + 2) * (v(1) + 2) + v(2) * v(2);
  };
  auto r2 = minimize_simplex(shifted, vec3(0, 0, 0), 0.02, 1e-12, 5000);
  EXPECT_TRUE(r2.converged);
  EXPECT_NEAR(r2.argmin(0), 1.0, 1e-6);
  EXPECT_NEAR(r2.argmin(1), -2.0, 1e-6);
  EXPECT_NEAR(r2.argmin(2), 0.0, 1e-6);

  // d/dv (v^2 + 0.01 v) = 0 at v = -0.005, coordinate by coordinate.
  auto linear = [](const Vec& v) { return (v.array().square() + 0.01 * v.array()).sum(); };
  auto r3 = minimize_simplex(linear, vec3(0, 0, 0), 0.02, 1e-12, 5000);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r3.argmin(i), -0.005, 1e-6);
}

TEST(MinimizeSimplex, BudgetExhaustionIsReportedNotThrown) {
  auto sq = [](const Vec& v) { return v.squaredNorm(); };
  auto r = minimize_simplex(sq, vec3(1, 1, 1), 0.02, 1e-14, 5);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.iterations, 5);
}

TEST(MinimizeSimplex, PositiveDefiniteQuadraticsProperty) {
  std::mt19937 gen(31337);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 3;
    Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(gen); });
    const Eigen::MatrixXd A = m * m.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    const Vec c = Vec::NullaryExpr(n, [&] { return u(gen); });
    auto f = [&](const Vec& v) { return (v - c).dot(A * (v - c)); };
    auto r = minimize_simplex(f, Vec(Vec::Zero(n)), 0.1, 1e-13, 20000);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.value, 1e-10) << "trial " << trial;
  }
}

TEST(MinimizeSimplex, BitIdenticalOnRepeat) {
  auto f = [](const Vec& v) { return std::pow(v(0) - 0.3, 2) + 3 * std::pow(v(1) + v(0), 2) + std::exp(v(2) * v(2)); };
  const auto a = minimize_simplex(f, vec3(0.5, -0.2, 0.1), SimplexOptions<double>{});
  const auto b = minimize_simplex(f, vec3(0.5, -0.2, 0.1), SimplexOptions<double>{});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_TRUE((a.argmin.array() == b.argmin.array()).all());
}

TEST(Numerics, LongDoubleInstantiation) {
  const long double x =
      find_root([](long double v) { return v * v - 2.0L; }, Bracket<long double>(1.0L, 2.0L), 1e-18L);
  EXPECT_NEAR(static_cast<double>(x), std::sqrt(2.0), 1e-15);
}
