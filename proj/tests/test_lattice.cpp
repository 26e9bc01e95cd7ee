#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "dscale/lattice.hpp"

using namespace dscale;
using namespace dscale::lattice;

namespace {

// Plain triple loop over the cube, origin excluded, in extended precision.
long double brute_cube_sum(long double rho, long double R, int K) {
  long double acc = 0.0L;
  for (int l = -K; l <= K; ++l)
    for (int m = -K; m <= K; ++m)
      for (int n = -K; n <= K; ++n) {
        if (l == 0 && m == 0 && n == 0) continue;
        const long double x = R * std::sqrt(static_cast<long double>(l * l + m * m + n * n));
        acc += 1.0L / x - 2.0L / std::sqrt(x * x + rho * rho) + 1.0L / std::sqrt(x * x + 2.0L * rho * rho);
      }
  return acc;
}

// Truncation error of the cube sum behaves like c2/K^2 + c3/K^3 + c4/K^4;
// four cutoffs eliminate the three unknowns.
double richardson_w(double rho, double R) {
  const int Ks[4] = {16, 24, 32, 48};
  Eigen::Matrix4d A;
  Eigen::Vector4d b;
  for (int i = 0; i < 4; ++i) {
    const double k = Ks[i];
    A.row(i) << 1.0, 1.0 / (k * k), 1.0 / (k * k * k), 1.0 / (k * k * k * k);
    b(i) = double(0.75L * brute_cube_sum(rho, R, Ks[i]));
  }
  return A.fullPivLu().solve(b)(0);
}

}  // namespace

TEST(ShellTable, CountsAndFirstShells) {
  for (int K : {8, 13}) {
    const auto& t = shell_table(K);
    EXPECT_EQ(t.cutoff, K);
    const std::int64_t sites = std::accumulate(t.multiplicity.begin(), t.multiplicity.end(), std::int64_t{0});
    EXPECT_EQ(sites, std::int64_t(2 * K + 1) * (2 * K + 1) * (2 * K + 1) - 1);
    EXPECT_TRUE(std::is_sorted(t.sigma2.begin(), t.sigma2.end()));
    EXPECT_EQ(t.sigma2[0], 1);
    EXPECT_EQ(t.multiplicity[0], 6);
    EXPECT_EQ(t.sigma2[1], 2);
    EXPECT_EQ(t.multiplicity[1], 12);
    EXPECT_EQ(t.sigma2[2], 3);
    EXPECT_EQ(t.multiplicity[2], 8);
  }
  EXPECT_EQ(&shell_table(8), &shell_table(8));
}

TEST(LatticeConfig, Validation) {
  EXPECT_THROW(LatticeConfig<double>(0.0), DomainError);
  EXPECT_THROW(LatticeConfig<double>(-1.0), DomainError);
  EXPECT_THROW(LatticeConfig<double>(1.0, 7), DomainError);
  EXPECT_THROW(LatticeConfig<double>(1.0, 16, 0.0), DomainError);
  EXPECT_TRUE(LatticeConfig<double>(std::numeric_limits<double>::infinity()).isolated());
  const auto c = LatticeConfig<double>(2.0, 16, 1e-6).with_R(3.0);
  EXPECT_EQ(c.R, 3.0);
  EXPECT_EQ(c.shell_cutoff, 16);
  EXPECT_EQ(c.tail_tol, 1e-6);
}

TEST(SiteSummand, SingleSiteHandValue) {
  // (3/4)(1 - 2/sqrt(2) + 1/sqrt(3)) = 0.75 * 0.16313671 = 0.12235253
  const double expected = 0.75 * (1.0 - 2.0 / std::sqrt(2.0) + 1.0 / std::sqrt(3.0));
  EXPECT_NEAR(0.75 * site_summand(1.0, 1.0), expected, 1e-15);
  EXPECT_NEAR(0.75 * site_summand(1.0, 1.0), 0.12235253, 1e-8);
}

TEST(SiteSummand, StableAtLargeSeparation) {
  // Leading term (3/4) rho^4 / x^5.
  const double x = 1e4;
  EXPECT_NEAR(site_summand(1.0, x) / (0.75 / std::pow(x, 5)), 1.0, 1e-6);
  EXPECT_GT(site_summand(1.0, 1e6), 0.0);
}

TEST(CubeSum, MatchesBruteForceLoop) {
  for (auto [rho, R] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {0.5, 4.0}}) {
    EXPECT_NEAR(cube_sum(rho, R, 8), double(brute_cube_sum(rho, R, 8)), 1e-12) << rho << " " << R;
  }
}

TEST(LatticeSumW, VanishesAsRhoGoesToZero) {
  const LatticeConfig<double> c(1.0);
  EXPECT_LT(std::abs(lattice_sum_w(1e-8, c)), 1e-30);
  EXPECT_THROW(lattice_sum_w(0.0, c), DomainError);
  EXPECT_EQ(lattice_sum_w(1.0, LatticeConfig<double>(std::numeric_limits<double>::infinity())), 0.0);
}

TEST(LatticeSumW, CutoffDoublingAgreesToOneNanounit) {
  const double a = lattice_sum_w(1.0, LatticeConfig<double>(2.0, 16));
  const double b = lattice_sum_w(1.0, LatticeConfig<double>(2.0, 32));
  EXPECT_NEAR(a, b, 1e-9);
}

TEST(LatticeSumW, TailStableOverGrid) {
  for (double rho : {0.3, 1.0, 1.5, 2.5})
    for (double R : {1.0, 1.3, 2.0, 4.0}) {
      const LatticeConfig<double> c(R, 16);
      const double w16 = lattice_sum_w_unchecked(rho, c);
      const double w32 = lattice_sum_w_unchecked(rho, c.with_cutoff(32));
      EXPECT_LT(std::abs(w32 - w16), default_tail_tol) << rho << " " << R;
    }
}

TEST(LatticeSumW, MatchesRichardsonExtrapolatedBruteForce) {
  for (auto [rho, R] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {0.5, 4.0}}) {
    const double ref = richardson_w(rho, R);
    const double w = lattice_sum_w(rho, LatticeConfig<double>(R));
    EXPECT_NEAR(w, ref, 1e-6 * std::max(1.0, std::abs(ref))) << "rho=" << rho << " R=" << R;
  }
}

TEST(LatticeSumW, FrozenHighPrecisionValues) {
  // Independent theta-function quadrature at 30 digits.
  EXPECT_NEAR(lattice_sum_w(1.0, LatticeConfig<double>(1.0)), 2.089438512, 2e-9);
  EXPECT_NEAR(lattice_sum_w(1.0, LatticeConfig<double>(2.0)), 0.1259085133, 2e-10);
  EXPECT_NEAR(lattice_sum_w(2.0, LatticeConfig<double>(1.0)), 11.42233256, 2e-8);
  EXPECT_NEAR(lattice_sum_w(0.5, LatticeConfig<double>(4.0)), 3.465456512e-4, 2e-13);
}

TEST(LatticeSumW, BareTruncationFailsStabilityCheck) {
  LatticeConfig<double> c(1.0, 16);
  c.tail_correction = false;
  EXPECT_THROW(lattice_sum_w(1.0, c), ConvergenceError);
  EXPECT_NEAR(lattice_sum_w_unchecked(1.0, c), 0.75 * cube_sum(1.0, 1.0, 16), 1e-15);
}

TEST(ThetaRemainder, ContinuousAcrossBranchSwitch) {
  const int K = 10;
  const double edge = 1.0 / ((K + 1.0) * (K + 1.0));
  const double below = detail::theta_cube_remainder(edge * (1 - 1e-12), K);
  const double above = detail::theta_cube_remainder(edge * (1 + 1e-12), K);
  EXPECT_NEAR(below / above, 1.0, 1e-9);
}

TEST(ThetaRemainder, MatchesDirectSumAtModerateU) {
  const int K = 3;
  for (double u : {0.02, 0.05, 0.3, 1.0}) {
    long double full = 0.0L, part = 0.0L;
    for (int l = -400; l <= 400; ++l) {
      const long double e = std::exp(-static_cast<long double>(u) * l * l);
      full += e;
      if (std::abs(l) <= K) part += e;
    }
    const double ref = double(full * full * full - part * part * part);
    EXPECT_NEAR(detail::theta_cube_remainder(u, K) / ref, 1.0, 1e-12) << "u=" << u;
  }
}
