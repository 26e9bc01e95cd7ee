#pragma once

// Simple-cubic lattice sum for a hydrogen lattice in the large-D limit:
//
//   W(rho, R) = 3/4 sum_{(l,m,n) != 0} [ 1/(sigma R) - 2/sqrt(sigma^2 R^2 + rho^2)
//                                          + 1/sqrt(sigma^2 R^2 + 2 rho^2) ]
//
// The summand decays like sigma^-5, so a plain cube truncation at |l|,|m|,|n| <= K
// leaves a remainder of order K^-2. The remainder is added back exactly: with
// 1/sqrt(a) = pi^{-1/2} int_0^inf t^{-1/2} e^{-t a} dt the summand becomes
// pi^{-1/2} int t^{-1/2} e^{-t sigma^2 R^2} (1 - e^{-t rho^2})^2 dt and the sum
// over the cube exterior factorises into Jacobi theta functions,
// theta(u)^3 - theta_K(u)^3. The remaining one-dimensional integral is done
// with the trapezoid rule in log(u), which converges geometrically here.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dscale/errors.hpp"

namespace dscale::lattice {

inline constexpr int default_shell_cutoff = 24;
inline constexpr int min_shell_cutoff = 8;
inline constexpr double default_tail_tol = 1e-8;

/// Distinct sigma^2 = l^2 + m^2 + n^2 inside the cube |l|,|m|,|n| <= cutoff,
/// origin excluded, with the number of sites on each. Ascending in sigma^2.
struct ShellTable {
  int cutoff = 0;
  std::vector<std::int64_t> sigma2;
  std::vector<std::int64_t> multiplicity;
};

/// Cached per cutoff; the reference stays valid for the life of the process.
/// Thread safe.
const ShellTable& shell_table(int cutoff);

template <typename Scalar = double>
struct LatticeConfig {
  Scalar R;  // +inf means isolated atoms (W == 0)
  int shell_cutoff = default_shell_cutoff;
  Scalar tail_tol = Scalar(default_tail_tol);
  /// Add the exact cube-exterior remainder. Off gives the bare truncated sum.
  bool tail_correction = true;

  explicit LatticeConfig(Scalar r, int cutoff = default_shell_cutoff,
                         Scalar tol = Scalar(default_tail_tol))
      : R(r), shell_cutoff(cutoff), tail_tol(tol) {
    if (!(r > Scalar(0))) throw DomainError("lattice: R must be positive");
    if (cutoff < min_shell_cutoff)
      throw DomainError("lattice: shell cutoff must be at least " + std::to_string(min_shell_cutoff));
    if (!(tol > Scalar(0))) throw DomainError("lattice: tail tolerance must be positive");
  }

  bool isolated() const { return std::isinf(R); }

  LatticeConfig with_cutoff(int cutoff) const {
    LatticeConfig c = *this;
    c.shell_cutoff = cutoff;
    return c;
  }
  LatticeConfig with_R(Scalar r) const {
    LatticeConfig c(r, shell_cutoff, tail_tol);
    c.tail_correction = tail_correction;
    return c;
  }
};

/// 1/x - 2/sqrt(x^2 + rho^2) + 1/sqrt(x^2 + 2 rho^2), x = sigma R, written as a
/// difference of two rationalised differences to limit cancellation.
template <typename Scalar>
Scalar site_summand(Scalar rho, Scalar x) {
  using std::sqrt;
  const Scalar r2 = rho * rho;
  const Scalar s1 = sqrt(x * x + r2);
  const Scalar s2 = sqrt(x * x + Scalar(2) * r2);
  const Scalar near = r2 / (x * s1 * (x + s1));
  const Scalar far = r2 / (s1 * s2 * (s1 + s2));
  return near - far;
}

/// Sum of site_summand over the cube |l|,|m|,|n| <= cutoff, origin excluded.
/// No 3/4 prefactor.
template <typename Scalar>
Scalar cube_sum(Scalar rho, Scalar R, int cutoff) {
  using std::sqrt;
  const ShellTable& t = shell_table(cutoff);
  Scalar acc(0);
  for (std::size_t i = 0; i < t.sigma2.size(); ++i)
    acc += Scalar(t.multiplicity[i]) * site_summand(rho, sqrt(Scalar(t.sigma2[i])) * R);
  return acc;
}

namespace detail {

/// theta(u)^3 - theta_K(u)^3 with theta(u) = sum_{l in Z} e^{-u l^2} and
/// theta_K the same sum restricted to |l| <= K.
template <typename Scalar>
Scalar theta_cube_remainder(Scalar u, int K) {
  using std::exp;
  using std::sqrt;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar partial(1);
  for (int l = 1; l <= K; ++l) partial += Scalar(2) * exp(-u * Scalar(l) * Scalar(l));

  Scalar rest(0);
  const Scalar edge = u * Scalar(K + 1) * Scalar(K + 1);
  if (edge >= Scalar(1)) {
    // Terms beyond the cube decay fast; sum them directly.
    for (int l = K + 1;; ++l) {
      const Scalar term = Scalar(2) * exp(-u * Scalar(l) * Scalar(l));
      rest += term;
      if (term <= std::numeric_limits<Scalar>::epsilon() * Scalar(1e-3) * rest || term == Scalar(0))
        break;
    }
  } else {
    // Small u: Jacobi's transform gives theta directly.
    Scalar dual(1);
    for (int k = 1; k <= 4; ++k) dual += Scalar(2) * exp(-pi * pi * Scalar(k) * Scalar(k) / u);
    rest = sqrt(pi / u) * dual - partial;
  }
  const Scalar full = partial + rest;
  return rest * (full * full + full * partial + partial * partial);
}

}  // namespace detail

/// Exact sum of site_summand over every site outside the cutoff cube.
template <typename Scalar>
Scalar cube_exterior_sum(Scalar rho, Scalar R, int cutoff) {
  using std::exp;
  using std::expm1;
  using std::log;
  using std::sqrt;
  const Scalar q = rho * rho / (R * R);
  const Scalar k1 = Scalar(cutoff + 1);
  // Integrand ~ u near 0 and ~ exp(-u (K+1)^2) for large u.
  const Scalar s_lo(-60);
  const Scalar s_hi = log(Scalar(60) / (k1 * k1));
  const Scalar h(0.1);
  const int steps = static_cast<int>(std::ceil(double((s_hi - s_lo) / h)));
  const Scalar step = (s_hi - s_lo) / Scalar(steps);

  Scalar acc(0);
  for (int i = 0; i <= steps; ++i) {
    const Scalar s = s_lo + step * Scalar(i);
    const Scalar u = exp(s);
    const Scalar damp = -expm1(-u * q);
    const Scalar v = sqrt(u) * damp * damp * detail::theta_cube_remainder(u, cutoff);
    acc += (i == 0 || i == steps) ? v / Scalar(2) : v;
  }
  return acc * step / (R * sqrt(std::numbers::pi_v<Scalar>));
}

namespace detail {

template <typename Scalar>
Scalar lattice_sum_w_at(Scalar rho, const LatticeConfig<Scalar>& config, int cutoff) {
  if (config.isolated()) return Scalar(0);
  Scalar acc = cube_sum(rho, config.R, cutoff);
  if (config.tail_correction) acc += cube_exterior_sum(rho, config.R, cutoff);
  return Scalar(3) / Scalar(4) * acc;
}

}  // namespace detail

/// W(rho, R) at the configured cutoff, without the doubling check. For inner
/// loops that verify stability once at the end.
template <typename Scalar>
Scalar lattice_sum_w_unchecked(Scalar rho, const LatticeConfig<Scalar>& config) {
  if (!(rho > Scalar(0))) throw DomainError("lattice_sum_w: rho must be positive");
  return detail::lattice_sum_w_at(rho, config, config.shell_cutoff);
}

/// Throws ConvergenceError unless doubling the cutoff moves W by < tail_tol.
template <typename Scalar>
void check_cutoff_stability(Scalar rho, const LatticeConfig<Scalar>& config, Scalar value) {
  using std::abs;
  if (config.isolated()) return;
  const Scalar doubled = detail::lattice_sum_w_at(rho, config, 2 * config.shell_cutoff);
  const Scalar change = abs(doubled - value);
  if (!(change < config.tail_tol))
    throw ConvergenceError("lattice_sum_w: cutoff " + std::to_string(config.shell_cutoff) +
                           " not stable, doubling changes W by " + std::to_string(double(change)));
}

template <typename Scalar>
Scalar lattice_sum_w(Scalar rho, const LatticeConfig<Scalar>& config) {
  const Scalar w = lattice_sum_w_unchecked(rho, config);
  check_cutoff_stability(rho, config, w);
  return w;
}

}  // namespace dscale::lattice
