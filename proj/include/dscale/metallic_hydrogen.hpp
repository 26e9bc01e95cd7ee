#pragma once

// Metallic hydrogen on a simple-cubic lattice at D -> infinity. The HF
// Hamiltonian is minimised over the orbit radius rho; correlation then opens
// the dihedral angles to the first three neighbour shells, parameterised by
// their cosines (gamma_100, gamma_110, gamma_111), with rho held at its HF value.
//
// Energies are per electron in scaled hartree units; lengths in scaled bohr.

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "dscale/errors.hpp"
#include "dscale/lattice.hpp"
#include "dscale/numerics.hpp"

namespace dscale::mh {

using lattice::LatticeConfig;

/// Sites per shell: 6 at R, 12 at sqrt(2) R, 8 at sqrt(3) R.
template <typename Scalar = double>
Vector3<Scalar> shell_counts() {
  return Vector3<Scalar>(6, 12, 8);
}

template <typename Scalar = double>
Vector3<Scalar> shell_distance_factors() {
  using std::sqrt;
  return Vector3<Scalar>(1, sqrt(Scalar(2)), sqrt(Scalar(3)));
}

/// Square-to-rhombus area weights in units of R^2: 6 cells of side R,
/// 12 of side sqrt(2) R and 8 of side sqrt(3) R.
template <typename Scalar = double>
Vector3<Scalar> shell_area_weights() {
  return Vector3<Scalar>(6, 24, 24);
}

template <typename Scalar = double>
inline constexpr Scalar rho_search_lo = Scalar(0.1);
template <typename Scalar = double>
inline constexpr Scalar rho_search_hi = Scalar(10);

/// Box for the gamma search; outside it the objective is +inf.
template <typename Scalar = double>
inline constexpr Scalar gamma_box_lo = Scalar(-0.5);
template <typename Scalar = double>
inline constexpr Scalar gamma_box_hi = Scalar(0.1);

template <typename Scalar = double>
Vector3<Scalar> gamma_start() {
  return Vector3<Scalar>(-0.01, -0.005, -0.003);
}

/// Cosines of the dihedral angles to the first three neighbour shells.
template <typename Scalar = double>
class GammaTriple {
 public:
  GammaTriple() : cos_(Vector3<Scalar>::Zero()) {}
  explicit GammaTriple(const Vector3<Scalar>& cosines) : cos_(cosines) {
    using std::abs;
    for (int i = 0; i < 3; ++i)
      if (!(abs(cos_(i)) < Scalar(1))) throw DomainError("GammaTriple: each cosine must lie in (-1, 1)");
  }
  GammaTriple(Scalar g100, Scalar g110, Scalar g111) : GammaTriple(Vector3<Scalar>(g100, g110, g111)) {}

  Scalar g100() const { return cos_(0); }
  Scalar g110() const { return cos_(1); }
  Scalar g111() const { return cos_(2); }
  const Vector3<Scalar>& cosines() const { return cos_; }

  Vector3<Scalar> angles() const {
    return cos_.unaryExpr([](Scalar g) { using std::acos; return acos(g); });
  }
  /// Signed deviation from a right angle: arccos(gamma) - pi/2.
  Vector3<Scalar> deviations() const {
    return (angles().array() - std::numbers::pi_v<Scalar> / Scalar(2)).matrix();
  }

 private:
  Vector3<Scalar> cos_;
};

template <typename Scalar>
Scalar hf_energy_with_w(Scalar rho, Scalar w) {
  return Scalar(9) / (Scalar(8) * rho * rho) - Scalar(3) / (Scalar(2) * rho) + w;
}

template <typename Scalar>
Scalar hf_energy(Scalar rho, const LatticeConfig<Scalar>& config) {
  return hf_energy_with_w(rho, lattice::lattice_sum_w(rho, config));
}

template <typename Scalar = double>
struct HFLatticeMinimum {
  Scalar rho;
  Scalar energy;
  /// Minimiser landed on the edge of the rho window: R is unphysical.
  bool at_boundary = false;
};

template <typename Scalar>
HFLatticeMinimum<Scalar> minimize_hf_mh(const LatticeConfig<Scalar>& config,
                                        Scalar tol = Scalar(defaults::scalar_min_tol)) {
  using std::abs;
  auto energy = [&](Scalar rho) {
    return hf_energy_with_w(rho, lattice::lattice_sum_w_unchecked(rho, config));
  };
  const Scalar lo = rho_search_lo<Scalar>, hi = rho_search_hi<Scalar>;
  const auto res = minimize_scalar(energy, lo, hi, tol);
  const Scalar rho = res.x();
  lattice::check_cutoff_stability(rho, config, lattice::lattice_sum_w_unchecked(rho, config));
  const Scalar edge = Scalar(1e3) * tol;
  return {rho, res.value, abs(rho - lo) <= edge || abs(rho - hi) <= edge};
}

/// 1/2 [ (x^2 + 2 rho^2 (1 - gamma))^{-1/2} - (x^2 + 2 rho^2)^{-1/2} ], x = sigma R.
template <typename Scalar>
Scalar delta_w(Scalar rho, Scalar sigma_R, Scalar gamma) {
  using std::isinf;
  using std::sqrt;
  if (!(rho > Scalar(0))) throw DomainError("delta_w: rho must be positive");
  if (!(sigma_R > Scalar(0))) throw DomainError("delta_w: sigma R must be positive");
  if (!(gamma < Scalar(1))) throw DomainError("delta_w: requires gamma < 1");
  if (isinf(sigma_R)) return Scalar(0);
  const Scalar b = sigma_R * sigma_R + Scalar(2) * rho * rho;
  const Scalar a = b - Scalar(2) * rho * rho * gamma;
  if (!(a > Scalar(0))) throw DomainError("delta_w: non-positive distance squared");
  const Scalar sa = sqrt(a), sb = sqrt(b);
  // (b - a) / (sa sb (sa + sb)) == 1/sa - 1/sb without cancellation
  return rho * rho * gamma / (sa * sb * (sa + sb));
}

template <typename Scalar>
Scalar gramian_ratio(const GammaTriple<Scalar>& g) {
  return Scalar(1) + shell_counts<Scalar>().dot(g.cosines().cwiseAbs2());
}

/// H_corr - H_HF at fixed rho: kinetic Gramian penalty plus the three-shell
/// repulsion change. Evaluated directly, never as a difference of totals.
template <typename Scalar>
Scalar correlation_increment(Scalar rho, Scalar R, const GammaTriple<Scalar>& g) {
  const Vector3<Scalar> counts = shell_counts<Scalar>();
  const Vector3<Scalar> factors = shell_distance_factors<Scalar>();
  const Scalar kinetic = Scalar(9) / (Scalar(8) * rho * rho) * counts.dot(g.cosines().cwiseAbs2());
  Scalar w_delta(0);
  for (int i = 0; i < 3; ++i) w_delta += counts(i) * delta_w(rho, factors(i) * R, g.cosines()(i));
  return kinetic + Scalar(3) / Scalar(2) * w_delta;
}

template <typename Scalar>
Scalar corr_energy(Scalar rho, const LatticeConfig<Scalar>& config, const GammaTriple<Scalar>& g) {
  return hf_energy(rho, config) + correlation_increment(rho, config.R, g);
}

/// Minimiser of the quadratic model of correlation_increment, per shell:
/// -rho^4 / (3 (sigma^2 R^2 + 2 rho^2)^{3/2}).
template <typename Scalar>
Vector3<Scalar> small_gamma_estimate(Scalar rho, Scalar R) {
  using std::pow;
  const Vector3<Scalar> f = shell_distance_factors<Scalar>();
  Vector3<Scalar> out;
  for (int i = 0; i < 3; ++i) {
    const Scalar x = f(i) * R;
    out(i) = -pow(rho, Scalar(4)) / (Scalar(3) * pow(x * x + Scalar(2) * rho * rho, Scalar(1.5)));
  }
  return out;
}

/// Square-to-rhombus area change: sum_i w_i R^2 (1 - cos delta_i) with
/// delta_i = arccos(gamma_i) - pi/2. Uses 1 - cos delta = g^2 / (1 + sqrt(1 - g^2)).
template <typename Scalar>
Scalar mh_area_difference(Scalar R, const GammaTriple<Scalar>& g) {
  const auto c = g.cosines().array();
  const Vector3<Scalar> one_minus_cos =
      (c.square() / (Scalar(1) + (Scalar(1) - c.square()).sqrt())).matrix();
  return R * R * shell_area_weights<Scalar>().dot(one_minus_cos);
}

template <typename Scalar = double>
struct MHSolution {
  Scalar R;
  Scalar rho_hf;
  Scalar eps_hf;
  GammaTriple<Scalar> gamma;
  Scalar eps_corr_total;
  Scalar eps_corr;  // <= 0
  Scalar delta_area;
  bool stable;  // eps_hf < 0
  bool hf_at_boundary;
  int simplex_iterations;
};

template <typename Scalar>
MHSolution<Scalar> minimize_corr_mh(const LatticeConfig<Scalar>& config,
                                    const SimplexOptions<Scalar>& opt = {}) {
  const auto hf = minimize_hf_mh(config);
  const Scalar rho = hf.rho;
  const Scalar R = config.R;

  auto objective = [&](const VectorX<Scalar>& v) -> Scalar {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (!(v(i) > gamma_box_lo<Scalar> && v(i) < gamma_box_hi<Scalar>))
        return std::numeric_limits<Scalar>::infinity();
    return correlation_increment(rho, R, GammaTriple<Scalar>(v(0), v(1), v(2)));
  };

  VectorX<Scalar> x0 = gamma_start<Scalar>();
  auto res = minimize_simplex(objective, x0, opt);
  int iterations = res.iterations;
  // One restart from the best vertex guards against a collapsed simplex.
  if (res.converged) {
    auto again = minimize_simplex(objective, res.argmin, opt);
    iterations += again.iterations;
    if (again.value <= res.value) res = again;
    res.converged = again.converged;
  }
  if (!res.converged) throw ConvergenceError("minimize_corr_mh: simplex did not converge");
  // gamma = 0 is feasible with increment exactly 0; never report worse.
  if (res.value > Scalar(0)) {
    res.argmin.setZero();
    res.value = Scalar(0);
  }

  MHSolution<Scalar> s;
  s.R = R;
  s.rho_hf = rho;
  s.eps_hf = hf.energy;
  s.gamma = GammaTriple<Scalar>(res.argmin(0), res.argmin(1), res.argmin(2));
  s.eps_corr = res.value;
  s.eps_corr_total = hf.energy + res.value;
  s.delta_area = mh_area_difference(R, s.gamma);
  s.stable = hf.energy < Scalar(0);
  s.hf_at_boundary = hf.at_boundary;
  s.simplex_iterations = iterations;
  return s;
}

template <typename Scalar = double>
struct ThresholdScan {
  Scalar lo = Scalar(0.5);
  Scalar hi = Scalar(5);
  Scalar step = Scalar(0.1);
  Scalar tol = Scalar(1e-7);
};

/// Lattice constant where the HF energy per electron crosses zero; below it
/// the lattice is unbound.
template <typename Scalar>
Scalar hf_stability_threshold(const LatticeConfig<Scalar>& config_template,
                              const ThresholdScan<Scalar>& scan = {}) {
  auto eps_hf = [&](Scalar R) { return minimize_hf_mh(config_template.with_R(R)).energy; };
  const int n = static_cast<int>(std::lround(double((scan.hi - scan.lo) / scan.step)));
  Scalar r_prev = scan.lo;
  Scalar e_prev = eps_hf(r_prev);
  for (int i = 1; i <= n; ++i) {
    const Scalar r = scan.lo + scan.step * Scalar(i);
    const Scalar e = eps_hf(r);
    if (e_prev > Scalar(0) && !(e > Scalar(0)))
      return find_root(eps_hf, Bracket<Scalar>(r_prev, r), scan.tol);
    r_prev = r;
    e_prev = e;
  }
  throw NoRootError("hf_stability_threshold: eps_hf has no sign change on the scan range");
}

}  // namespace dscale::mh
