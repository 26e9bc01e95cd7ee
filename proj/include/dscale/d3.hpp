#pragma once

// Three-dimensional comparison models. Nothing here is computed from first
// principles: these are literature fits and expectation values, frozen as
// constants, plus the geometry that turns a change of radius into a change of
// spherical surface area.

#include <cmath>
#include <numbers>
#include <string>

#include "dscale/errors.hpp"
#include "dscale/numerics.hpp"

namespace dscale::d3 {

/// Helium 1s^2: mean electron radius (bohr) at the HF level and from an
/// accurate correlated wavefunction, and |correlation energy| (hartree).
template <typename Scalar = double>
struct HeliumD3Constants {
  Scalar r_hf = Scalar(0.92724);
  Scalar r_exact = Scalar(0.92947);
  Scalar eps_corr = Scalar(0.04204);
};

/// Total energy per electron of simple-cubic metallic hydrogen, rydberg:
/// eps(r_s) = a / r_s^2 - b / r_s - c - d ln r_s. Correlation energy per
/// electron, rydberg: eps_corr(r_s) = e + f ln r_s.
template <typename Scalar = double>
struct MHD3Fit {
  Scalar a = Scalar(2.21);
  Scalar b = Scalar(2.80604);
  Scalar c = Scalar(0.13993);
  Scalar d = Scalar(0.11679);
  Scalar e = Scalar(-0.1303);
  Scalar f = Scalar(0.0495);
};

inline constexpr double default_derivative_floor = 1e-4;

template <typename Scalar>
Scalar helium_d3_area_difference(const HeliumD3Constants<Scalar>& k = {}) {
  using std::abs;
  return Scalar(4) * std::numbers::pi_v<Scalar> * abs(k.r_exact * k.r_exact - k.r_hf * k.r_hf);
}

namespace detail {
template <typename Scalar>
void require_positive_rs(Scalar r_s) {
  if (!(r_s > Scalar(0))) throw DomainError("r_s must be positive");
}
}  // namespace detail

template <typename Scalar>
Scalar mh_d3_total_energy(Scalar r_s, const MHD3Fit<Scalar>& fit = {}) {
  using std::log;
  detail::require_positive_rs(r_s);
  return fit.a / (r_s * r_s) - fit.b / r_s - fit.c - fit.d * log(r_s);
}

template <typename Scalar>
Scalar mh_d3_total_energy_derivative(Scalar r_s, const MHD3Fit<Scalar>& fit = {}) {
  detail::require_positive_rs(r_s);
  return -Scalar(2) * fit.a / (r_s * r_s * r_s) + fit.b / (r_s * r_s) - fit.d / r_s;
}

template <typename Scalar>
Scalar mh_d3_correlation_energy(Scalar r_s, const MHD3Fit<Scalar>& fit = {}) {
  using std::log;
  detail::require_positive_rs(r_s);
  return fit.e + fit.f * log(r_s);
}

/// (4 pi / 3)^{1/3}: lattice constant per Wigner-Seitz radius, simple cubic.
template <typename Scalar = double>
Scalar ws_ratio() {
  using std::cbrt;
  return cbrt(Scalar(4) * std::numbers::pi_v<Scalar> / Scalar(3));
}

template <typename Scalar>
Scalar R_of_rs(Scalar r_s) {
  detail::require_positive_rs(r_s);
  return ws_ratio<Scalar>() * r_s;
}

template <typename Scalar>
Scalar rs_of_R(Scalar R) {
  if (!(R > Scalar(0))) throw DomainError("R must be positive");
  return R / ws_ratio<Scalar>();
}

template <typename Scalar = double>
struct MHD3Report {
  Scalar r_s;
  Scalar R;
  Scalar eps_total;
  Scalar eps_corr;
  Scalar deps_drs;
  Scalar delta_rs;    // eps_corr / eps'
  Scalar delta_area;  // 8 pi r_s delta_rs, signed
  bool stable;        // eps_total < 0
};

template <typename Scalar>
MHD3Report<Scalar> mh_d3_report(Scalar r_s, Scalar derivative_floor = Scalar(default_derivative_floor),
                                const MHD3Fit<Scalar>& fit = {}) {
  using std::abs;
  MHD3Report<Scalar> rep;
  rep.r_s = r_s;
  rep.R = R_of_rs(r_s);
  rep.eps_total = mh_d3_total_energy(r_s, fit);
  rep.eps_corr = mh_d3_correlation_energy(r_s, fit);
  rep.deps_drs = mh_d3_total_energy_derivative(r_s, fit);
  if (!(abs(rep.deps_drs) >= derivative_floor))
    throw SingularDerivativeError("mh_d3_report: |d eps/d r_s| = " + std::to_string(double(abs(rep.deps_drs))) +
                                  " below floor at r_s = " + std::to_string(double(r_s)));
  rep.delta_rs = rep.eps_corr / rep.deps_drs;
  rep.delta_area = Scalar(8) * std::numbers::pi_v<Scalar> * r_s * rep.delta_rs;
  rep.stable = rep.eps_total < Scalar(0);
  return rep;
}

/// Zero of the total-energy fit; below it the lattice is unbound.
template <typename Scalar = double>
Scalar mh_d3_stability_threshold(Scalar lo = Scalar(0.5), Scalar hi = Scalar(1.5),
                                 const MHD3Fit<Scalar>& fit = {}) {
  auto eps = [&](Scalar r) { return mh_d3_total_energy(r, fit); };
  try {
    return find_root(eps, Bracket<Scalar>(lo, hi), Scalar(defaults::root_tol));
  } catch (const BracketError&) {
    throw NoRootError("mh_d3_stability_threshold: no sign change in bracket");
  }
}

}  // namespace dscale::d3
