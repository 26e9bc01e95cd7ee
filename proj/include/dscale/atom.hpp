#pragma once

// N-electron atoms and ions in the D -> infinity limit: the maximally
// symmetric Hartree-Fock configuration (all inter-electronic angles pi/2), the
// correlated configuration (angles opened to theta > pi/2), and the triangle
// geometry whose area change tracks the correlation energy.
//
// Energies are in large-D scaled hartree units, lengths in scaled bohr.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dscale/errors.hpp"
#include "dscale/numerics.hpp"

namespace dscale::atom {

enum class PairMode {
  AllPairs,    // every electron pair, C(N, 2) triangles
  NTriangles,  // N triangles around the nucleus (one for helium)
};

inline constexpr PairMode default_pair_mode = PairMode::NTriangles;

inline const char* to_string(PairMode m) {
  return m == PairMode::AllPairs ? "all-pairs" : "n-triangles";
}

/// Largest N/Z ratio for which positive ions keep the symmetric solution.
inline constexpr double max_ion_ratio = 0.936;
/// Neutral atoms keep it for Z below this.
inline constexpr double max_neutral_charge = 14.0;

template <typename Scalar = double>
struct AtomSpec {
  int electrons;
  Scalar nuclear_charge;  // may be +inf for the non-interacting limit

  AtomSpec(int n, Scalar z) : electrons(n), nuclear_charge(z) {
    if (n < 2) throw DomainError("atom: need at least two electrons");
    if (!(z > Scalar(0))) throw DomainError("atom: nuclear charge must be positive");
  }

  static AtomSpec neutral(int n) { return AtomSpec(n, Scalar(n)); }

  Scalar lambda() const { return Scalar(1) / nuclear_charge; }
  bool is_neutral() const { return nuclear_charge == Scalar(electrons); }

  bool in_validity_domain() const {
    if (is_neutral() && nuclear_charge < Scalar(max_neutral_charge)) return true;
    return Scalar(electrons) / nuclear_charge <= Scalar(max_ion_ratio);
  }
};

template <typename Scalar = double>
struct HFAtomSolution {
  Scalar radius;  // r_m
  Scalar energy;
};

template <typename Scalar = double>
struct CorrelatedAtomSolution {
  Scalar xi;
  Scalar radius;  // rho
  Scalar angle;   // theta, radians
  Scalar energy;
};

template <typename Scalar = double>
struct AtomReport {
  AtomSpec<Scalar> spec;
  HFAtomSolution<Scalar> hf;
  CorrelatedAtomSolution<Scalar> corr;
  Scalar correlation_energy;
  Scalar area_difference;
  int pair_count;
  PairMode pair_mode;
};

/// 1 - 2^{-3/2} (N - 1) / Z. The symmetric HF solution exists only while this
/// stays positive.
template <typename Scalar>
Scalar hf_screening_factor(const AtomSpec<Scalar>& spec) {
  using std::pow;
  const Scalar c = pow(Scalar(2), Scalar(-1.5));
  return Scalar(1) - c * Scalar(spec.electrons - 1) * spec.lambda();
}

template <typename Scalar>
HFAtomSolution<Scalar> hf_solution(const AtomSpec<Scalar>& spec) {
  const Scalar a = hf_screening_factor(spec);
  if (!(a > Scalar(0)))
    throw DomainError("hf_solution: screening factor non-positive, ion too negative");
  return {Scalar(1) / a, -Scalar(spec.electrons) / Scalar(2) * a * a};
}

/// 8 N Z^2 xi^2 (2 - xi)^2 - (N - xi)^3; its smallest positive zero is xi.
template <typename Scalar>
Scalar xi_quartic(const AtomSpec<Scalar>& spec, Scalar xi) {
  const Scalar n = Scalar(spec.electrons);
  const Scalar z = spec.nuclear_charge;
  const Scalar t = xi * (Scalar(2) - xi);
  const Scalar u = n - xi;
  return Scalar(8) * n * z * z * t * t - u * u * u;
}

template <typename Scalar>
Scalar xi_quartic_derivative(const AtomSpec<Scalar>& spec, Scalar xi) {
  const Scalar n = Scalar(spec.electrons);
  const Scalar z = spec.nuclear_charge;
  const Scalar t = xi * (Scalar(2) - xi);
  const Scalar u = n - xi;
  return Scalar(16) * n * z * z * t * (Scalar(2) - Scalar(2) * xi) + Scalar(3) * u * u;
}

template <typename Scalar>
Scalar solve_xi(const AtomSpec<Scalar>& spec, int grid = defaults::scan_grid,
                Scalar tol = Scalar(defaults::root_tol)) {
  using std::abs;
  using std::isinf;
  if (isinf(spec.nuclear_charge)) return Scalar(0);

  auto g = [&](Scalar x) { return xi_quartic(spec, x); };
  const Scalar n = Scalar(spec.electrons);
  Scalar xi;
  try {
    xi = scan_smallest_positive_root(g, n, grid, tol);
  } catch (const NoRootError&) {
    throw NoRootError("solve_xi: no root in (0, N) for N=" + std::to_string(spec.electrons));
  }
  if (!(xi < n)) throw NoRootError("solve_xi: root at xi = N is not physical");

  // The bracketed solve stops on width; polish to the residual floor.
  Scalar res = abs(g(xi));
  for (int k = 0; k < 4 && res > Scalar(0); ++k) {
    const Scalar d = xi_quartic_derivative(spec, xi);
    if (d == Scalar(0)) break;
    const Scalar cand = xi - g(xi) / d;
    const Scalar cand_res = abs(g(cand));
    if (!(cand > Scalar(0) && cand < n) || !(cand_res < res)) break;
    xi = cand;
    res = cand_res;
  }
  return xi;
}

template <typename Scalar>
CorrelatedAtomSolution<Scalar> correlated_from_xi(const AtomSpec<Scalar>& spec, Scalar xi) {
  using std::acos;
  const Scalar n = Scalar(spec.electrons);
  const Scalar ratio = (Scalar(1) - xi) / (Scalar(1) - xi / n);
  CorrelatedAtomSolution<Scalar> s;
  s.xi = xi;
  s.energy = -ratio * ratio * ratio * (n - n * xi + xi) / Scalar(2);
  s.angle = acos(xi / (xi - n));
  s.radius = Scalar(1) / (ratio * ratio);
  return s;
}

template <typename Scalar>
CorrelatedAtomSolution<Scalar> correlated_solution(const AtomSpec<Scalar>& spec) {
  return correlated_from_xi(spec, solve_xi(spec));
}

template <typename Scalar>
Scalar correlation_energy(const AtomSpec<Scalar>& spec) {
  using std::abs;
  return abs(correlated_solution(spec).energy - hf_solution(spec).energy);
}

template <typename Scalar>
Scalar triangle_area(Scalar side_a, Scalar side_b, Scalar angle) {
  using std::sin;
  if (!(side_a > Scalar(0) && side_b > Scalar(0)))
    throw DomainError("triangle_area: sides must be positive");
  if (!(angle > Scalar(0) && angle < std::numbers::pi_v<Scalar>))
    throw DomainError("triangle_area: angle must lie in (0, pi)");
  return side_a * side_b * sin(angle) / Scalar(2);
}

inline int pair_count(int electrons, PairMode mode) {
  if (mode == PairMode::AllPairs) return electrons * (electrons - 1) / 2;
  // Two electrons span a single triangle with the nucleus.
  return electrons == 2 ? 1 : electrons;
}

/// |HF triangle - correlated triangle| for one electron pair.
template <typename Scalar>
Scalar pair_area_difference(const HFAtomSolution<Scalar>& hf,
                            const CorrelatedAtomSolution<Scalar>& corr) {
  using std::abs;
  const Scalar right = std::numbers::pi_v<Scalar> / Scalar(2);
  return abs(triangle_area(hf.radius, hf.radius, right) -
             triangle_area(corr.radius, corr.radius, corr.angle));
}

template <typename Scalar>
Scalar area_difference(const AtomSpec<Scalar>& spec, PairMode mode = default_pair_mode) {
  return Scalar(pair_count(spec.electrons, mode)) *
         pair_area_difference(hf_solution(spec), correlated_solution(spec));
}

template <typename Scalar>
AtomReport<Scalar> atom_report(const AtomSpec<Scalar>& spec, PairMode mode = default_pair_mode) {
  using std::abs;
  const auto hf = hf_solution(spec);
  const auto corr = correlated_solution(spec);
  const int count = pair_count(spec.electrons, mode);
  return AtomReport<Scalar>{spec,
                            hf,
                            corr,
                            abs(corr.energy - hf.energy),
                            Scalar(count) * pair_area_difference(hf, corr),
                            count,
                            mode};
}

}  // namespace dscale::atom
