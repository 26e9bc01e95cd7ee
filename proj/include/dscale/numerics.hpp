#pragma once

// Scalar root finding and low-dimensional minimization. Everything here is a
// pure function of its arguments: no hidden state, no randomness.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dscale/errors.hpp"

namespace dscale {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

namespace defaults {
inline constexpr double root_tol = 1e-12;
inline constexpr double scalar_min_tol = 1e-10;
inline constexpr double simplex_f_tol = 1e-12;
inline constexpr double simplex_x_tol = 1e-9;
inline constexpr double simplex_step = 0.02;
inline constexpr int scan_grid = 10000;
inline constexpr int root_max_iter = 200;
inline constexpr int scalar_min_max_iter = 500;
inline constexpr int simplex_max_iter = 20000;
}  // namespace defaults

/// Search interval [lo, hi] for a sign change.
template <typename Scalar = double>
struct Bracket {
  Scalar lo;
  Scalar hi;

  Bracket(Scalar lo_, Scalar hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi)) throw BracketError("bracket requires lo < hi");
  }

  Scalar width() const { return hi - lo; }
};

template <typename Scalar = double>
struct MinimizeResult {
  VectorX<Scalar> argmin;
  Scalar value{};
  int iterations = 0;
  bool converged = false;

  /// First component; convenient for one-dimensional searches.
  Scalar x() const { return argmin(0); }
};

namespace detail {
template <typename Scalar>
int sign(Scalar v) {
  return (v > Scalar(0)) - (v < Scalar(0));
}
}  // namespace detail

/// Bracketed root: bisection, with a regula-falsi trial point taken only
/// when the previous step at least halved the bracket. Stops when |f(x)| <= tol
/// or the bracket is narrower than tol.
template <typename Scalar, typename F>
Scalar find_root(F&& f, Bracket<Scalar> bracket, Scalar tol,
                 int max_iter = defaults::root_max_iter) {
  using std::abs;
  if (!(tol > Scalar(0))) throw DomainError("find_root: tol must be positive");
  Scalar a = bracket.lo, b = bracket.hi;
  Scalar fa = f(a), fb = f(b);
  if (fa == Scalar(0)) return a;
  if (fb == Scalar(0)) return b;
  if (detail::sign(fa) == detail::sign(fb))
    throw BracketError("find_root: no sign change in bracket");

  bool use_secant = true;
  for (int it = 0; it < max_iter; ++it) {
    const Scalar width = b - a;
    Scalar x = a + width / 2;
    if (use_secant) {
      const Scalar xs = b - fb * (b - a) / (fb - fa);
      if (xs > a && xs < b) x = xs;
    }
    const Scalar fx = f(x);
    if (abs(fx) <= tol) return x;
    if (detail::sign(fx) == detail::sign(fa)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    if (b - a <= tol) return abs(fa) < abs(fb) ? a : b;
    use_secant = (b - a) <= width / 2;
  }
  throw ConvergenceError("find_root: iteration budget exhausted");
}

/// Smallest positive root of f on (0, upper]: walks a uniform grid from 0 to
/// the first sign change and refines it with find_root.
template <typename Scalar, typename F>
Scalar scan_smallest_positive_root(F&& f, Scalar upper,
                                   int grid = defaults::scan_grid,
                                   Scalar tol = Scalar(defaults::root_tol)) {
  if (!(upper > Scalar(0))) throw DomainError("scan: upper must be positive");
  if (grid < 100) throw DomainError("scan: grid must be at least 100 points");

  Scalar x_prev = Scalar(0);
  Scalar f_prev = f(x_prev);
  for (int i = 1; i <= grid; ++i) {
    const Scalar x = upper * Scalar(i) / Scalar(grid);
    const Scalar fx = f(x);
    if (fx == Scalar(0)) return x;
    if (f_prev != Scalar(0) && detail::sign(fx) != detail::sign(f_prev))
      return find_root(f, Bracket<Scalar>(x_prev, x), tol);
    x_prev = x;
    f_prev = fx;
  }
  throw NoRootError("scan: no sign change on (0, " + std::to_string(double(upper)) + "]");
}

/// Golden-section search on [lo, hi]; f should be unimodal there.
template <typename Scalar, typename F>
MinimizeResult<Scalar> minimize_scalar(F&& f, Scalar lo, Scalar hi,
                                       Scalar tol = Scalar(defaults::scalar_min_tol),
                                       int max_iter = defaults::scalar_min_max_iter) {
  using std::sqrt;
  if (!(lo < hi)) throw DomainError("minimize_scalar: requires lo < hi");
  if (!(tol > Scalar(0))) throw DomainError("minimize_scalar: tol must be positive");

  const Scalar inv_phi = (sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar a = lo, b = hi;
  Scalar x1 = b - inv_phi * (b - a);
  Scalar x2 = a + inv_phi * (b - a);
  Scalar f1 = f(x1), f2 = f(x2);

  int it = 0;
  while (b - a > tol) {
    if (++it > max_iter) throw ConvergenceError("minimize_scalar: iteration budget exhausted");
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  MinimizeResult<Scalar> out;
  out.argmin.resize(1);
  if (f1 <= f2) {
    out.argmin(0) = x1;
    out.value = f1;
  } else {
    out.argmin(0) = x2;
    out.value = f2;
  }
  out.iterations = it;
  out.converged = true;
  return out;
}

template <typename Scalar = double>
struct SimplexOptions {
  Scalar step = Scalar(defaults::simplex_step);
  Scalar x_tol = Scalar(defaults::simplex_x_tol);  // simplex diameter, max-norm
  Scalar f_tol = Scalar(defaults::simplex_f_tol);  // spread of vertex values
  int max_iter = defaults::simplex_max_iter;
};

/// Nelder-Mead with standard coefficients. The initial simplex is x0 plus
/// step along each axis. Non-convergence is reported through
/// `converged == false`, never thrown.
template <typename Scalar, typename F>
MinimizeResult<Scalar> minimize_simplex(F&& f, const VectorX<Scalar>& x0,
                                        const SimplexOptions<Scalar>& opt = {}) {
  using std::abs;
  const Eigen::Index n = x0.size();
  if (n < 1) throw DomainError("minimize_simplex: empty start point");
  if (!(opt.step > Scalar(0))) throw DomainError("minimize_simplex: step must be positive");

  std::vector<VectorX<Scalar>> pts(n + 1, x0);
  std::vector<Scalar> vals(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) pts[i + 1](i) += opt.step;
  for (Eigen::Index i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<Eigen::Index> order(n + 1);
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index l, Eigen::Index r) { return vals[l] < vals[r]; });
    std::vector<VectorX<Scalar>> p2;
    std::vector<Scalar> v2;
    p2.reserve(n + 1);
    v2.reserve(n + 1);
    for (auto k : order) {
      p2.push_back(pts[k]);
      v2.push_back(vals[k]);
    }
    pts.swap(p2);
    vals.swap(v2);
  };
  auto converged_now = [&] {
    Scalar diam(0);
    for (Eigen::Index i = 1; i <= n; ++i)
      diam = std::max(diam, (pts[i] - pts[0]).cwiseAbs().maxCoeff());
    return diam <= opt.x_tol && abs(vals[n] - vals[0]) <= opt.f_tol;
  };

  MinimizeResult<Scalar> out;
  int it = 0;
  sort_vertices();
  while (!converged_now()) {
    if (it >= opt.max_iter) {
      out.argmin = pts[0];
      out.value = vals[0];
      out.iterations = it;
      out.converged = false;
      return out;
    }
    ++it;
    VectorX<Scalar> centroid = VectorX<Scalar>::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) centroid += pts[i];
    centroid /= Scalar(n);

    const VectorX<Scalar> xr = centroid + (centroid - pts[n]);
    const Scalar fr = f(xr);
    if (fr < vals[0]) {
      const VectorX<Scalar> xe = centroid + Scalar(2) * (centroid - pts[n]);
      const Scalar fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      const bool outside = fr < vals[n];
      const VectorX<Scalar> xc = outside ? VectorX<Scalar>(centroid + (xr - centroid) / Scalar(2))
                                         : VectorX<Scalar>(centroid + (pts[n] - centroid) / Scalar(2));
      const Scalar fc = f(xc);
      if (fc < (outside ? fr : vals[n])) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (Eigen::Index i = 1; i <= n; ++i) {
          pts[i] = pts[0] + (pts[i] - pts[0]) / Scalar(2);
          vals[i] = f(pts[i]);
        }
      }
    }
    sort_vertices();
  }
  out.argmin = pts[0];
  out.value = vals[0];
  out.iterations = it;
  out.converged = true;
  return out;
}

/// Convenience overload: one tolerance for both the diameter and value spread.
template <typename Scalar, typename F>
MinimizeResult<Scalar> minimize_simplex(F&& f, const VectorX<Scalar>& x0, Scalar step,
                                        Scalar tol, int max_iter) {
  SimplexOptions<Scalar> opt;
  opt.step = step;
  opt.x_tol = tol;
  opt.f_tol = tol;
  opt.max_iter = max_iter;
  return minimize_simplex(std::forward<F>(f), x0, opt);
}

}  // namespace dscale
