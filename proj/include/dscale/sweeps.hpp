#pragma once

#include <optional>
#include <vector>

#include "dscale/atom.hpp"
#include "dscale/d3.hpp"
#include "dscale/lattice.hpp"
#include "dscale/table.hpp"

namespace dscale {

struct AtomsSweepConfig {
  int n_lo = 2;
  int n_hi = 14;
  std::optional<double> nuclear_charge;  // unset: neutral atoms, Z = N
  atom::PairMode pair_mode = atom::default_pair_mode;
  double root_tol = defaults::root_tol;
  int threads = 1;
};

/// One row per N, ascending. Rows outside the validity domain are kept with
/// valid = 0; rows that cannot be solved carry NaN cells and errors.
SweepTable atoms_sweep(const AtomsSweepConfig& cfg);

/// One row per R, in the given order. Per-row failures become error cells.
SweepTable mh_sweep(const std::vector<double>& r_values, const lattice::LatticeConfig<double>& config_template,
                    int threads = 1);

SweepTable mh_d3_sweep(const std::vector<double>& rs_values,
                       double derivative_floor = d3::default_derivative_floor, int threads = 1);

/// Single row: helium at D = 3.
SweepTable helium_d3_table(const d3::HeliumD3Constants<double>& k = {});

/// A, A+step, ..., up to B inclusive (within step/1000). Elements are
/// A + i*step, never accumulated.
std::vector<double> linear_grid(double a, double b, double step);

}  // namespace dscale
