#include "dscale/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "dscale/metallic_hydrogen.hpp"

namespace dscale {

namespace {

/// Runs job(i) for i in [0, n) on up to `threads` workers. Each job writes
/// only its own slot, so the result is independent of scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) job(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

struct RowResult {
  std::vector<double> cells;
  std::vector<std::pair<std::string, std::string>> errors;  // column, message
};

SweepTable assemble(std::vector<Column> cols, std::vector<RowResult> rows) {
  SweepTable t(std::move(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.add_row(std::move(rows[i].cells));
    for (auto& [c, m] : rows[i].errors) t.set_error(i, c, m);
  }
  return t;
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::vector<double> linear_grid(double a, double b, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (b < a) throw DomainError("grid end must not precede its start");
  const auto n = static_cast<long>(std::floor((b - a) / step + 1e-3));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

SweepTable atoms_sweep(const AtomsSweepConfig& cfg) {
  if (cfg.n_lo < 2 || cfg.n_hi < cfg.n_lo) throw DomainError("atoms_sweep: need 2 <= n_lo <= n_hi");
  using atom::PairMode;
  std::vector<Column> cols = {
      {"N", "count"},
      {"Z", "e"},
      {"valid", "flag"},
      {"r_hf", "scaled_bohr"},
      {"eps_hf", "scaled_hartree"},
      {"xi", "1"},
      {"rho", "scaled_bohr"},
      {"theta_rad", "rad"},
      {"eps_exact", "scaled_hartree"},
      {"eps_corr", "scaled_hartree"},
      {"delta_area", "scaled_bohr2"},
      {"pair_count", "count"},
      {"delta_area_all_pairs", "scaled_bohr2"},
      {"delta_area_n_triangles", "scaled_bohr2"},
      {"eps_corr_over_Z2", "scaled_hartree"},
      {"delta_area_over_Z2", "scaled_bohr2"},
      {"inv_eps_corr", "1/scaled_hartree"},
      {"inv_delta_area", "1/scaled_bohr2"},
      {"quartic_residual", "1"},
  };
  const std::size_t n = static_cast<std::size_t>(cfg.n_hi - cfg.n_lo + 1);
  std::vector<RowResult> rows(n);

  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const int N = cfg.n_lo + static_cast<int>(i);
    const double Z = cfg.nuclear_charge.value_or(static_cast<double>(N));
    const atom::AtomSpec<double> spec(N, Z);
    RowResult& r = rows[i];
    r.cells.assign(cols.size(), kNaN);
    r.cells[0] = N;
    r.cells[1] = Z;
    r.cells[2] = spec.in_validity_domain() ? 1.0 : 0.0;
    r.cells[11] = atom::pair_count(N, cfg.pair_mode);
    try {
      const auto hf = atom::hf_solution(spec);
      r.cells[3] = hf.radius;
      r.cells[4] = hf.energy;
      const double xi = atom::solve_xi(spec, defaults::scan_grid, cfg.root_tol);
      const auto corr = atom::correlated_from_xi(spec, xi);
      r.cells[5] = xi;
      r.cells[6] = corr.radius;
      r.cells[7] = corr.angle;
      r.cells[8] = corr.energy;
      const double ec = std::abs(corr.energy - hf.energy);
      const double per_pair = atom::pair_area_difference(hf, corr);
      const double da = atom::pair_count(N, cfg.pair_mode) * per_pair;
      r.cells[9] = ec;
      r.cells[10] = da;
      r.cells[12] = atom::pair_count(N, PairMode::AllPairs) * per_pair;
      r.cells[13] = atom::pair_count(N, PairMode::NTriangles) * per_pair;
      r.cells[14] = ec / (Z * Z);
      r.cells[15] = da / (Z * Z);
      r.cells[16] = 1.0 / ec;
      r.cells[17] = 1.0 / da;
      r.cells[18] = std::abs(atom::xi_quartic(spec, xi));
    } catch (const Error& e) {
      for (std::size_t c = 3; c < cols.size(); ++c)
        if (c != 11 && std::isnan(r.cells[c])) r.errors.emplace_back(cols[c].name, e.what());
    }
  });

  SweepTable t = assemble(cols, std::move(rows));
  t.set_metadata("table", "atoms");
  t.set_metadata("units", "large-D scaled hartree / scaled bohr");
  t.set_metadata("n_range", std::to_string(cfg.n_lo) + ".." + std::to_string(cfg.n_hi));
  t.set_metadata("nuclear_charge", cfg.nuclear_charge ? format_number(*cfg.nuclear_charge) : "neutral");
  t.set_metadata("pair_mode", atom::to_string(cfg.pair_mode));
  t.set_metadata("xi_scan_grid", std::to_string(defaults::scan_grid));
  t.set_metadata("root_tol", format_number(cfg.root_tol));
  return t;
}

SweepTable mh_sweep(const std::vector<double>& r_values, const lattice::LatticeConfig<double>& tmpl, int threads) {
  std::vector<Column> cols = {
      {"R", "scaled_bohr"},
      {"rho_hf", "scaled_bohr"},
      {"eps_hf", "scaled_hartree"},
      {"eps_corr_total", "scaled_hartree"},
      {"eps_corr", "scaled_hartree"},
      {"abs_eps_corr", "scaled_hartree"},
      {"g100", "1"},
      {"g110", "1"},
      {"g111", "1"},
      {"g100_small_gamma", "1"},
      {"g110_small_gamma", "1"},
      {"g111_small_gamma", "1"},
      {"delta_area", "scaled_bohr2"},
      {"stable", "flag"},
      {"hf_at_boundary", "flag"},
  };
  std::vector<RowResult> rows(r_values.size());
  parallel_for(r_values.size(), threads, [&](std::size_t i) {
    RowResult& r = rows[i];
    r.cells.assign(cols.size(), kNaN);
    r.cells[0] = r_values[i];
    try {
      const auto s = mh::minimize_corr_mh(tmpl.with_R(r_values[i]));
      const auto est = mh::small_gamma_estimate(s.rho_hf, s.R);
      r.cells = {s.R,
                 s.rho_hf,
                 s.eps_hf,
                 s.eps_corr_total,
                 s.eps_corr,
                 std::abs(s.eps_corr),
                 s.gamma.g100(),
                 s.gamma.g110(),
                 s.gamma.g111(),
                 est(0),
                 est(1),
                 est(2),
                 s.delta_area,
                 s.stable ? 1.0 : 0.0,
                 s.hf_at_boundary ? 1.0 : 0.0};
    } catch (const Error& e) {
      for (std::size_t c = 1; c < cols.size(); ++c) r.errors.emplace_back(cols[c].name, e.what());
    }
  });
  SweepTable t = assemble(cols, std::move(rows));
  t.set_metadata("table", "mh-infty");
  t.set_metadata("units", "large-D scaled hartree per electron / scaled bohr");
  t.set_metadata("lattice", "simple-cubic");
  t.set_metadata("shell_cutoff", std::to_string(tmpl.shell_cutoff));
  t.set_metadata("tail_tol", format_number(tmpl.tail_tol));
  t.set_metadata("tail_correction", flag(tmpl.tail_correction));
  t.set_metadata("rho_window", "0.1..10");
  t.set_metadata("gamma_box", "-0.5..0.1");
  t.set_metadata("simplex_step", format_number(defaults::simplex_step));
  t.set_metadata("simplex_f_tol", format_number(defaults::simplex_f_tol));
  t.set_metadata("simplex_x_tol", format_number(defaults::simplex_x_tol));
  return t;
}

SweepTable mh_d3_sweep(const std::vector<double>& rs_values, double floor, int threads) {
  std::vector<Column> cols = {
      {"r_s", "bohr"},          {"R", "bohr"},         {"eps_total", "rydberg"},
      {"eps_corr", "rydberg"},  {"deps_drs", "rydberg/bohr"}, {"delta_rs", "bohr"},
      {"delta_area", "bohr2"},  {"abs_delta_area", "bohr2"}, {"stable", "flag"},
  };
  std::vector<RowResult> rows(rs_values.size());
  parallel_for(rs_values.size(), threads, [&](std::size_t i) {
    RowResult& r = rows[i];
    const double rs = rs_values[i];
    r.cells.assign(cols.size(), kNaN);
    r.cells[0] = rs;
    try {
      r.cells[1] = d3::R_of_rs(rs);
      r.cells[2] = d3::mh_d3_total_energy(rs);
      r.cells[3] = d3::mh_d3_correlation_energy(rs);
      r.cells[4] = d3::mh_d3_total_energy_derivative(rs);
      r.cells[8] = r.cells[2] < 0.0 ? 1.0 : 0.0;
      const auto rep = d3::mh_d3_report(rs, floor);
      r.cells[5] = rep.delta_rs;
      r.cells[6] = rep.delta_area;
      r.cells[7] = std::abs(rep.delta_area);
    } catch (const Error& e) {
      for (std::size_t c = 1; c < cols.size(); ++c)
        if (std::isnan(r.cells[c])) r.errors.emplace_back(cols[c].name, e.what());
    }
  });
  SweepTable t = assemble(cols, std::move(rows));
  t.set_metadata("table", "mh-3d");
  t.set_metadata("units", "rydberg per electron / bohr");
  t.set_metadata("derivative_floor", format_number(floor));
  t.set_metadata("stability_threshold_rs", format_number(d3::mh_d3_stability_threshold<double>()));
  return t;
}

SweepTable helium_d3_table(const d3::HeliumD3Constants<double>& k) {
  SweepTable t({{"r_hf", "bohr"},
                {"r_exact", "bohr"},
                {"delta_area", "bohr2"},
                {"eps_corr", "hartree"},
                {"bound_ratio", "1"},
                {"bound_holds", "flag"}});
  const double da = d3::helium_d3_area_difference(k);
  const double ratio = k.eps_corr / da;
  t.add_row({k.r_hf, k.r_exact, da, k.eps_corr, ratio, ratio <= 1.0 ? 1.0 : 0.0});
  t.set_metadata("table", "helium-3d");
  t.set_metadata("units", "hartree / bohr");
  return t;
}

}  // namespace dscale
