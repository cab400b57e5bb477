// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 9 is the desk-scale exact-diagonalisation run and
// dominates the runtime; --only N runs a single criterion while iterating.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdot/constants.hpp"
#include "qdot/core_model.hpp"
#include "qdot/coupling.hpp"
#include "qdot/dynamics.hpp"
#include "qdot/entanglement.hpp"
#include "qdot/exact_ed.hpp"
#include "support/qmc_oracle.hpp"
#include "support/reference_integrator.hpp"
#include "support/test_random.hpp"
#include "support/wootters_oracle.hpp"

using namespace qdot;
using dynamics::QState;

constexpr double pi = std::numbers::pi;
constexpr double hbar = constants::hbar_ueV_ps;

namespace {

struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void expect_near(double value, double target, double tol, const std::string& what) {
    if (!(std::abs(value - target) <= tol)) {
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%s (got %.12g, want %.12g +- %.3g)",
                    what.c_str(), value, target, tol);
      failures.push_back(buf);
    }
  }
};

// 1. Gate timing: P1 at the NOT, Hadamard and full-return times.
void criterion_gate_timing(Check& c) {
  const double delta = 1.0;
  const model::TwoLevelH h{0.0, 0.0, 2.0 * delta};
  const QState zero = QState::computational(1, 0);

  const double p1_not =
      dynamics::evolve_two_level(zero, h, pi * hbar / (4.0 * delta)).population(1);
  const double p1_had =
      dynamics::evolve_two_level(zero, h, pi * hbar / (8.0 * delta)).population(1);
  const double p1_back =
      dynamics::evolve_two_level(zero, h, pi * hbar / (2.0 * delta)).population(1);

  c.expect_near(p1_not, 1.0, 1e-10, "P(|1>) at t = pi hbar/(4 delta)");
  c.expect_near(p1_had, 0.5, 1e-10, "P(|1>) at t = pi hbar/(8 delta)");
  c.expect_near(p1_back, 0.0, 1e-10, "P(|1>) at the full period");
}

// 2. ROOT SWAP concurrence |sin 2vt| over two periods.
void criterion_root_swap(Check& c) {
  const double v = 0.5;
  const auto grid = entangle::time_grid(2.0 * pi * hbar / v, 4001);
  const auto trace = entangle::root_swap_trace(v, grid);
  double max_dev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    max_dev = std::max(max_dev, std::abs(trace.concurrence[i] -
                                         std::abs(std::sin(2.0 * v * grid[i] / hbar))));
  c.expect(max_dev < 1e-9, "pointwise |sin 2vt| agreement (dev " +
                               std::to_string(max_dev) + ")");

  const auto peak = entangle::root_swap_trace(v, std::vector<double>{pi * hbar / (4.0 * v)});
  c.expect_near(peak.concurrence[0], 1.0, 1e-9, "c = 1 at t = pi hbar/(4v)");
}

// 3. Detuned suppression at v/gamma = 0.1.
void criterion_detuned(Check& c) {
  const double gamma = 1.0, v = 0.1;
  const double eps = std::hypot(gamma, v);
  const auto grid = entangle::time_grid(4.0 * pi * hbar / eps, 20001);
  const auto trace = entangle::detuned_trace(gamma, v, grid);

  double cmax = 0.0, tmax = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cmax = std::max(cmax, trace.concurrence[i]);
    tmax = std::max(tmax, trace.transfer_prob[i]);
  }
  c.expect_near(cmax, 0.198, 0.002, "max concurrence");
  const double expected_transfer = (v / gamma) * (v / gamma);
  c.expect(std::abs(tmax - expected_transfer) / expected_transfer < 0.05,
           "max transfer within 5% of (v/gamma)^2");
}

// 4. Entanglement preservation after switch-off.
void criterion_preservation(Check& c) {
  {
    const double gamma = 1.0, v = 1.0;
    const double t_star = pi * hbar / (4.0 * v);
    const auto grid = entangle::time_grid(t_star + 4.0 * pi * hbar / v, 60001);
    const auto trace = entangle::preservation_trace(gamma, v, grid);
    double cmin = 2.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= t_star) cmin = std::min(cmin, trace.concurrence[i]);
    c.expect_near(cmin, 0.70711, 1e-4, "gamma = v minimum preserved concurrence");
  }
  {
    const double gamma = 1.0, v = 0.1;
    const double t_star = pi * hbar / (4.0 * v);
    const auto grid = entangle::time_grid(t_star + 6.0 * pi * hbar / gamma, 20001);
    const auto trace = entangle::preservation_trace(gamma, v, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= t_star) worst = std::max(worst, 1.0 - trace.concurrence[i]);
    c.expect(worst < 2e-2, "v/gamma = 0.1 deviation from 1 stays below 2e-2 (got " +
                               std::to_string(worst) + ")");
  }
}

// 5. Exact cancellation for computational starts with one dot switched off.
void criterion_cancellation(Check& c) {
  const auto grid = entangle::time_grid(20.0 * pi * hbar, 10000);
  const auto trace = entangle::computational_start_trace(0.4, 1.0, "00", grid, 0.0);
  double cmax = 0.0;
  for (double cc : trace.concurrence) cmax = std::max(cmax, cc);
  c.expect(cmax < 1e-12, "c(t) < 1e-12 on a 10^4-point grid (got " +
                             std::to_string(cmax) + ")");
}

// 6. Coupling decay: n^-6 ratios, electrostatics oracle, dipole asymptotics.
void criterion_coupling(Check& c) {
  coupling::ArrayGeometry g;
  g.n_dots = 6;
  g.spacing_nm = 300.0;
  g.side_nm = 100.0;
  g.image_distance_nm = 20.0;
  g.permittivity = 12.9;

  const double s1 = coupling::v_screened(1, g);
  for (int n = 2; n <= 5; ++n) {
    const double ratio = coupling::v_screened(n, g) / s1;
    c.expect(std::abs(ratio - std::pow(n, -6.0)) < 1e-14 * std::pow(n, -6.0),
             "screened ratio n^-6 at n = " + std::to_string(n));
  }

  // corner-charge electrostatics oracle in extended precision (the
  // anti/aligned difference cancels to O((L/nd)^4))
  for (int n = 1; n <= 3; ++n) {
    const long double L = g.side_nm, r = n * static_cast<long double>(g.spacing_nm);
    const long double scale = constants::coulomb_ueV_nm / g.permittivity;
    auto inv = [](long double dx, long double dy) {
      return 1.0L / std::sqrt(dx * dx + dy * dy);
    };
    const long double anti = inv(r + L, 0) + inv(r, L) + inv(r, L) + inv(r - L, 0);
    const long double aligned = inv(r, 0) + inv(r + L, L) + inv(r - L, L) + inv(r, 0);
    const double oracle = static_cast<double>(0.5L * scale * (anti - aligned));
    const double value = coupling::v_exact(n, g);
    c.expect(std::abs(value - oracle) / oracle < 1e-12,
             "six-term formula vs electrostatics oracle at n = " + std::to_string(n));
  }

  coupling::ArrayGeometry far = g;
  far.spacing_nm = 100.0 * far.side_nm;
  const double ratio = coupling::v_exact(1, far) / coupling::v_dipole(1, far);
  c.expect(std::abs(ratio - 1.0) < 0.01, "dipole agreement within 1% at d/L = 100");
}

// 7. Flux switching and channel-swap symmetry on a 101-point grid.
void criterion_flux(Check& c) {
  model::EffectiveParams base;
  base.delta_ueV = 1.0;

  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
  const auto table = model::spectrum_vs_flux(base, grid);

  const auto& half = table[50];
  c.expect(std::abs(half.singlet_plus - half.singlet_minus) < 1e-12,
           "singlets exactly degenerate at half flux");
  c.expect_near(half.triplet[1][1] - half.triplet[1][0], 4.0 * base.delta_ueV, 1e-12,
                "triplet splitting 4 delta at half flux");

  std::vector<double> shifted;
  for (double f : grid) shifted.push_back(f + 0.5);
  const auto table2 = model::spectrum_vs_flux(base, shifted);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(table[i].singlet_minus - table2[i].triplet[1][0]));
    worst = std::max(worst, std::abs(table[i].singlet_plus - table2[i].triplet[1][1]));
  }
  c.expect(worst < 1e-12, "channel-swap symmetry across the grid (dev " +
                              std::to_string(worst) + ")");
}

// 8. Zeeman scale for |g| = 0.44 at 1 T.
void criterion_zeeman(Check& c) {
  model::MaterialParams m;
  m.g_factor = 0.44;
  const double e = model::zeeman_energy(m, 1.0);
  c.expect_near(e, 25.47, 0.005, "E_B(1 T, g = 0.44)");
  c.expect(std::abs(e - 25.0) / 25.0 < 0.03, "within 3% of 'about 25 ueV'");
}

// 9. Desk-scale exact diagonalisation at L/a = 10, cutoff 12.
void criterion_ed(Check& c) {
  const double l_over_a = 10.0;
  const int order = 64;
  const int k = 6;

  // (e) variational monotonicity over the cutoff sweep, both sectors
  std::vector<double> prev_singlet, prev_triplet;
  ed::SpectrumResult singlets, triplets;
  for (int cutoff : {8, 10, 12}) {
    const auto tensor = ed::CoulombTensor::build(cutoff, order);
    ed::EDConfig cfg;
    cfg.L_over_a = l_over_a;
    cfg.sp_cutoff = cutoff;
    cfg.quadrature_order = order;

    cfg.channel = model::SpinKind::Singlet;
    const auto rs = ed::solve_lowest(ed::build_h(cfg, tensor), k);
    cfg.channel = model::SpinKind::Triplet;
    const auto rt = ed::solve_lowest(ed::build_h(cfg, tensor), k);

    c.expect(rs.max_residual < 1e-8, "singlet residuals at cutoff " + std::to_string(cutoff));
    c.expect(rt.max_residual < 1e-8, "triplet residuals at cutoff " + std::to_string(cutoff));

    if (!prev_singlet.empty()) {
      for (int i = 0; i < k; ++i) {
        c.expect(rs.energies_eh[i] <= prev_singlet[i] + 1e-10,
                 "singlet level " + std::to_string(i) + " monotone at cutoff " +
                     std::to_string(cutoff));
        c.expect(rt.energies_eh[i] <= prev_triplet[i] + 1e-10,
                 "triplet level " + std::to_string(i) + " monotone at cutoff " +
                     std::to_string(cutoff));
      }
    }
    prev_singlet = rs.energies_eh;
    prev_triplet = rt.energies_eh;
    if (cutoff == 12) {
      singlets = rs;
      triplets = rt;
    }
  }

  // (a) singlet ground state at B = 0
  c.expect(singlets.energies_eh[0] < triplets.energies_eh[0],
           "singlet ground below triplet ground");

  // (b) lowest four states: 2 singlet-sector + 2 triplet-sector, midway ratio
  std::vector<std::pair<double, int>> combined;  // (energy, sector 0/1)
  for (int i = 0; i < k; ++i) {
    combined.emplace_back(singlets.energies_eh[i], 0);
    combined.emplace_back(triplets.energies_eh[i], 1);
  }
  std::sort(combined.begin(), combined.end());
  const int n_singlet_low4 = (combined[0].second == 0) + (combined[1].second == 0) +
                             (combined[2].second == 0) + (combined[3].second == 0);
  c.expect(n_singlet_low4 == 2, "lowest four = 2 singlet-sector + 2 triplet-sector");

  const auto extraction = ed::extract_delta(singlets, triplets);
  c.expect(std::abs(extraction.midway_ratio) < 0.15,
           "midway ratio |r| < 0.15 (got " + std::to_string(extraction.midway_ratio) + ")");
  c.expect(extraction.delta_eh > 0.0, "positive extracted Delta");

  // (c) isolation: gap to the 5th state > 2x the ground-manifold spread
  const double spread = combined[3].first - combined[0].first;
  const double gap = combined[4].first - combined[3].first;
  c.expect(gap > 2.0 * spread, "gap to 5th state > 2x manifold spread (gap " +
                                   std::to_string(gap) + ", spread " +
                                   std::to_string(spread) + ")");

  // (d) corner-quadrant density peaks, centre below 25% of the peak
  ed::EDConfig dcfg;
  dcfg.L_over_a = l_over_a;
  dcfg.sp_cutoff = 12;
  dcfg.quadrature_order = order;
  const int grid_n = 801;
  const auto density = ed::charge_density(dcfg, singlets.vectors.col(0), grid_n);
  c.expect(std::abs(density.integral_grid - 2.0) < 1e-6,
           "density integrates to 2 electrons (got " +
               std::to_string(density.integral_grid) + ")");

  const int half = grid_n / 2;
  auto quadrant_max = [&](int row0, int col0) {
    double m = 0.0;
    for (int a = row0; a < row0 + half; ++a)
      for (int b = col0; b < col0 + half; ++b) m = std::max(m, density.rho(a, b));
    return m;
  };
  const double peak = std::max({quadrant_max(0, 0), quadrant_max(0, half + 1),
                                quadrant_max(half + 1, 0), quadrant_max(half + 1, half + 1)});
  const double centre = density.rho(half, half);
  c.expect(peak == density.rho.maxCoeff(), "global maxima sit in the corner quadrants");
  c.expect(centre < 0.25 * peak, "centre density below 25% of the peak (centre " +
                                     std::to_string(centre) + ", peak " +
                                     std::to_string(peak) + ")");
}

// 10. Oracle equivalence: propagator vs integrator, concurrence vs spin flip.
void criterion_oracles(Check& c) {
  std::mt19937_64 rng(0xACCE57);
  double max_amp_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Matrix2d m = test::random_two_level(rng);
    const model::TwoLevelH h{m(0, 0), m(1, 1), m(0, 1)};
    std::uniform_real_distribution<double> tdist(0.0, 3.0 * hbar);
    const double t = tdist(rng);
    const QState start = QState::from_amplitudes(1, test::random_state(2, rng));
    const QState closed = dynamics::evolve_two_level(start, h, t);
    const Eigen::VectorXcd ref = test::integrate_schrodinger(m, start.amps, t);
    max_amp_err = std::max(max_amp_err, (closed.amps - ref).cwiseAbs().maxCoeff());
  }
  c.expect(max_amp_err < 1e-8, "closed form vs step-doubling integrator (err " +
                                   std::to_string(max_amp_err) + ")");

  double max_conc_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXcd psi = test::random_state(4, rng);
    const double a = entangle::concurrence_pure(QState::from_amplitudes(2, psi));
    const double b = test::wootters_concurrence(psi);
    max_conc_err = std::max(max_conc_err, std::abs(a - b));
  }
  c.expect(max_conc_err < 1e-10, "concurrence vs spin-flip oracle (err " +
                                     std::to_string(max_conc_err) + ")");
}

struct Criterion {
  int number;
  const char* name;
  std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc - 1; ++i)
    if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);

  const std::vector<Criterion> criteria = {
      {1, "gate timing", criterion_gate_timing},
      {2, "root swap concurrence", criterion_root_swap},
      {3, "detuned suppression", criterion_detuned},
      {4, "entanglement preservation", criterion_preservation},
      {5, "exact cancellation", criterion_cancellation},
      {6, "coupling decay", criterion_coupling},
      {7, "flux switching", criterion_flux},
      {8, "zeeman scale", criterion_zeeman},
      {9, "exact diagonalisation desk scale", criterion_ed},
      {10, "oracle equivalence", criterion_oracles},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.number != only) continue;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (check.failures.empty()) {
      std::printf("[%2d/10] PASS  %-36s (%.2f s)\n", criterion.number, criterion.name,
                  seconds);
    } else {
      ++failures;
      std::printf("[%2d/10] FAIL  %-36s (%.2f s)\n", criterion.number, criterion.name,
                  seconds);
      for (const auto& f : check.failures) std::printf("        - %s\n", f.c_str());
    }
    std::fflush(stdout);
  }

  if (failures == 0) {
    std::printf("ACCEPTANCE: all criteria passed\n");
    return 0;
  }
  std::printf("ACCEPTANCE: %d criterion(s) failed\n", failures);
  return 1;
}
