#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qdot/constants.hpp"
#include "qdot/coupling.hpp"
#include "qdot/dynamics.hpp"
#include "qdot/entanglement.hpp"
#include "support/test_random.hpp"
#include "support/wootters_oracle.hpp"

using namespace qdot;
using dynamics::QState;
using entangle::LocalBasis;

constexpr double pi = std::numbers::pi;
constexpr double hbar = constants::hbar_ueV_ps;

TEST_CASE("concurrence of reference states") {
  SUBCASE("product state |+,-> has zero concurrence") {
    CHECK(entangle::concurrence_pure(dynamics::prepare_plus_minus(1.0, 1.0)) ==
          doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("(|+,-> - i|-,+>)/sqrt(2) is fully entangled") {
    // amplitudes in the energy product basis; concurrence is basis independent
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
    amps(2) = 1.0 / std::numbers::sqrt2;
    amps(1) = std::complex<double>(0.0, -1.0) / std::numbers::sqrt2;
    CHECK(entangle::concurrence_pure(QState::from_amplitudes(2, amps)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("non-normalised input is rejected") {
    QState s = dynamics::prepare_plus_minus(1.0, 1.0);
    s.amps *= 0.7;
    CHECK_THROWS_AS(entangle::concurrence_pure(s), std::invalid_argument);
  }

  SUBCASE("non-orthonormal basis is rejected") {
    LocalBasis bad = LocalBasis::computational();
    bad.b = bad.a;
    CHECK_THROWS_AS(
        entangle::concurrence_pure(dynamics::prepare_plus_minus(1.0, 1.0), bad),
        std::invalid_argument);
  }
}

TEST_CASE("concurrence is basis independent and matches the spin-flip oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXcd psi = test::random_state(4, rng);
    const QState s = QState::from_amplitudes(2, psi);
    const double c_ref = entangle::concurrence_pure(s);

    // random orthonormal local basis
    const Eigen::Matrix2cd u = test::random_local_unitary(rng);
    LocalBasis basis;
    basis.a = u.col(0);
    basis.b = u.col(1);
    CHECK(std::abs(entangle::concurrence_pure(s, basis) - c_ref) < 1e-10);

    // Wootters spin-flip density-matrix oracle
    CHECK(std::abs(test::wootters_concurrence(psi) - c_ref) < 1e-10);
  }
}

TEST_CASE("root_swap_trace") {
  const double v = 0.5;
  const double period = pi * hbar / (2.0 * v);  // zeros of c at multiples of this/2

  const auto grid = entangle::time_grid(2.0 * pi * hbar / v, 2001);
  const auto trace = entangle::root_swap_trace(v, grid);

  SUBCASE("closed form |sin 2vt| matches the simulated concurrence") {
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(std::abs(trace.concurrence[i] -
                     std::abs(std::sin(2.0 * v * grid[i] / hbar))) < 1e-9);
  }

  SUBCASE("c = 1 at t = pi hbar / 4v and c = 0 at t = 0") {
    const auto single = entangle::root_swap_trace(
        v, std::vector<double>{0.0, pi * hbar / (4.0 * v)});
    CHECK(single.concurrence[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(single.concurrence[1] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("c = 1/sqrt(2) at half the maximal-entanglement time") {
    const auto single =
        entangle::root_swap_trace(v, std::vector<double>{pi * hbar / (8.0 * v)});
    CHECK(single.concurrence[0] ==
          doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-10));
  }

  SUBCASE("zeros at multiples of pi hbar / 2v") {
    for (int n = 0; n <= 3; ++n) {
      const auto single =
          entangle::root_swap_trace(v, std::vector<double>{n * period / 1.0});
      CHECK(std::abs(single.concurrence[0]) < 1e-9);
    }
  }
}

TEST_CASE("computational_start_trace") {
  const auto grid = entangle::time_grid(40.0 * hbar, 2001);

  SUBCASE("gamma = 0 on one dot cancels the entanglement exactly") {
    const auto trace =
        entangle::computational_start_trace(0.3, 1.0, "00", grid, 0.0);
    for (double c : trace.concurrence) CHECK(c < 1e-12);
  }

  SUBCASE("v = 0 keeps local rotations unentangled") {
    const auto trace = entangle::computational_start_trace(0.0, 1.0, "01", grid);
    for (double c : trace.concurrence) CHECK(c < 1e-10);
  }

  SUBCASE("v/gamma = 0.2 reaches near-full entanglement within one envelope") {
    const double gamma = 1.0, v = 0.2;
    const auto envelope_grid =
        entangle::time_grid(pi * hbar / v, 20001);  // one envelope period
    const auto trace =
        entangle::computational_start_trace(v, gamma, "00", envelope_grid);
    double cmax = 0.0;
    for (double c : trace.concurrence) cmax = std::max(cmax, c);
    CHECK(cmax >= 0.99);
  }
}

TEST_CASE("detuned_trace") {
  SUBCASE("closed form and evolution agree; max concurrence for v/gamma = 0.1") {
    const double gamma = 1.0, v = 0.1;
    const double eps = std::hypot(gamma, v);
    const auto grid = entangle::time_grid(2.0 * pi * hbar / eps, 4001);
    const auto trace = entangle::detuned_trace(gamma, v, grid);

    double cmax = 0.0, tmax = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      cmax = std::max(cmax, trace.concurrence[i]);
      tmax = std::max(tmax, trace.transfer_prob[i]);
    }
    // closed-form maximum 2 s sqrt(1-s^2), s = v/eps: 0.198022 for 0.1
    const double s = v / eps;
    CHECK(cmax == doctest::Approx(2.0 * s * std::sqrt(1.0 - s * s)).epsilon(1e-6));
    CHECK(cmax == doctest::Approx(0.198022).epsilon(1e-4));
    // max transfer = sin^2(2 theta) ~ (v/gamma)^2
    CHECK(tmax == doctest::Approx(s * s).epsilon(1e-6));
    CHECK(std::abs(tmax - 0.01) / 0.01 < 0.05);
  }

  SUBCASE("gamma = 0 degenerates to the root-swap behaviour") {
    const double v = 0.5;
    const auto grid = entangle::time_grid(pi * hbar / v, 501);
    const auto trace = entangle::detuned_trace(0.0, v, grid);
    double cmax = 0.0;
    for (double c : trace.concurrence) cmax = std::max(cmax, c);
    CHECK(cmax == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(std::abs(trace.concurrence[i] -
                     std::abs(std::sin(2.0 * v * grid[i] / hbar))) < 1e-9);
  }
}

TEST_CASE("preservation_trace") {
  SUBCASE("gamma = v keeps at least 1/sqrt(2)") {
    const double gamma = 1.0, v = 1.0;
    const double t_star = pi * hbar / (4.0 * v);
    const auto grid = entangle::time_grid(t_star + 4.0 * pi * hbar, 40001);
    const auto trace = entangle::preservation_trace(gamma, v, grid);

    double cmin = 2.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= t_star) cmin = std::min(cmin, trace.concurrence[i]);
    CHECK(cmin == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-5));

    // c = 1 exactly at the switch time
    const auto at_switch =
        entangle::preservation_trace(gamma, v, std::vector<double>{t_star});
    CHECK(at_switch.concurrence[0] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("small v/gamma preserves the entanglement to a percent") {
    const double gamma = 1.0, v = 0.1;
    const double t_star = pi * hbar / (4.0 * v);
    const auto grid = entangle::time_grid(t_star + 6.0 * pi * hbar, 20001);
    const auto trace = entangle::preservation_trace(gamma, v, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= t_star) CHECK(trace.concurrence[i] >= 0.98);
  }

  SUBCASE("full evolution matches the 2-eps closed form after switch-off") {
    const double gamma = 0.7, v = 0.35;
    const double t_star = pi * hbar / (4.0 * v);
    const auto grid = entangle::time_grid(t_star + 3.0 * pi * hbar, 5001);
    const auto trace = entangle::preservation_trace(gamma, v, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(std::abs(trace.concurrence[i] - trace.closed_form[i]) < 1e-9);
  }
}

TEST_CASE("trace invariants: bounds and qubit swap symmetry") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uni(0.05, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double gamma = uni(rng), v = uni(rng);
    const auto grid = entangle::time_grid(3.0 * pi * hbar / v, 301);
    for (const auto& trace :
         {entangle::root_swap_trace(v, grid), entangle::detuned_trace(gamma, v, grid),
          entangle::preservation_trace(gamma, v, grid)}) {
      for (double c : trace.concurrence) {
        CHECK(c >= 0.0);
        CHECK(c <= 1.0 + 1e-10);
      }
    }
  }

  // concurrence is symmetric under swapping the two qubits
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXcd psi = test::random_state(4, rng);
    Eigen::VectorXcd swapped(4);
    swapped << psi(0), psi(2), psi(1), psi(3);
    CHECK(std::abs(entangle::concurrence_pure(QState::from_amplitudes(2, psi)) -
                   entangle::concurrence_pure(QState::from_amplitudes(2, swapped))) <
          1e-12);
  }
}
