#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdot/dynamics.hpp"

namespace qdot::entangle {

// Orthonormal single-qubit basis pair used in the concurrence projection.
struct LocalBasis {
  Eigen::Vector2cd a;
  Eigen::Vector2cd b;

  static LocalBasis computational();
  static LocalBasis plus_minus();
  void validate() const;
};

// Concurrence/transfer-probability samples of one protocol run. `concurrence`
// always holds the full-evolution result; `closed_form` holds the matching
// analytic curve when one exists.
struct ProtocolTrace {
  std::vector<double> times_ps;
  std::vector<double> concurrence;
  std::vector<double> transfer_prob;
  std::vector<double> closed_form;
  std::string label;
  std::string note;
};

// Pure-state two-qubit concurrence c = 2 |<aa|psi><bb|psi> - <ab|psi><ba|psi>|,
// identical for every orthonormal basis choice.
double concurrence_pure(const dynamics::QState& s,
                        const LocalBasis& basis = LocalBasis::computational());

// Uniform grid helper: `points` samples from 0 to t_max inclusive.
std::vector<double> time_grid(double t_max_ps, int points);

// Free evolution of |+,-> under the coupled two-dot Hamiltonian; concurrence
// is |sin(2 v t / hbar)| and reaches 1 at t = pi hbar / (4 v).
ProtocolTrace root_swap_trace(double v_ueV, std::span<const double> t_grid_ps);

// Evolution from a computational product state |b1 b2> with per-dot tunnelling
// (gamma on both dots unless gamma_b overrides the second). transfer_prob is
// the population of the doubly-flipped partner state.
ProtocolTrace computational_start_trace(double v_ueV, double gamma_ueV,
                                        const std::string& start,
                                        std::span<const double> t_grid_ps,
                                        std::optional<double> gamma_b_ueV = {});

// |+,-> evolved with the tunnelling zeroed on the second dot. Closed forms:
// transfer sin^2(2 theta) sin^2(eps t/hbar) and
// c = 2 |sin(2 theta) sin(eps t/hbar)| sqrt(1 - sin^2(2 theta) sin^2(eps t/hbar))
// with eps = sqrt(gamma^2 + v^2), sin(2 theta) = v/eps.
ProtocolTrace detuned_trace(double gamma_ueV, double v_ueV,
                            std::span<const double> t_grid_ps);

// ROOT-SWAP evolution up to t* = pi hbar/(4v), then the tunnelling is switched
// off on one dot and the entangled state is held. The full evolution is
// authoritative; the emitted closed form is
// sqrt(1 - sin^2(2 theta) sin^2(2 eps (t - t*)/hbar)) for t >= t*.
ProtocolTrace preservation_trace(double gamma_ueV, double v_ueV,
                                 std::span<const double> t_grid_ps);

}  // namespace qdot::entangle
