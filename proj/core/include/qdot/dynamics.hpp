#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdot/core_model.hpp"

namespace qdot::dynamics {

// Normalised pseudo-spin register state over the 2^n computational basis.
// Qubit 0 is the most significant bit of the basis index.
struct QState {
  int n_qubits = 1;
  Eigen::VectorXcd amps;

  static QState computational(int n_qubits, std::size_t basis_index);
  static QState from_amplitudes(int n_qubits, Eigen::VectorXcd amplitudes);

  std::size_t dim() const { return static_cast<std::size_t>(amps.size()); }
  double norm() const { return amps.norm(); }
  // |<basis_index|psi>|^2
  double population(std::size_t basis_index) const;
};

struct ScheduleSegment {
  double duration_ps = 0.0;
  Eigen::MatrixXd h_ueV;  // real symmetric, dimension matching the state
};

struct GateSchedule {
  std::vector<ScheduleSegment> segments;
};

// Exact 2x2 unitary exp(-i H t / hbar) applied to a one-qubit state.
QState evolve_two_level(const QState& s, const model::TwoLevelH& h, double t_ps);

// Unitary propagation of an n-qubit state via eigendecomposition of a dense
// real-symmetric Hamiltonian. Piecewise-constant segments make this exact.
QState evolve_nqubit(const QState& s, const Eigen::MatrixXd& h_ueV, double t_ps);

// Cached eigendecomposition for repeated propagation under the same H.
class Propagator {
 public:
  explicit Propagator(const Eigen::MatrixXd& h_ueV);
  QState apply(const QState& s, double t_ps) const;
  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const Eigen::MatrixXd& eigenvectors() const { return evecs_; }

 private:
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
};

QState run_schedule(const QState& s, const GateSchedule& schedule);

// Two-segment synthesis of cos(theta)|0> + e^{i phase'}sin(theta)|1>:
// a symmetric segment (gamma = 2 Delta) for t1 = theta hbar / (2 Delta),
// then a half-flux-quantum segment (gamma = 0, E1 - E0 = gate_energy) for
// t2 = phase hbar / gate_energy. With the e^{-iHt} propagation used here the
// action on |0> is cos(theta)|0> - i e^{-i phase} sin(theta)|1>.
// theta outside [0, pi/2] after normalisation is rejected.
GateSchedule synthesize_rotation(double theta_rad, double phase_rad,
                                 double delta_ueV, double gate_energy_ueV);

struct GroundState {
  QState state;
  bool degenerate = false;
  double gap_ueV = 0.0;  // E1 - E0
};

// Ground eigenvector of a dense real-symmetric Hamiltonian. A degenerate
// ground space is flagged and the member aligned with the lowest-index basis
// vector is returned.
GroundState initialize_ground(const Eigen::MatrixXd& h_ueV);

// |+,-> = (|0>+|1>)/sqrt(2) x (|0>-|1>)/sqrt(2) in the computational basis.
// The tunnelling energies select the +/- eigenstates on each dot and must be
// positive; they do not enter the amplitudes.
QState prepare_plus_minus(double delta_a_ueV, double delta_b_ueV);

// Multinomial sampling of computational-basis outcomes. The generator is
// std::mt19937_64 seeded verbatim with `seed`; uniforms are produced as
// (x >> 11) * 2^-53, so counts are reproducible across platforms.
std::map<std::string, std::uint64_t> measure_computational(const QState& s,
                                                           std::uint64_t shots,
                                                           std::uint64_t seed);

// |<a|b>|^2, insensitive to global phase.
double fidelity(const QState& a, const QState& b);

}  // namespace qdot::dynamics
