#include "qdot/dynamics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qdot/constants.hpp"

namespace qdot::dynamics {

using std::complex;
constexpr complex<double> kI{0.0, 1.0};

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::string basis_label(std::size_t index, int n_qubits) {
  std::string s(n_qubits, '0');
  for (int i = 0; i < n_qubits; ++i)
    if ((index >> (n_qubits - 1 - i)) & 1u) s[i] = '1';
  return s;
}

}  // namespace

QState QState::computational(int n_qubits, std::size_t basis_index) {
  require(n_qubits >= 1 && n_qubits <= 24, "QState: unsupported qubit count");
  const std::size_t dim = std::size_t{1} << n_qubits;
  require(basis_index < dim, "QState: basis index out of range");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(dim);
  a(basis_index) = 1.0;
  return {n_qubits, std::move(a)};
}

QState QState::from_amplitudes(int n_qubits, Eigen::VectorXcd amplitudes) {
  require(n_qubits >= 1, "QState: need at least one qubit");
  const std::size_t dim = std::size_t{1} << n_qubits;
  require(static_cast<std::size_t>(amplitudes.size()) == dim,
          "QState: amplitude vector length must be 2^n");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("QState: amplitudes are not normalised");
  return {n_qubits, std::move(amplitudes)};
}

double QState::population(std::size_t basis_index) const {
  return std::norm(amps(basis_index));
}

QState evolve_two_level(const QState& s, const model::TwoLevelH& h, double t_ps) {
  require(s.n_qubits == 1, "evolve_two_level: one-qubit state expected");
  require(t_ps >= 0.0, "evolve_two_level: negative duration");

  // H = ebar I + n.sigma with n = (gamma, 0, -eps) in the |0>,|1> ordering
  const auto ps = model::pseudo_spin(h);
  const double omega = std::hypot(ps.eps, ps.gamma);
  const double phase_mean = ps.ebar * t_ps / constants::hbar_ueV_ps;
  const double angle = omega * t_ps / constants::hbar_ueV_ps;

  Eigen::Matrix2cd u;
  if (omega == 0.0) {
    u = Eigen::Matrix2cd::Identity();
  } else {
    const double c = std::cos(angle);
    const complex<double> s_over = -kI * std::sin(angle) / omega;
    u(0, 0) = c + s_over * (-ps.eps);
    u(1, 1) = c + s_over * (ps.eps);
    u(0, 1) = s_over * ps.gamma;
    u(1, 0) = s_over * ps.gamma;
  }
  u *= std::exp(-kI * phase_mean);

  QState out = s;
  out.amps = u * s.amps;
  return out;
}

Propagator::Propagator(const Eigen::MatrixXd& h_ueV) {
  require(h_ueV.rows() == h_ueV.cols(), "Propagator: square matrix expected");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_ueV);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Propagator: eigendecomposition failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

QState Propagator::apply(const QState& s, double t_ps) const {
  require(static_cast<Eigen::Index>(s.dim()) == evals_.size(),
          "Propagator: dimension mismatch");
  Eigen::VectorXcd coeffs = evecs_.transpose() * s.amps;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k)
    coeffs(k) *= std::exp(-kI * (evals_(k) * t_ps / constants::hbar_ueV_ps));
  QState out = s;
  out.amps = evecs_ * coeffs;
  return out;
}

QState evolve_nqubit(const QState& s, const Eigen::MatrixXd& h_ueV, double t_ps) {
  if (static_cast<Eigen::Index>(s.dim()) != h_ueV.rows())
    throw std::invalid_argument("evolve_nqubit: state/Hamiltonian dimension mismatch");
  return Propagator(h_ueV).apply(s, t_ps);
}

QState run_schedule(const QState& s, const GateSchedule& schedule) {
  QState state = s;
  for (const auto& seg : schedule.segments) {
    if (seg.duration_ps == 0.0) continue;
    if (state.dim() == 2 && seg.h_ueV.rows() == 2) {
      model::TwoLevelH h{seg.h_ueV(0, 0), seg.h_ueV(1, 1), seg.h_ueV(0, 1)};
      state = evolve_two_level(state, h, seg.duration_ps);
    } else {
      state = evolve_nqubit(state, seg.h_ueV, seg.duration_ps);
    }
  }
  return state;
}

GateSchedule synthesize_rotation(double theta_rad, double phase_rad,
                                 double delta_ueV, double gate_energy_ueV) {
  require(delta_ueV > 0.0, "synthesize_rotation: delta must be > 0");
  require(gate_energy_ueV != 0.0, "synthesize_rotation: gate_energy must be nonzero");

  constexpr double tau = 2.0 * std::numbers::pi;
  double theta = theta_rad;
  if (theta > -1e-12 && theta < 0.0) theta = 0.0;
  if (theta < 0.0 || theta > 0.5 * std::numbers::pi + 1e-12)
    throw std::domain_error(
        "synthesize_rotation: theta outside [0, pi/2]; the two-segment scheme "
        "reaches only polar angles up to pi/2 from |0>");
  theta = std::min(theta, 0.5 * std::numbers::pi);

  // A negative gate energy advances the phase in the opposite sense; fold it
  // into the phase so the stored segment always has E1 - E0 = |gate_energy|.
  double phase = phase_rad;
  double gate_energy = gate_energy_ueV;
  if (gate_energy < 0.0) {
    gate_energy = -gate_energy;
    phase = -phase;
  }
  phase = std::fmod(phase, tau);
  if (phase < 0.0) phase += tau;

  GateSchedule sched;
  Eigen::Matrix2d h1;
  h1 << 0.0, 2.0 * delta_ueV, 2.0 * delta_ueV, 0.0;
  sched.segments.push_back(
      {theta * constants::hbar_ueV_ps / (2.0 * delta_ueV), h1});

  Eigen::Matrix2d h2;
  h2 << 0.0, 0.0, 0.0, gate_energy;
  sched.segments.push_back({phase * constants::hbar_ueV_ps / gate_energy, h2});
  return sched;
}

GroundState initialize_ground(const Eigen::MatrixXd& h_ueV) {
  require(h_ueV.rows() == h_ueV.cols() && h_ueV.rows() >= 2,
          "initialize_ground: square matrix of dim >= 2 expected");
  const auto dim = h_ueV.rows();
  int n_qubits = 0;
  while ((Eigen::Index{1} << n_qubits) < dim) ++n_qubits;
  require((Eigen::Index{1} << n_qubits) == dim, "initialize_ground: dimension must be 2^n");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_ueV);
  const Eigen::VectorXd& e = es.eigenvalues();

  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;
  int multiplicity = 1;
  while (multiplicity < dim && e(multiplicity) - e(0) <= tol) ++multiplicity;

  GroundState out;
  out.gap_ueV = (dim > multiplicity) ? e(multiplicity) - e(0) : 0.0;
  out.degenerate = multiplicity > 1;

  Eigen::VectorXd v = es.eigenvectors().col(0);
  if (out.degenerate) {
    // lowest-index basis vector with nonzero weight in the ground space,
    // projected into it
    const auto block = es.eigenvectors().leftCols(multiplicity);
    for (Eigen::Index i = 0; i < dim; ++i) {
      Eigen::VectorXd proj = block * block.row(i).transpose();
      if (proj.norm() > 1e-8) {
        v = proj / proj.norm();
        break;
      }
    }
  }
  out.state = QState{n_qubits, v.cast<std::complex<double>>()};
  return out;
}

QState prepare_plus_minus(double delta_a_ueV, double delta_b_ueV) {
  require(delta_a_ueV > 0.0 && delta_b_ueV > 0.0,
          "prepare_plus_minus: tunnelling energies must be > 0");
  Eigen::VectorXcd a(4);
  a << 0.5, -0.5, 0.5, -0.5;
  return {2, std::move(a)};
}

std::map<std::string, std::uint64_t> measure_computational(const QState& s,
                                                           std::uint64_t shots,
                                                           std::uint64_t seed) {
  require(shots >= 1, "measure_computational: shots must be >= 1");
  const std::size_t dim = s.dim();

  Eigen::VectorXd probs(dim);
  for (std::size_t i = 0; i < dim; ++i) probs(i) = s.population(i);
  probs /= probs.sum();

  std::mt19937_64 rng(seed);
  auto next_uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  std::vector<std::uint64_t> counts(dim, 0);
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    const double u = next_uniform();
    double acc = 0.0;
    std::size_t outcome = dim - 1;
    for (std::size_t i = 0; i < dim; ++i) {
      acc += probs(i);
      if (u < acc) {
        outcome = i;
        break;
      }
    }
    ++counts[outcome];
  }

  std::map<std::string, std::uint64_t> histogram;
  for (std::size_t i = 0; i < dim; ++i)
    if (counts[i] > 0) histogram[basis_label(i, s.n_qubits)] = counts[i];
  return histogram;
}

double fidelity(const QState& a, const QState& b) {
  require(a.dim() == b.dim(), "fidelity: dimension mismatch");
  return std::norm(a.amps.dot(b.amps));
}

}  // namespace qdot::dynamics
