#include "qdot/entanglement.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qdot/constants.hpp"
#include "qdot/coupling.hpp"

namespace qdot::entangle {

using dynamics::Propagator;
using dynamics::QState;
using std::complex;

namespace {

constexpr double kHbar = qdot::constants::hbar_ueV_ps;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_agreement(const ProtocolTrace& trace, double tol, const char* what) {
  for (std::size_t i = 0; i < trace.times_ps.size(); ++i)
    if (std::abs(trace.concurrence[i] - trace.closed_form[i]) > tol)
      throw std::logic_error(std::string("trace cross-check failed: ") + what);
}

}  // namespace

LocalBasis LocalBasis::computational() {
  LocalBasis b;
  b.a << 1.0, 0.0;
  b.b << 0.0, 1.0;
  return b;
}

LocalBasis LocalBasis::plus_minus() {
  const double r = 1.0 / std::numbers::sqrt2;
  LocalBasis b;
  b.a << r, r;
  b.b << r, -r;
  return b;
}

void LocalBasis::validate() const {
  if (std::abs(a.norm() - 1.0) > 1e-10 || std::abs(b.norm() - 1.0) > 1e-10 ||
      std::abs(a.dot(b)) > 1e-10)
    throw std::invalid_argument("LocalBasis: basis pair is not orthonormal");
}

double concurrence_pure(const QState& s, const LocalBasis& basis) {
  require(s.n_qubits == 2, "concurrence_pure: two-qubit state expected");
  if (std::abs(s.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("concurrence_pure: state is not normalised");
  basis.validate();

  // <u,v|psi> over the four basis combinations
  auto proj = [&s](const Eigen::Vector2cd& u, const Eigen::Vector2cd& v) {
    complex<double> acc = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        acc += std::conj(u(i)) * std::conj(v(j)) * s.amps(2 * i + j);
    return acc;
  };

  const complex<double> det =
      proj(basis.a, basis.a) * proj(basis.b, basis.b) -
      proj(basis.a, basis.b) * proj(basis.b, basis.a);
  return std::min(2.0 * std::abs(det), 1.0);
}

std::vector<double> time_grid(double t_max_ps, int points) {
  require(t_max_ps > 0.0 && points >= 2, "time_grid: bad grid request");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = t_max_ps * static_cast<double>(i) / (points - 1);
  return grid;
}

ProtocolTrace root_swap_trace(double v_ueV, std::span<const double> t_grid_ps) {
  require(v_ueV > 0.0, "root_swap_trace: v must be > 0");

  // gamma drops out of the |+,->/|-,+> block; any common value gives the
  // same trace
  const Propagator prop(coupling::two_qubit_energy_basis(v_ueV, v_ueV, v_ueV));
  const QState start = QState::computational(2, 2);  // |+,->

  ProtocolTrace trace;
  trace.label = "rootswap";
  for (double t : t_grid_ps) {
    const QState psi = prop.apply(start, t);
    trace.times_ps.push_back(t);
    trace.concurrence.push_back(concurrence_pure(psi));
    trace.transfer_prob.push_back(psi.population(1));  // |-,+>
    trace.closed_form.push_back(std::abs(std::sin(2.0 * v_ueV * t / kHbar)));
  }
  check_agreement(trace, 1e-9, "rootswap vs |sin 2vt|");
  return trace;
}

ProtocolTrace computational_start_trace(double v_ueV, double gamma_ueV,
                                        const std::string& start,
                                        std::span<const double> t_grid_ps,
                                        std::optional<double> gamma_b_ueV) {
  require(v_ueV >= 0.0 && gamma_ueV >= 0.0, "computational_start_trace: negative energy");
  require(start.size() == 2 && (start[0] == '0' || start[0] == '1') &&
              (start[1] == '0' || start[1] == '1'),
          "computational_start_trace: start must be a 2-bit string");

  const double gamma_b = gamma_b_ueV.value_or(gamma_ueV);
  coupling::CouplingMatrix vm;
  vm.v_ueV = Eigen::MatrixXd::Zero(2, 2);
  vm.v_ueV(0, 1) = vm.v_ueV(1, 0) = v_ueV;
  const std::array<double, 2> eps{0.0, 0.0};
  const std::array<double, 2> gammas{gamma_ueV, gamma_b};
  const Propagator prop(coupling::build_array_h(eps, gammas, vm));

  const std::size_t index = static_cast<std::size_t>(start[0] - '0') * 2 +
                            static_cast<std::size_t>(start[1] - '0');
  const QState s0 = QState::computational(2, index);

  ProtocolTrace trace;
  trace.label = "computational:" + start;
  for (double t : t_grid_ps) {
    const QState psi = prop.apply(s0, t);
    trace.times_ps.push_back(t);
    trace.concurrence.push_back(concurrence_pure(psi));
    trace.transfer_prob.push_back(psi.population(index ^ 3u));
  }
  return trace;
}

ProtocolTrace detuned_trace(double gamma_ueV, double v_ueV,
                            std::span<const double> t_grid_ps) {
  require(gamma_ueV >= 0.0, "detuned_trace: gamma must be >= 0");
  require(v_ueV > 0.0, "detuned_trace: v must be > 0");

  const double eps = std::hypot(gamma_ueV, v_ueV);
  const double sin2t = v_ueV / eps;

  const Propagator prop(coupling::two_qubit_energy_basis(gamma_ueV, 0.0, v_ueV));
  const QState start = QState::computational(2, 2);  // |+,->

  ProtocolTrace trace;
  trace.label = "detuned";
  for (double t : t_grid_ps) {
    const QState psi = prop.apply(start, t);
    const double u = sin2t * std::sin(eps * t / kHbar);
    trace.times_ps.push_back(t);
    trace.concurrence.push_back(concurrence_pure(psi));
    trace.transfer_prob.push_back(psi.population(1));  // |-,+>
    trace.closed_form.push_back(2.0 * std::abs(u) * std::sqrt(std::max(0.0, 1.0 - u * u)));
  }
  check_agreement(trace, 1e-9, "detuned vs 2|sin2t sin(eps t)|sqrt(1-...)");

  // the printed probability in the source analysis carries cos^2(eps t); the
  // state itself gives sin^2, which is what the evolution reproduces
  trace.note = "transfer = sin^2(2theta) sin^2(eps t/hbar), state-derived form";
  for (std::size_t i = 0; i < trace.times_ps.size(); ++i) {
    const double u = sin2t * std::sin(eps * trace.times_ps[i] / kHbar);
    if (std::abs(trace.transfer_prob[i] - u * u) > 1e-9)
      throw std::logic_error("detuned_trace: transfer probability cross-check failed");
  }
  return trace;
}

ProtocolTrace preservation_trace(double gamma_ueV, double v_ueV,
                                 std::span<const double> t_grid_ps) {
  require(gamma_ueV >= 0.0, "preservation_trace: gamma must be >= 0");
  require(v_ueV > 0.0, "preservation_trace: v must be > 0");

  const double t_star = std::numbers::pi * kHbar / (4.0 * v_ueV);
  const double eps = std::hypot(gamma_ueV, v_ueV);
  const double sin2t = v_ueV / eps;

  const Propagator swap_prop(
      coupling::two_qubit_energy_basis(gamma_ueV, gamma_ueV, v_ueV));
  const Propagator hold_prop(
      coupling::two_qubit_energy_basis(gamma_ueV, 0.0, v_ueV));
  const QState start = QState::computational(2, 2);  // |+,->
  const QState at_switch = swap_prop.apply(start, t_star);

  ProtocolTrace trace;
  trace.label = "preserve";
  trace.note = "closed form uses frequency 2*eps after switch-off; full evolution authoritative";
  for (double t : t_grid_ps) {
    trace.times_ps.push_back(t);
    QState psi;
    double ref;
    if (t <= t_star) {
      psi = swap_prop.apply(start, t);
      ref = std::abs(std::sin(2.0 * v_ueV * t / kHbar));
    } else {
      psi = hold_prop.apply(at_switch, t - t_star);
      const double u = sin2t * std::sin(2.0 * eps * (t - t_star) / kHbar);
      ref = std::sqrt(std::max(0.0, 1.0 - u * u));
    }
    trace.concurrence.push_back(concurrence_pure(psi));
    trace.transfer_prob.push_back(psi.population(1));
    trace.closed_form.push_back(ref);
  }
  return trace;
}

}  // namespace qdot::entangle
