#include "qdot/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "qdot/constants.hpp"

namespace qdot::coupling {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_neighbor(int n, const ArrayGeometry& g) {
  g.validate();
  require(n >= 1, "coupling: neighbour order must be >= 1");
  if (n * g.spacing_nm <= g.side_nm)
    throw std::domain_error("coupling: geometry requires n*d > L");
}

// e^2/(4 pi eps) in ueV nm for the array's permittivity
double coulomb_scale(const ArrayGeometry& g) {
  return qdot::constants::coulomb_ueV_nm / g.permittivity;
}

}  // namespace

void ArrayGeometry::validate() const {
  require(n_dots >= 1, "ArrayGeometry: n_dots must be >= 1");
  require(side_nm > 0.0, "ArrayGeometry: side_nm must be > 0");
  require(spacing_nm > side_nm, "ArrayGeometry: spacing_nm must exceed side_nm");
  require(image_distance_nm >= 0.0, "ArrayGeometry: image_distance_nm must be >= 0");
  require(permittivity >= 1.0, "ArrayGeometry: permittivity must be >= 1");
}

double v_exact(int n, const ArrayGeometry& g) {
  check_neighbor(n, g);
  const long double r = n * static_cast<long double>(g.spacing_nm);
  const long double L = g.side_nm;

  // the six terms cancel to O((L/nd)^4); extended precision keeps the result
  // meaningful deep into the dipole regime
  const long double six_terms =
      1.0L / (r - L) + 2.0L / std::sqrt(r * r + L * L) + 1.0L / (r + L) -
      2.0L / r - 1.0L / std::sqrt((r - L) * (r - L) + L * L) -
      1.0L / std::sqrt((r + L) * (r + L) + L * L);
  return 0.5 * coulomb_scale(g) * static_cast<double>(six_terms);
}

double v_dipole(int n, const ArrayGeometry& g) {
  check_neighbor(n, g);
  const double r = n * g.spacing_nm;
  const double x = g.side_nm / r;
  return 3.0 * coulomb_scale(g) / r * x * x * x * x;
}

double v_screened(int n, const ArrayGeometry& g) {
  check_neighbor(n, g);
  require(g.image_distance_nm >= 0.0, "v_screened: image distance must be >= 0");
  const double r = n * g.spacing_nm;
  const double x = g.side_nm / r;
  const double y = g.image_distance_nm / r;
  return 10.0 * coulomb_scale(g) / g.spacing_nm * y * y * x * x * x * x;
}

CouplingMatrix coupling_matrix(const ArrayGeometry& g, CouplingModel model) {
  g.validate();
  auto v_of = [&](int n) {
    switch (model) {
      case CouplingModel::Exact: return v_exact(n, g);
      case CouplingModel::Dipole: return v_dipole(n, g);
      case CouplingModel::Screened: return v_screened(n, g);
    }
    throw std::logic_error("coupling_matrix: unknown model");
  };

  CouplingMatrix out;
  out.v_ueV = Eigen::MatrixXd::Zero(g.n_dots, g.n_dots);
  for (int i = 0; i < g.n_dots; ++i)
    for (int j = i + 1; j < g.n_dots; ++j) {
      const double v = v_of(j - i);
      out.v_ueV(i, j) = v;
      out.v_ueV(j, i) = v;
    }
  return out;
}

Eigen::MatrixXd build_array_h(std::span<const double> eps_ueV,
                              std::span<const double> gammas_ueV,
                              const CouplingMatrix& vm, int n_cap) {
  const int n = static_cast<int>(eps_ueV.size());
  require(n >= 1, "build_array_h: need at least one dot");
  require(static_cast<int>(gammas_ueV.size()) == n, "build_array_h: eps/gamma size mismatch");
  require(vm.size() == n, "build_array_h: coupling matrix size mismatch");
  if (n > n_cap) throw std::length_error("build_array_h: qubit count exceeds cap");

  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

  // bit of qubit i in basis index s; qubit 0 is the most significant bit
  auto z_of = [n](std::size_t s, int i) {
    return ((s >> (n - 1 - i)) & 1u) ? 1.0 : -1.0;
  };

  for (std::size_t s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      const double zi = z_of(s, i);
      diag += eps_ueV[i] * zi;
      for (int j = i + 1; j < n; ++j) diag -= vm.v_ueV(i, j) * zi * z_of(s, j);
    }
    h(s, s) = diag;
    // sigma_x terms flip exactly one bit
    for (int i = 0; i < n; ++i) {
      const std::size_t flipped = s ^ (std::size_t{1} << (n - 1 - i));
      h(s, flipped) += gammas_ueV[i];
    }
  }
  return h;
}

Eigen::Matrix4d two_qubit_energy_basis(double gamma1_ueV, double gamma2_ueV,
                                       double v_ueV) {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 0) = -gamma1_ueV - gamma2_ueV;
  h(1, 1) = -gamma1_ueV + gamma2_ueV;
  h(2, 2) = gamma1_ueV - gamma2_ueV;
  h(3, 3) = gamma1_ueV + gamma2_ueV;
  h(0, 3) = h(3, 0) = -v_ueV;
  h(1, 2) = h(2, 1) = -v_ueV;
  return h;
}

}  // namespace qdot::coupling
