#pragma once

#include <span>

#include <Eigen/Dense>

namespace qdot::coupling {

// Linear array of identical square dots. Lengths in nm; spacing is
// centre-to-centre between adjacent dots and must exceed the dot side.
struct ArrayGeometry {
  int n_dots = 1;
  double spacing_nm = 0.0;         // d
  double side_nm = 0.0;            // L
  double image_distance_nm = 0.0;  // delta, electron-to-image distance
  double permittivity = 1.0;       // relative

  void validate() const;
};

enum class CouplingModel { Exact, Dipole, Screened };

// Symmetric inter-dot sigma_z sigma_z strengths, zero diagonal, ueV.
struct CouplingMatrix {
  Eigen::MatrixXd v_ueV;

  int size() const { return static_cast<int>(v_ueV.rows()); }
};

// Unscreened six-term corner-charge coupling between n-th neighbours,
// prefactor e^2/(8 pi eps).
double v_exact(int n, const ArrayGeometry& g);

// Lowest-order expansion in L/nd: 3e^2/(4 pi eps nd) * (L/nd)^4.
double v_dipole(int n, const ArrayGeometry& g);

// Image-charge screened estimate 5e^2/(2 pi eps d) * (delta/nd)^2 (L/nd)^4,
// which decays as n^-6. The 1/d normalisation fixes the dimensions of the
// printed estimate without touching its n, delta or L scalings.
double v_screened(int n, const ArrayGeometry& g);

CouplingMatrix coupling_matrix(const ArrayGeometry& g, CouplingModel model);

// N-dot pseudo-spin Hamiltonian
//   H = sum_i [eps_i sigma_iz + gamma_i sigma_ix] - sum_{i<j} v_ij sigma_iz sigma_jz
// as a dense real-symmetric 2^N x 2^N matrix in the computational basis.
// Qubit 0 is the most significant bit and |0> carries sigma_z = -1 (the
// pseudo-spin convention of the single-dot model). N above the cap throws.
Eigen::MatrixXd build_array_h(std::span<const double> eps_ueV,
                              std::span<const double> gammas_ueV,
                              const CouplingMatrix& vm, int n_cap = 12);

// Two-dot Hamiltonian in the per-dot energy basis |-,->, |-,+>, |+,->, |+,+>
// (ascending single-cell energy, |+/-> = (|0> +/- |1>)/sqrt(2) with energies
// +/-gamma): diagonal (-g1-g2, -g1+g2, g1-g2, g1+g2) and -v on the
// anti-diagonal.
Eigen::Matrix4d two_qubit_energy_basis(double gamma1_ueV, double gamma2_ueV,
                                       double v_ueV);

}  // namespace qdot::coupling
