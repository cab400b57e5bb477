#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qdot::model {

// Bulk material constants. Defaults are the usual GaAs numbers; they are
// configuration, not fitted values.
struct MaterialParams {
  double effective_mass_ratio = 0.067;  // m*/m_e
  double relative_permittivity = 12.9;  // eps_r
  double g_factor = -0.44;              // signed

  void validate() const;
};

struct DotGeometry {
  double side_length_nm = 0.0;
  double effective_area_nm2 = 0.0;              // <= L^2, flux area
  std::array<double, 4> corner_bias_ueV{};      // e*V_i, clockwise from top-left

  void validate() const;
};

// Parameter set of the four-corner effective Hamiltonian: zero-field corner
// energies, tunnelling energy, Peierls phase and Zeeman energy.
struct EffectiveParams {
  std::array<double, 4> eps0_ueV{};  // eps_i(0), clockwise from top-left
  double delta_ueV = 0.0;            // tunnelling Delta >= 0
  double phi_rad = 0.0;              // Peierls phase
  double zeeman_ueV = 0.0;           // E_B = g mu_B B

  void validate() const;
};

enum class SpinKind { Singlet, Triplet };

struct SpinChannel {
  SpinKind kind = SpinKind::Singlet;
  int sz = 0;  // meaningful for triplets only, in {-1, 0, +1}

  static SpinChannel singlet() { return {SpinKind::Singlet, 0}; }
  static SpinChannel triplet(int sz);
};

// One spin channel reduced to the 2x2 matrix [[e0, gamma], [gamma, e1]].
struct TwoLevelH {
  double e0 = 0.0;
  double e1 = 0.0;
  double gamma = 0.0;

  Eigen::Matrix2d matrix() const;
};

// Pseudo-spin decomposition H = ebar*I + eps*sigma_z + gamma*sigma_x, with the
// convention that |0> carries sigma_z = -1 so that eps = (e1 - e0)/2.
struct PseudoSpin {
  double ebar = 0.0;
  double eps = 0.0;
  double gamma = 0.0;

  TwoLevelH reconstruct() const { return {ebar - eps, ebar + eps, gamma}; }
};

// Peierls phase from the flux through the dot: phi = (pi/2) * Phi/Phi0.
double flux_phase(double flux_quanta);

// Phi/Phi0 for a perpendicular field B through the effective area.
double flux_quanta_from_field(double b_tesla, double area_nm2);

// E_B = g mu_B B in ueV.
double zeeman_energy(const MaterialParams& material, double b_tesla);

// eps_i(0) = -e V_i: a positive corner bias lowers the site energy.
std::array<double, 4> site_energies_from_bias(const DotGeometry& geometry);

// 2x2 channel Hamiltonian: e0 = eps1+eps3, e1 = eps2+eps4 (clockwise diagonal
// pairs), gamma = 2 Delta cos(2 phi) for singlets and 2 Delta sin(2 phi) for
// triplets. Triplets with sz != 0 get a uniform sz*E_B shift on both diagonal
// entries.
TwoLevelH build_channel_h(const EffectiveParams& params, SpinChannel channel);

// Closed-form eigenvalues (E_minus <= E_plus).
std::pair<double, double> eigenenergies(const TwoLevelH& h);

PseudoSpin pseudo_spin(const TwoLevelH& h);

// One flux point of the eight-level spectrum: both singlet branches plus both
// triplet branches for each Zeeman sub-level.
struct FluxSpectrumRow {
  double flux_quanta = 0.0;
  double singlet_minus = 0.0;
  double singlet_plus = 0.0;
  // indexed by sz + 1, i.e. triplet[0] is sz = -1
  std::array<std::array<double, 2>, 3> triplet{};
};

// Sweeps the effective-model spectrum over a flux grid. Both the Peierls phase
// and the Zeeman energy scale with the applied field, so base.zeeman_ueV is
// interpreted as E_B *per flux quantum*: E_B(f) = f * base.zeeman_ueV.
// base.phi_rad is ignored, and diamagnetic_coeff_ueV adds a phenomenological
// uniform rise coeff * f^2 to every level.
std::vector<FluxSpectrumRow> spectrum_vs_flux(const EffectiveParams& base,
                                              std::span<const double> flux_grid,
                                              double diamagnetic_coeff_ueV = 0.0);

}  // namespace qdot::model
