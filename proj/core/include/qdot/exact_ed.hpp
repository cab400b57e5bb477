#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qdot/core_model.hpp"

namespace qdot::ed {

// Two interacting electrons in a 2D hard-wall square box at zero field, in
// effective atomic units: lengths in the effective Bohr radius a, energies in
// the effective Hartree e^2/(4 pi eps a). The Hamiltonian then depends on the
// single ratio L/a (plus any corner bias).
struct EDConfig {
  double L_over_a = 10.0;
  int sp_cutoff = 8;                     // max quantum number per axis
  model::SpinKind channel = model::SpinKind::Singlet;
  int quadrature_order = 64;             // Gauss-Legendre points per axis
  std::array<double, 4> corner_bias{};   // effective Hartree, clockwise from top-left
  double interaction_scale = 1.0;        // 0 switches the Coulomb term off

  void validate() const;
  // hash over the fields the Coulomb tensor depends on (cutoff, order, format)
  std::uint64_t tensor_hash() const;
};

struct Orbital {
  int nx = 1;
  int ny = 1;
};

int orbital_index(const Orbital& o, int cutoff);
Orbital orbital_of(int flat_index, int cutoff);

struct CoulombElement {
  double value = 0.0;   // effective Hartree, includes the a/L scaling
  bool converged = true;
  double quad_diff = 0.0;
};

// Coulomb matrix elements <ij|1/|r1-r2||kl> of the unit box in the sine
// basis. The 4D integral is reduced to a 2D integral over the relative
// coordinates with kernel 1/sqrt(s^2 + sigma^2); the radial singularity is
// removed exactly by a Duffy split of each quadrant, and the smooth remainder
// is integrated with tensor Gauss-Legendre rules. Elements are assembled from
// a cached table of cosine cross-correlation integrals; a second table at
// lower order provides the convergence estimate.
class CoulombTensor {
 public:
  static CoulombTensor build(int cutoff, int order);

  int cutoff() const { return cutoff_; }
  int order() const { return order_; }
  int order_check() const { return order_check_; }

  // <ij|V|kl> for the unit box in effective Hartree; i,k refer to electron 1.
  double element_unit_box(const Orbital& i, const Orbital& j, const Orbital& k,
                          const Orbital& l) const;
  // same element from the lower-order table
  double element_unit_box_check(const Orbital& i, const Orbital& j,
                                const Orbital& k, const Orbital& l) const;

  // largest discrepancy between the two quadrature orders over the table
  double max_table_diff() const;

  void save(const std::filesystem::path& path) const;
  static std::optional<CoulombTensor> load(const std::filesystem::path& path,
                                           int cutoff, int order);
  std::string cache_key() const;

 private:
  CoulombTensor() = default;
  int cutoff_ = 0;
  int order_ = 0;
  int order_check_ = 0;
  Eigen::MatrixXd w_main_;   // (2c+1)^2 x (2c+1)^2 cross-correlation table
  Eigen::MatrixXd w_check_;
};

// Scaled element with convergence flag; indices are within cfg.sp_cutoff.
CoulombElement coulomb_element(const Orbital& i, const Orbital& j,
                               const Orbital& k, const Orbital& l,
                               const EDConfig& cfg, const CoulombTensor& tensor);

// Symmetrised two-electron pair basis over flat orbital indices: p <= q for
// the singlet (symmetric) sector, p < q for the triplet sector.
std::vector<std::pair<int, int>> pair_basis(const EDConfig& cfg);

struct EDMatrix {
  Eigen::MatrixXd h;  // dense symmetric, effective Hartree
  model::SpinKind channel = model::SpinKind::Singlet;
  int cutoff = 0;
  std::int64_t coulomb_terms = 0;
  std::int64_t flagged_terms = 0;  // quadrature-convergence flags seen in assembly
};

// Dense pair-basis Hamiltonian: kinetic (pi^2/2)(nx^2+ny^2)(a/L)^2 per
// electron, bilinear corner-bias one-body terms, and the Coulomb tensor
// contracted over the symmetry sector. Pair dimensions above 20000 throw.
EDMatrix build_h(const EDConfig& cfg, const CoulombTensor& tensor);

struct SpectrumResult {
  std::vector<double> energies_eh;  // ascending
  model::SpinKind channel = model::SpinKind::Singlet;
  int cutoff = 0;
  double max_residual = 0.0;  // max ||Hx - Ex|| / max(1, |E|) over returned pairs
  int iterations = 0;         // Krylov dimension used; 0 for the dense path
  Eigen::MatrixXd vectors;    // dim x k
};

// k lowest eigenpairs. Small problems are solved densely; large ones use a
// blocked Krylov/Rayleigh-Ritz iteration with full reorthogonalisation (block
// size >= 2 so symmetry-forced degenerate pairs are resolved). Residuals are
// verified explicitly and non-convergence throws.
SpectrumResult solve_lowest(const EDMatrix& hm, int k);

struct ChargeDensity {
  int grid_n = 0;
  Eigen::MatrixXd rho;        // rho(x_a, y_b), row = x index
  double integral_grid = 0.0; // composite-Simpson integral over the grid
  double integral_exact = 2.0;
};

// One-body density of a pair-basis eigenvector, normalised to 2 electrons.
ChargeDensity charge_density(const EDConfig& cfg, const Eigen::VectorXd& eigvec,
                             int grid_n);

struct DeltaExtraction {
  double delta_eh = 0.0;      // (E_s2 - E_s1)/4
  double midway_ratio = 0.0;  // (E_t - (E_s1+E_s2)/2) / (E_s2 - E_s1)
  bool isolated = true;       // 3rd singlet at least 2x the splitting away
};

// Effective tunnelling energy from exact spectra: at phi = 0 and E0 = E1 the
// singlet splitting of the four-corner model is 4 Delta.
DeltaExtraction extract_delta(const SpectrumResult& singlets,
                              const SpectrumResult& triplets);

// Effective Bohr radius a* = a0 eps_r / (m*/m_e), nm.
double effective_bohr_nm(const model::MaterialParams& material);
// Effective Hartree e^2/(4 pi eps a*), ueV.
double effective_hartree_ueV(const model::MaterialParams& material);

}  // namespace qdot::ed
