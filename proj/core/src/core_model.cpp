#include "qdot/core_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qdot/constants.hpp"

namespace qdot::model {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool all_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void MaterialParams::validate() const {
  require(effective_mass_ratio > 0.0, "MaterialParams: effective_mass_ratio must be > 0");
  require(relative_permittivity >= 1.0, "MaterialParams: relative_permittivity must be >= 1");
  require(std::isfinite(g_factor), "MaterialParams: g_factor must be finite");
}

void DotGeometry::validate() const {
  require(side_length_nm > 0.0, "DotGeometry: side_length_nm must be > 0");
  require(effective_area_nm2 > 0.0 &&
              effective_area_nm2 <= side_length_nm * side_length_nm,
          "DotGeometry: effective_area_nm2 must lie in (0, L^2]");
  require(all_finite(corner_bias_ueV), "DotGeometry: corner_bias entries must be finite");
}

void EffectiveParams::validate() const {
  require(delta_ueV >= 0.0, "EffectiveParams: delta_ueV must be >= 0");
  require(std::isfinite(phi_rad), "EffectiveParams: phi_rad must be finite");
  require(std::isfinite(zeeman_ueV), "EffectiveParams: zeeman_ueV must be finite");
  require(all_finite(eps0_ueV), "EffectiveParams: eps0 entries must be finite");
}

SpinChannel SpinChannel::triplet(int sz) {
  if (sz < -1 || sz > 1) throw std::invalid_argument("SpinChannel: sz must be in {-1,0,+1}");
  return {SpinKind::Triplet, sz};
}

Eigen::Matrix2d TwoLevelH::matrix() const {
  Eigen::Matrix2d m;
  m << e0, gamma, gamma, e1;
  return m;
}

double flux_phase(double flux_quanta) {
  if (!std::isfinite(flux_quanta)) throw std::invalid_argument("flux_phase: non-finite flux");
  return 0.5 * std::numbers::pi * flux_quanta;
}

double flux_quanta_from_field(double b_tesla, double area_nm2) {
  if (area_nm2 <= 0.0) throw std::invalid_argument("flux_quanta_from_field: area must be > 0");
  return b_tesla * area_nm2 / constants::flux_quantum_T_nm2;
}

double zeeman_energy(const MaterialParams& material, double b_tesla) {
  material.validate();
  if (!std::isfinite(b_tesla)) throw std::invalid_argument("zeeman_energy: non-finite field");
  return material.g_factor * constants::mu_B_ueV_per_T * b_tesla;
}

std::array<double, 4> site_energies_from_bias(const DotGeometry& geometry) {
  geometry.validate();
  std::array<double, 4> eps{};
  for (int i = 0; i < 4; ++i) eps[i] = -geometry.corner_bias_ueV[i];
  return eps;
}

TwoLevelH build_channel_h(const EffectiveParams& params, SpinChannel channel) {
  params.validate();
  const double two_phi = 2.0 * params.phi_rad;

  TwoLevelH h;
  h.e0 = params.eps0_ueV[0] + params.eps0_ueV[2];
  h.e1 = params.eps0_ueV[1] + params.eps0_ueV[3];

  if (channel.kind == SpinKind::Singlet) {
    h.gamma = 2.0 * params.delta_ueV * std::cos(two_phi);
  } else {
    h.gamma = 2.0 * params.delta_ueV * std::sin(two_phi);
    const double shift = channel.sz * params.zeeman_ueV;
    h.e0 += shift;
    h.e1 += shift;
  }
  return h;
}

std::pair<double, double> eigenenergies(const TwoLevelH& h) {
  const double sum = h.e0 + h.e1;
  const double diff = h.e0 - h.e1;
  const double root = std::sqrt(diff * diff + 4.0 * h.gamma * h.gamma);
  return {0.5 * (sum - root), 0.5 * (sum + root)};
}

PseudoSpin pseudo_spin(const TwoLevelH& h) {
  return {0.5 * (h.e0 + h.e1), 0.5 * (h.e1 - h.e0), h.gamma};
}

std::vector<FluxSpectrumRow> spectrum_vs_flux(const EffectiveParams& base,
                                              std::span<const double> flux_grid,
                                              double diamagnetic_coeff_ueV) {
  base.validate();
  if (flux_grid.empty()) throw std::invalid_argument("spectrum_vs_flux: empty flux grid");

  std::vector<FluxSpectrumRow> table;
  table.reserve(flux_grid.size());

  for (double f : flux_grid) {
    EffectiveParams p = base;
    p.phi_rad = flux_phase(f);
    p.zeeman_ueV = base.zeeman_ueV * f;

    const double rise = diamagnetic_coeff_ueV * f * f;

    FluxSpectrumRow row;
    row.flux_quanta = f;

    const auto [s_lo, s_hi] = eigenenergies(build_channel_h(p, SpinChannel::singlet()));
    row.singlet_minus = s_lo + rise;
    row.singlet_plus = s_hi + rise;

    for (int sz = -1; sz <= 1; ++sz) {
      const auto [t_lo, t_hi] = eigenenergies(build_channel_h(p, SpinChannel::triplet(sz)));
      row.triplet[sz + 1] = {t_lo + rise, t_hi + rise};
    }
    table.push_back(row);
  }
  return table;
}

}  // namespace qdot::model
