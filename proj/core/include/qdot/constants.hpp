#pragma once

// Unit system used throughout: energies in micro-eV, times in ps, lengths in nm.
// Every dynamics phase is (E * t / hbar) with the value below; no other hbar
// appears anywhere in the library.

namespace qdot::constants {

// hbar = 6.582119569e-16 eV s  ->  ueV ps
inline constexpr double hbar_ueV_ps = 658.2119569;

// Bohr magneton, ueV per tesla
inline constexpr double mu_B_ueV_per_T = 57.8838;

// e^2 / (4 pi eps0) = 1.4400 eV nm, the single hard-coded electrostatic constant
inline constexpr double coulomb_eV_nm = 1.4400;
inline constexpr double coulomb_ueV_nm = coulomb_eV_nm * 1.0e6;

// Flux quantum h/e in T nm^2
inline constexpr double flux_quantum_T_nm2 = 4135.667696;

// Vacuum Bohr radius in nm; the effective Bohr radius is a0 * eps_r / (m*/m_e)
inline constexpr double bohr_radius_nm = 0.052917721;

}  // namespace qdot::constants
