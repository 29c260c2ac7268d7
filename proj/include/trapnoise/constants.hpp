#pragma once

// Physical constants and unit conventions.
//
// Canonical units throughout the library:
//   fields      kV/cm
//   energies    meV
//   lengths     nm (trap geometry), um (electrode gaps)
//   power       nW
//   B field     T

namespace trapnoise::constants {

/// e / (4 pi eps0), V nm per elementary charge.
inline constexpr double coulomb_v_nm = 1.439964548;
/// h c in meV nm.
inline constexpr double hc_mev_nm = 1.23984198e6;
/// Hydrogen Bohr radius, nm.
inline constexpr double bohr_radius_h_nm = 0.0529177210903;
/// Bohr magneton, meV/T.
inline constexpr double bohr_magneton_mev_per_t = 0.0578838180;

inline constexpr double electron_mass_kg = 9.1093837015e-31;
inline constexpr double hbar_js = 1.054571817e-34;
inline constexpr double elementary_charge_c = 1.602176634e-19;

inline constexpr double pi = 3.14159265358979323846;

/// 1 V/nm expressed in kV/cm.
inline constexpr double kv_cm_per_v_nm = 1.0e4;
/// 1 V/m expressed in kV/cm.
inline constexpr double kv_cm_per_v_m = 1.0e-5;
/// 1 V/um expressed in kV/cm.
inline constexpr double kv_cm_per_v_um = 10.0;
/// 1 meV in joule.
inline constexpr double joule_per_mev = 1.0e-3 * elementary_charge_c;
/// 1 nW in watt.
inline constexpr double watt_per_nw = 1.0e-9;

/// FWHM of a Gaussian divided by its standard deviation, 2 sqrt(2 ln 2).
inline constexpr double gaussian_fwhm_per_sigma = 2.3548200450309493;

}  // namespace trapnoise::constants
