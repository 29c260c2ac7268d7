#pragma once

// Closed-form statistics of the Stark-shifted transition under N identical,
// independent, isotropically placed telegraph traps, and control sweeps built
// on them.

#include <span>
#include <vector>

#include "trapnoise/geometry.hpp"
#include "trapnoise/shift_statistics.hpp"
#include "trapnoise/suppression.hpp"

namespace trapnoise {

/// Lorentzian HWHM of the 0.02 nm (128 ueV FWHM) spectrometer resolution.
inline constexpr double default_gamma_lorentz_mev = 0.064;

/// mu = beta (E0^2 + p S2).
double mean_shift(double e0, double p, double s2, double beta);

/// sigma^2 = beta^2 [p(1-p)(S4 + 2 E0^2 S2) + p^2(1-p^2)(S2^2 - S4)].
double variance_shift(double e0, double p, double s2, double s4, double beta);

/// Zero-bias variance factored on (beta S2)^2 and kappa_hat = S4/S2^2.
double variance_shift_khat(double beta_s2, double kappa_hat, double p);

ShiftStatistics shift_statistics(double e0, double p, const FieldMoments& moments, double beta);

/// First-order wavelength change for an energy change: -lambda0^2 dE / hc.
/// Positive dE (higher energy) is a blue shift (negative return value).
double energy_to_wavelength_shift(double delta_e_mev, double lambda0_nm);
/// Inverse of energy_to_wavelength_shift.
double wavelength_to_energy_shift(double delta_lambda_nm, double lambda0_nm);

struct SweepPoint {
    double control = 0.0;            ///< V or nW
    double e0_kv_cm = 0.0;           ///< local bias field (0 for power sweeps)
    double p = 0.0;
    double mu = 0.0;                 ///< meV
    double sigma2 = 0.0;             ///< meV^2 (trap noise only)
    double gaussian_fwhm = 0.0;      ///< meV, including any heating term
    double voigt_fwhm = 0.0;         ///< meV
    double center_wavelength = 0.0;  ///< nm
};

/// Moments for optical sweeps in the factored form.
struct PowerMoments {
    double beta_s2 = 0.0;  ///< meV
    double kappa_hat = 0.0;
};

std::vector<SweepPoint> power_sweep(std::span<const double> powers_nw,
                                    const OpticalSuppressionParams& optical,
                                    const PowerMoments& moments,
                                    double gamma_lorentz = default_gamma_lorentz_mev,
                                    double lambda0_nm = 440.0);

struct BiasMoments {
    double s2 = 0.0;
    double s4 = 0.0;
};

/// The bias field is |F_loc(V)|. Mean shift uses the full Stark polynomial for
/// the bias part, beta p S2 for the traps. The heating term heating_c E0^2 is
/// added to the Gaussian FWHM before composing the Voigt width.
std::vector<SweepPoint> field_sweep(std::span<const double> voltages, const FieldConversion& conv,
                                    const ElectricalSuppressionParams& electrical,
                                    const BiasMoments& moments, const StarkResponse& resp,
                                    double gamma_lorentz = default_gamma_lorentz_mev,
                                    double lambda0_nm = 440.0);

/// voigt_fwhm / voigt_fwhm at the zero-control point (or the first point when
/// the grid does not contain 0).
std::vector<double> normalized_linewidth(std::span<const SweepPoint> sweep);

}  // namespace trapnoise
