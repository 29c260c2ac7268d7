#pragma once

// Least-squares extraction of line parameters, Zeeman g-factors, Stark
// coefficients, saturation and polarization curves, and the optical and
// electrical suppression models.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trapnoise/geometry.hpp"
#include "trapnoise/lineshape.hpp"
#include "trapnoise/lsq.hpp"
#include "trapnoise/suppression.hpp"

namespace trapnoise {

struct FitParameter {
    std::string name;
    double value = 0.0;
    double uncertainty = 0.0;  ///< 1 sigma; infinite when the data cannot resolve it
    bool fixed = false;
    bool derived = false;      ///< computed from the fitted parameters
};

struct FitResult {
    std::string model;
    std::vector<FitParameter> parameters;
    double residual_norm = 0.0;  ///< |r| of the (weighted) residual vector
    double gradient_norm = 0.0;
    int n_iterations = 0;
    bool converged = false;
    std::string status;
    std::string provenance;  ///< initial guess or multi-start seed description
    std::vector<std::string> flags;

    const FitParameter& param(const std::string& name) const;
    double value(const std::string& name) const { return param(name).value; }
    double uncertainty(const std::string& name) const { return param(name).uncertainty; }
    bool has_flag(const std::string& flag) const;
};

struct MeasurementSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> y_err;  ///< empty or same length as y; all > 0

    std::size_t size() const { return x.size(); }
    /// Throws DataError on length mismatch, non-finite values or bad errors.
    void validate() const;
    /// Copy sorted by x (stable).
    MeasurementSeries sorted() const;
};

// --- Voigt lines -------------------------------------------------------------

struct VoigtFitOptions {
    std::optional<VoigtParams> initial;
    /// Hold the Lorentzian HWHM at this value (spectrometer-limited data).
    std::optional<double> fixed_gamma;
    /// Flag poor_fit when the reduced chi-square (Poisson noise metadata) or
    /// rms residual / peak height (otherwise) exceeds this.
    double poor_fit_chi2 = 3.0;
    double poor_fit_relative_rms = 0.02;
    LsqOptions lsq;
};

/// Parameters: center, sigma_g, gamma_lorentz, amplitude; derived fwhm.
FitResult fit_voigt(const SpectrumRecord& spectrum, const VoigtFitOptions& options = {});

struct DoubleVoigtOptions {
    std::optional<double> fixed_gamma;
    LsqOptions lsq;
};

/// Two-line fit. Parameters: center_1 < center_2, sigma_1, sigma_2, shared
/// gamma_lorentz, amplitude_1, amplitude_2; derived split, fwhm_1, fwhm_2.
/// Throws DataError when the lines are not resolved.
FitResult fit_double_voigt_splitting(const SpectrumRecord& spectrum,
                                     const DoubleVoigtOptions& options = {});

// --- Zeeman ------------------------------------------------------------------

/// Splitting (meV) vs field (T) through the origin: dE = g mu_B B.
/// Parameter: g_effective.
FitResult fit_zeeman(const MeasurementSeries& splitting_vs_field);

struct GFactors {
    double g_e = 0.0;         ///< (g_H + g_V) / 2
    double three_g_hh = 0.0;  ///< (g_H - g_V) / 2
    double g_e_err = 0.0;
    double three_g_hh_err = 0.0;
};

GFactors compose_g_factors(double g_h, double g_v, double g_h_err = 0.0, double g_v_err = 0.0);

// --- Stark polynomial -----------------------------------------------------------

struct StarkFitOptions {
    /// Fit only beta and c4 (d and c3 reported fixed at 0).
    bool even_only = false;
    /// Largest acceptable condition number of the column-scaled design.
    double max_condition = 1e8;
};

/// Center shift (meV) vs applied voltage. Parameters d, beta, c3, c4 in meV
/// and powers of cm/kV.
FitResult fit_stark_polynomial(const MeasurementSeries& shift_vs_voltage,
                               const FieldConversion& conv, const StarkFitOptions& options = {});

// --- saturation / polarization ------------------------------------------------

/// I = i_sat P / (P + p_sat). Flags: ill_conditioned, non_monotonic.
FitResult fit_saturation(const MeasurementSeries& intensity_vs_power);

/// I(theta) = i0 + i1 cos[2(theta - theta0)], visibility = i1 / i0.
FitResult fit_polarization(const MeasurementSeries& intensity_vs_angle);

// --- suppression ----------------------------------------------------------------

enum class CenterUnits { wavelength_nm, energy_mev };

struct PowerSuppressionOptions {
    double gamma_lorentz = 0.064;  ///< HWHM composed into the model FWHM
    double lambda0_nm = 440.0;     ///< for wavelength-valued centers
    CenterUnits center_units = CenterUnits::wavelength_nm;
    bool fix_p_inf = true;
    double p_inf = 1.0;
    /// kappa_hat is bounded to [1/n_max, 1].
    std::size_t n_max = 100;
    /// Linewidth data given as FWHM(P)/FWHM(0).
    bool normalized = false;
    /// Each series is scaled by its own range (or y_err when present) so both
    /// contribute equally; this multiplies the center block.
    double center_weight = 1.0;
    std::size_t n_starts = 12;
    std::uint64_t seed = 1;
    LsqOptions lsq;
};

/// Joint fit of linewidth and center vs pump power. Pass an empty center
/// series to fit linewidths only. Parameters p0, p_sat, beta_s2, kappa_hat,
/// p_inf, center_offset (the line position at zero trap shift).
FitResult fit_suppression_power(const MeasurementSeries& linewidth_vs_power,
                                const MeasurementSeries& center_vs_power,
                                const PowerSuppressionOptions& options = {});

struct FieldSuppressionOptions {
    FieldConversion conversion;
    double gamma_lorentz = 0.064;
    double beta = 2.6e-6;  ///< held fixed; beta_s2 and kappa_hat carry S2, S4
    bool free_alpha = false;
    bool free_gamma_stretch = false;
    double alpha = 0.2;
    double gamma_stretch = 1.0;
    /// Hold beta S2 and kappa_hat at values implied by a known trap geometry
    /// (see expected_moments). Without them p0 and beta_s2 trade off closely.
    std::optional<double> fixed_beta_s2;
    std::optional<double> fixed_kappa_hat;
    std::size_t n_max = 100;
    bool normalized = false;
    /// Box for the multi-start draw and the solver.
    double p0_min = 0.01, p0_max = 1.0;
    double log10_b_min = -1.0, log10_b_max = 5.0;
    double e_star_min = 50.0, e_star_max = 1.0e4;
    double beta_s2_min = 1e-3, beta_s2_max = 10.0;
    double heating_max = 1e-5;
    std::size_t n_starts = 16;
    std::uint64_t seed = 1;
    LsqOptions lsq;
};

/// Voigt FWHM of field_sweep against linewidth vs voltage. Parameters p0, log10_b,
/// alpha, gamma_stretch, e_star, beta_s2, kappa_hat, heating_c; derived b,
/// s2 = beta_s2 / beta and s4 = kappa_hat s2^2.
FitResult fit_suppression_field(const MeasurementSeries& linewidth_vs_voltage,
                                const FieldSuppressionOptions& options = {});

/// Model curves from fitted results (same conventions as the fits).
std::vector<double> suppression_power_linewidth(const FitResult& fit, const std::vector<double>& powers,
                                                const PowerSuppressionOptions& options = {});
std::vector<double> suppression_field_linewidth(const FitResult& fit, const std::vector<double>& voltages,
                                                const FieldSuppressionOptions& options = {});

}  // namespace trapnoise
