#pragma once

// Spectral kernels: Lorentzian, Gaussian, Voigt (through the Faddeeva
// function), the Voigt FWHM approximation, and synthetic spectra.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trapnoise/shift_statistics.hpp"

namespace trapnoise {

/// w(z) = exp(-z^2) erfc(-i z) for Im z >= 0.
///
/// Weideman's rational expansion (N = 40) inside |z| <= 15, Laplace continued
/// fraction outside. Relative error is below 1e-12 on the upper half plane.
std::complex<double> faddeeva(std::complex<double> z);

/// Unit-area densities.
double gaussian_density(double x, double center, double sigma);
double lorentzian_density(double x, double center, double gamma_hwhm);

struct VoigtParams {
    double center = 0.0;         ///< meV
    double sigma_g = 0.0;        ///< Gaussian standard deviation, meV
    double gamma_lorentz = 0.0;  ///< Lorentzian half width at half maximum, meV
    double amplitude = 1.0;      ///< integrated area

    void validate() const;
};

/// amplitude * (Gaussian(sigma_g) convolved with Lorentzian(gamma)) at x.
/// Falls back to the pure Gaussian / Lorentzian when the other width is 0.
double voigt(double x, const VoigtParams& params);

struct VoigtGradient {
    double value = 0.0;
    double d_center = 0.0;
    double d_sigma = 0.0;
    double d_gamma = 0.0;
    double d_amplitude = 0.0;
};

/// Value and analytic partial derivatives. Requires sigma_g > 0.
VoigtGradient voigt_with_gradient(double x, const VoigtParams& params);

std::vector<double> voigt_profile(std::span<const double> grid, const VoigtParams& params);

/// 0.5346 L + sqrt(0.2166 L^2 + G^2). Returns 0 when both widths are 0.
double voigt_fwhm_approx(double fwhm_g, double fwhm_l);

/// FWHM of the exact profile by bracketing and bisection on the half-maximum
/// crossing.
double voigt_fwhm_exact(double sigma_g, double gamma_lorentz);

// --- spectra ---------------------------------------------------------------

enum class SpectrumAxis { energy_mev, wavelength_nm };

std::string to_string(SpectrumAxis axis);
SpectrumAxis spectrum_axis_from_string(const std::string& s);

enum class NoiseType { poisson, gaussian };

struct NoiseModel {
    NoiseType type = NoiseType::poisson;
    /// Poisson: counts are drawn as Poisson(scale * I) / scale.
    /// Gaussian: additive noise with standard deviation scale.
    double scale = 1.0;
};

struct SpectrumRecord {
    SpectrumAxis axis = SpectrumAxis::energy_mev;
    std::vector<double> x;
    std::vector<double> intensity;
    std::optional<NoiseModel> noise;

    std::size_t size() const { return x.size(); }
    /// Throws DataError unless x is strictly monotone and sizes match.
    void validate() const;
    /// Copy on an ascending energy axis (E = hc / lambda for wavelength data).
    SpectrumRecord to_energy() const;
    /// Copy on an ascending wavelength axis.
    SpectrumRecord to_wavelength() const;
};

/// Uniform energy grid [lo, hi] with n points.
struct GridSpec {
    double lo_mev = 0.0;
    double hi_mev = 0.0;
    std::size_t n_points = 0;
};

/// Grid centered on `center` spanning +-half_width_factor total Voigt widths.
GridSpec centered_grid(double center_mev, double total_fwhm_mev, double half_width_factor,
                       std::size_t n_points);

struct SynthesisOptions {
    double amplitude = 1000.0;
    std::optional<NoiseModel> noise;
    std::uint64_t noise_seed = 0;
};

/// Voigt line at hc/lambda0 + mu with sigma_g = sqrt(sigma2). The grid must
/// cover at least +-5 total widths around the line center.
SpectrumRecord synthesize_spectrum(const ShiftStatistics& stats, double gamma_lorentz,
                                   double lambda0_nm, const GridSpec& grid,
                                   const SynthesisOptions& options = {});

/// Applies a noise model in place; deterministic for a given seed.
void apply_noise(SpectrumRecord& spectrum, const NoiseModel& noise, std::uint64_t seed);

}  // namespace trapnoise
