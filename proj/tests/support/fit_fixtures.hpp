#pragma once

// Synthetic data sets shared by the fitting unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "trapnoise/analytics.hpp"
#include "trapnoise/constants.hpp"
#include "trapnoise/fitting.hpp"
#include "trapnoise/lineshape.hpp"
#include "trapnoise/rng.hpp"

namespace fixtures {

using namespace trapnoise;

inline constexpr double lambda0 = 440.0;
inline const double line_center = constants::hc_mev_nm / lambda0;

inline SpectrumRecord single_line(double sigma, double gamma, std::optional<NoiseModel> noise, std::uint64_t seed) {
    const ShiftStatistics st{0.0, sigma * sigma};
    const double width = voigt_fwhm_approx(constants::gaussian_fwhm_per_sigma * sigma, 2.0 * gamma);
    SynthesisOptions opt;
    opt.noise = noise;
    opt.noise_seed = seed;
    return synthesize_spectrum(st, gamma, lambda0, centered_grid(line_center, width, 8.0, 401), opt);
}

inline SpectrumRecord two_lines(double split, double a1, double a2, double noise_sd, std::uint64_t seed) {
    SpectrumRecord s;
    const VoigtParams l1{line_center - 0.5 * split, 0.05, 0.03, a1};
    const VoigtParams l2{line_center + 0.5 * split, 0.05, 0.03, a2};
    for (int i = 0; i < 501; ++i) {
        const double x = line_center - 2.0 + 4.0 * i / 500.0;
        s.x.push_back(x);
        s.intensity.push_back(voigt(x, l1) + voigt(x, l2));
    }
    if (noise_sd > 0.0) apply_noise(s, NoiseModel{NoiseType::gaussian, noise_sd}, seed);
    return s;
}

struct PowerTruth {
    double p0 = 0.4, p_sat = 1.0, beta_s2 = 0.275, kappa_hat = 0.077, p_inf = 1.0;
};

// Linewidth (meV) and center wavelength (nm) series with relative noise on
// the widths and noise of the same relative size on the center shift range.
inline std::pair<MeasurementSeries, MeasurementSeries> power_data(const PowerTruth& t, double noise, std::uint64_t seed) {
    const std::vector<double> powers{0.0, 0.1, 0.2, 0.4, 0.7, 1.0, 1.5, 2.0, 3.0, 4.5, 6.0, 8.0, 10.0, 15.0, 20.0};
    Rng rng(seed);
    MeasurementSeries w, c;
    std::vector<double> centers;
    for (double P : powers) {
        const double p = t.p0 + (t.p_inf - t.p0) * P / (P + t.p_sat);
        const double var = variance_shift_khat(t.beta_s2, t.kappa_hat, p);
        const double fwhm = voigt_fwhm_approx(constants::gaussian_fwhm_per_sigma * std::sqrt(var), 0.128);
        w.x.push_back(P);
        w.y.push_back(fwhm * (1.0 + rng.normal(0.0, noise)));
        c.x.push_back(P);
        centers.push_back(lambda0 + energy_to_wavelength_shift(t.beta_s2 * p, lambda0));
    }
    const double range = *std::max_element(centers.begin(), centers.end()) -
                         *std::min_element(centers.begin(), centers.end());
    for (double v : centers) c.y.push_back(v + rng.normal(0.0, noise * range));
    return {w, c};
}

// Reference electrical-suppression data set: interior linewidth minimum near
// 35 V at roughly half the zero-bias width.
struct FieldTruth {
    double p0 = 0.35, b = 350.0, alpha = 0.2, gamma_stretch = 1.0, e_star = 2070.0;
    double beta = 2.6e-6, beta_s2 = 0.55693, kappa_hat = 0.076626;
};

inline std::vector<double> field_truth_widths(const FieldTruth& t, const std::vector<double>& volts) {
    const double s2 = t.beta_s2 / t.beta;
    StarkResponse resp;
    resp.beta = t.beta;
    const auto sweep = field_sweep(volts, FieldConversion{},
                                   ElectricalSuppressionParams{t.p0, t.b, t.alpha, t.gamma_stretch, t.e_star},
                                   BiasMoments{s2, t.kappa_hat * s2 * s2}, resp, 0.064);
    std::vector<double> out;
    for (const auto& pt : sweep) out.push_back(pt.voigt_fwhm);
    return out;
}

inline double argmin_on(const std::vector<double>& x, const std::vector<double>& y) {
    return x[static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin())];
}

inline std::vector<double> voltage_grid() {
    std::vector<double> v;
    for (int i = 0; i <= 30; ++i) v.push_back(2.0 * i);
    return v;
}

}  // namespace fixtures
