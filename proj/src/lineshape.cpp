#include "trapnoise/lineshape.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "trapnoise/constants.hpp"
#include "trapnoise/errors.hpp"
#include "trapnoise/rng.hpp"

namespace trapnoise {

using constants::pi;

namespace {

constexpr double inv_sqrt_pi = 0.56418958354775628695;
constexpr double sqrt2 = 1.41421356237309504880;
constexpr double sqrt_2pi = 2.50662827463100050242;

constexpr int weideman_n = 40;

struct WeidemanTable {
    double L;
    std::array<double, weideman_n + 1> a{};  // a[1..N] used

    WeidemanTable() : L(std::sqrt(weideman_n / sqrt2)) {
        const int M = 2 * weideman_n;
        const int M2 = 2 * M;
        // f sampled at k = -M+1 .. M-1, with a leading zero; then fftshift.
        std::vector<double> f(M2, 0.0);
        for (int k = -M + 1; k <= M - 1; ++k) {
            const double t = L * std::tan(0.5 * k * pi / M);
            f[k + M] = std::exp(-t * t) * (L * L + t * t);
        }
        std::vector<double> g(M2);
        for (int i = 0; i < M2; ++i) g[i] = f[(i + M) % M2];
        for (int n = 1; n <= weideman_n; ++n) {
            double re = 0.0;
            for (int i = 0; i < M2; ++i) re += g[i] * std::cos(2.0 * pi * n * i / M2);
            a[n] = re / M2;
        }
    }
};

const WeidemanTable& weideman() {
    static const WeidemanTable table;
    return table;
}

std::complex<double> faddeeva_weideman(std::complex<double> z) {
    const auto& tab = weideman();
    const std::complex<double> iz(-z.imag(), z.real());
    const std::complex<double> denom = tab.L - iz;
    const std::complex<double> Z = (tab.L + iz) / denom;
    std::complex<double> p = 0.0;
    for (int n = weideman_n; n >= 1; --n) p = p * Z + tab.a[n];
    return 2.0 * p / (denom * denom) + inv_sqrt_pi / denom;
}

// w(z) = i/sqrt(pi) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...))))
std::complex<double> faddeeva_continued_fraction(std::complex<double> z) {
    constexpr int terms = 40;
    std::complex<double> tail = z;
    for (int k = terms; k >= 1; --k) tail = z - (0.5 * k) / tail;
    return std::complex<double>(0.0, inv_sqrt_pi) / tail;
}

}  // namespace

std::complex<double> faddeeva(std::complex<double> z) {
    if (z.imag() < 0.0) throw DomainError("faddeeva: Im(z) must be >= 0");
    if (std::abs(z) > 15.0) return faddeeva_continued_fraction(z);
    return faddeeva_weideman(z);
}

double gaussian_density(double x, double center, double sigma) {
    const double u = (x - center) / sigma;
    return std::exp(-0.5 * u * u) / (sqrt_2pi * sigma);
}

double lorentzian_density(double x, double center, double gamma) {
    const double d = x - center;
    return gamma / (pi * (d * d + gamma * gamma));
}

void VoigtParams::validate() const {
    if (!(sigma_g >= 0.0) || !(gamma_lorentz >= 0.0))
        throw DomainError("voigt: widths must be non-negative");
    if (sigma_g == 0.0 && gamma_lorentz == 0.0)
        throw DomainError("voigt: sigma_g and gamma_lorentz cannot both be zero");
    if (!std::isfinite(center) || !std::isfinite(amplitude))
        throw DomainError("voigt: center and amplitude must be finite");
}

double voigt(double x, const VoigtParams& p) {
    if (p.sigma_g == 0.0) {
        if (p.gamma_lorentz == 0.0)
            throw DomainError("voigt: sigma_g and gamma_lorentz cannot both be zero");
        return p.amplitude * lorentzian_density(x, p.center, p.gamma_lorentz);
    }
    if (p.gamma_lorentz == 0.0) return p.amplitude * gaussian_density(x, p.center, p.sigma_g);
    const double s = p.sigma_g * sqrt2;
    const std::complex<double> z((x - p.center) / s, p.gamma_lorentz / s);
    return p.amplitude * faddeeva(z).real() / (p.sigma_g * sqrt_2pi);
}

VoigtGradient voigt_with_gradient(double x, const VoigtParams& p) {
    if (!(p.sigma_g > 0.0)) throw DomainError("voigt_with_gradient: sigma_g must be > 0");
    const double s = p.sigma_g * sqrt2;
    const std::complex<double> z((x - p.center) / s, p.gamma_lorentz / s);
    const std::complex<double> w = faddeeva(z);
    // w'(z) = -2 z w(z) + 2 i / sqrt(pi)
    const std::complex<double> dw = -2.0 * z * w + std::complex<double>(0.0, 2.0 * inv_sqrt_pi);
    const double norm = 1.0 / (p.sigma_g * sqrt_2pi);

    VoigtGradient g;
    const double shape = w.real() * norm;
    g.value = p.amplitude * shape;
    g.d_amplitude = shape;
    g.d_center = p.amplitude * norm * (dw * (-1.0 / s)).real();
    g.d_gamma = p.amplitude * norm * (dw * std::complex<double>(0.0, 1.0 / s)).real();
    g.d_sigma = -g.value / p.sigma_g + p.amplitude * norm * (dw * (-z / p.sigma_g)).real();
    return g;
}

std::vector<double> voigt_profile(std::span<const double> grid, const VoigtParams& params) {
    params.validate();
    std::vector<double> out(grid.size());
    std::transform(grid.begin(), grid.end(), out.begin(),
                   [&](double x) { return voigt(x, params); });
    return out;
}

double voigt_fwhm_approx(double fwhm_g, double fwhm_l) {
    if (!(fwhm_g >= 0.0) || !(fwhm_l >= 0.0))
        throw DomainError("voigt_fwhm_approx: widths must be non-negative");
    return 0.5346 * fwhm_l + std::sqrt(0.2166 * fwhm_l * fwhm_l + fwhm_g * fwhm_g);
}

double voigt_fwhm_exact(double sigma_g, double gamma_lorentz) {
    VoigtParams p{0.0, sigma_g, gamma_lorentz, 1.0};
    p.validate();
    const double half = 0.5 * voigt(0.0, p);
    double hi = std::max(sigma_g, gamma_lorentz);
    while (voigt(hi, p) > half) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (voigt(mid, p) > half ? lo : hi) = mid;
    }
    return lo + hi;  // 2 * midpoint
}

// --- spectra ---------------------------------------------------------------

std::string to_string(SpectrumAxis axis) {
    return axis == SpectrumAxis::energy_mev ? "energy_mev" : "wavelength_nm";
}

SpectrumAxis spectrum_axis_from_string(const std::string& s) {
    if (s == "energy_mev") return SpectrumAxis::energy_mev;
    if (s == "wavelength_nm") return SpectrumAxis::wavelength_nm;
    throw DataError("unknown spectrum axis '" + s + "'");
}

void SpectrumRecord::validate() const {
    if (x.size() != intensity.size()) throw DataError("spectrum: x and intensity sizes differ");
    if (x.size() < 2) return;
    const bool up = x[1] > x[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (up ? !(x[i] > x[i - 1]) : !(x[i] < x[i - 1]))
            throw DataError("spectrum: axis is not strictly monotone");
    }
}

namespace {

SpectrumRecord convert_axis(const SpectrumRecord& in, SpectrumAxis target) {
    in.validate();
    SpectrumRecord out;
    out.axis = target;
    out.noise = in.noise;
    const std::size_t n = in.size();
    out.x.resize(n);
    out.intensity = in.intensity;
    for (std::size_t i = 0; i < n; ++i)
        out.x[i] = in.axis == target ? in.x[i] : constants::hc_mev_nm / in.x[i];
    if (n > 1 && out.x[1] < out.x[0]) {
        std::reverse(out.x.begin(), out.x.end());
        std::reverse(out.intensity.begin(), out.intensity.end());
    }
    return out;
}

}  // namespace

SpectrumRecord SpectrumRecord::to_energy() const {
    return convert_axis(*this, SpectrumAxis::energy_mev);
}

SpectrumRecord SpectrumRecord::to_wavelength() const {
    return convert_axis(*this, SpectrumAxis::wavelength_nm);
}

GridSpec centered_grid(double center, double total_fwhm, double half_width_factor,
                       std::size_t n_points) {
    const double half = half_width_factor * total_fwhm;
    return {center - half, center + half, n_points};
}

void apply_noise(SpectrumRecord& spectrum, const NoiseModel& noise, std::uint64_t seed) {
    if (!(noise.scale > 0.0)) throw DomainError("noise scale must be > 0");
    Rng rng(seed);
    for (auto& v : spectrum.intensity) {
        if (noise.type == NoiseType::poisson) {
            v = static_cast<double>(rng.poisson(std::max(v, 0.0) * noise.scale)) / noise.scale;
        } else {
            v += rng.normal(0.0, noise.scale);
        }
    }
    spectrum.noise = noise;
}

SpectrumRecord synthesize_spectrum(const ShiftStatistics& stats, double gamma_lorentz,
                                   double lambda0_nm, const GridSpec& grid,
                                   const SynthesisOptions& options) {
    if (!(lambda0_nm > 0.0)) throw DomainError("synthesize_spectrum: lambda0 must be > 0");
    if (grid.n_points < 2 || !(grid.hi_mev > grid.lo_mev))
        throw DomainError("synthesize_spectrum: grid needs >= 2 points and hi > lo");
    if (!(stats.sigma2 >= 0.0)) throw DomainError("synthesize_spectrum: sigma2 must be >= 0");

    VoigtParams vp;
    vp.center = constants::hc_mev_nm / lambda0_nm + stats.mu;
    vp.sigma_g = stats.sigma();
    vp.gamma_lorentz = gamma_lorentz;
    vp.amplitude = options.amplitude;
    vp.validate();

    const double width = voigt_fwhm_approx(stats.gaussian_fwhm(), 2.0 * gamma_lorentz);
    const double need_lo = vp.center - 5.0 * width;
    const double need_hi = vp.center + 5.0 * width;
    if (grid.lo_mev > need_lo || grid.hi_mev < need_hi) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "synthesize_spectrum: grid [" << grid.lo_mev << ", " << grid.hi_mev
            << "] meV is too narrow; need at least [" << need_lo << ", " << need_hi
            << "] meV (+-5 widths of " << width << " meV)";
        throw DomainError(msg.str());
    }

    SpectrumRecord rec;
    rec.axis = SpectrumAxis::energy_mev;
    rec.x.resize(grid.n_points);
    const double step = (grid.hi_mev - grid.lo_mev) / static_cast<double>(grid.n_points - 1);
    for (std::size_t i = 0; i < grid.n_points; ++i)
        rec.x[i] = grid.lo_mev + step * static_cast<double>(i);
    rec.intensity = voigt_profile(rec.x, vp);
    if (options.noise) apply_noise(rec, *options.noise, options.noise_seed);
    return rec;
}

}  // namespace trapnoise
