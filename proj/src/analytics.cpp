#include "trapnoise/analytics.hpp"

#include <cmath>

#include "trapnoise/constants.hpp"
#include "trapnoise/errors.hpp"
#include "trapnoise/lineshape.hpp"

namespace trapnoise {

namespace {

void check_probability(double p, const char* who) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(who) + ": p must be in [0, 1]");
}

double voigt_width(double gaussian_fwhm, double gamma_lorentz) {
    return voigt_fwhm_approx(gaussian_fwhm, 2.0 * gamma_lorentz);
}

}  // namespace

double mean_shift(double e0, double p, double s2, double beta) {
    check_probability(p, "mean_shift");
    return beta * (e0 * e0 + p * s2);
}

double variance_shift(double e0, double p, double s2, double s4, double beta) {
    check_probability(p, "variance_shift");
    const double q = 1.0 - p;
    const double linear = p * q * (s4 + 2.0 * e0 * e0 * s2);
    const double pair = p * p * (1.0 - p * p) * (s2 * s2 - s4);
    return beta * beta * (linear + pair);
}

double variance_shift_khat(double beta_s2, double kappa_hat, double p) {
    check_probability(p, "variance_shift_khat");
    const double q = 1.0 - p;
    return beta_s2 * beta_s2 * (kappa_hat * p * q + (1.0 - kappa_hat) * p * p * (1.0 - p * p));
}

ShiftStatistics shift_statistics(double e0, double p, const FieldMoments& m, double beta) {
    return {mean_shift(e0, p, m.s2, beta), variance_shift(e0, p, m.s2, m.s4, beta)};
}

double energy_to_wavelength_shift(double delta_e_mev, double lambda0_nm) {
    if (!(lambda0_nm > 0.0)) throw DomainError("energy_to_wavelength_shift: lambda0 must be > 0");
    return -lambda0_nm * lambda0_nm * delta_e_mev / constants::hc_mev_nm;
}

double wavelength_to_energy_shift(double delta_lambda_nm, double lambda0_nm) {
    if (!(lambda0_nm > 0.0)) throw DomainError("wavelength_to_energy_shift: lambda0 must be > 0");
    return -constants::hc_mev_nm * delta_lambda_nm / (lambda0_nm * lambda0_nm);
}

std::vector<SweepPoint> power_sweep(std::span<const double> powers,
                                    const OpticalSuppressionParams& optical,
                                    const PowerMoments& moments, double gamma_lorentz,
                                    double lambda0_nm) {
    optical.validate();
    if (!(moments.kappa_hat >= 0.0 && moments.kappa_hat <= 1.0))
        throw DomainError("power_sweep: kappa_hat must be in [0, 1]");
    if (!(gamma_lorentz >= 0.0)) throw DomainError("power_sweep: gamma_lorentz must be >= 0");

    std::vector<SweepPoint> out;
    out.reserve(powers.size());
    for (double power : powers) {
        SweepPoint pt;
        pt.control = power;
        pt.p = occupancy_vs_power(power, optical);
        pt.mu = moments.beta_s2 * pt.p;
        pt.sigma2 = variance_shift_khat(moments.beta_s2, moments.kappa_hat, pt.p);
        pt.gaussian_fwhm = constants::gaussian_fwhm_per_sigma * std::sqrt(pt.sigma2);
        pt.voigt_fwhm = voigt_width(pt.gaussian_fwhm, gamma_lorentz);
        pt.center_wavelength = lambda0_nm + energy_to_wavelength_shift(pt.mu, lambda0_nm);
        out.push_back(pt);
    }
    return out;
}

std::vector<SweepPoint> field_sweep(std::span<const double> voltages, const FieldConversion& conv,
                                    const ElectricalSuppressionParams& electrical,
                                    const BiasMoments& moments, const StarkResponse& resp,
                                    double gamma_lorentz, double lambda0_nm) {
    conv.validate();
    electrical.validate();
    resp.validate();
    if (!(gamma_lorentz >= 0.0)) throw DomainError("field_sweep: gamma_lorentz must be >= 0");

    std::vector<SweepPoint> out;
    out.reserve(voltages.size());
    for (double v : voltages) {
        if (!std::isfinite(v)) throw DomainError("field_sweep: voltages must be finite");
        SweepPoint pt;
        pt.control = v;
        const double e0 = std::abs(local_field_from_voltage(v, conv).f_loc_kv_cm);
        pt.e0_kv_cm = e0;
        pt.p = occupancy_vs_field(e0, electrical);
        pt.mu = stark_shift(e0, resp) + resp.beta * pt.p * moments.s2;
        pt.sigma2 = variance_shift(e0, pt.p, moments.s2, moments.s4, resp.beta);
        pt.gaussian_fwhm =
            constants::gaussian_fwhm_per_sigma * std::sqrt(pt.sigma2) + resp.heating_c * e0 * e0;
        pt.voigt_fwhm = voigt_width(pt.gaussian_fwhm, gamma_lorentz);
        pt.center_wavelength = lambda0_nm + energy_to_wavelength_shift(pt.mu, lambda0_nm);
        out.push_back(pt);
    }
    return out;
}

std::vector<double> normalized_linewidth(std::span<const SweepPoint> sweep) {
    std::vector<double> out;
    if (sweep.empty()) return out;
    double ref = sweep.front().voigt_fwhm;
    for (const auto& pt : sweep) {
        if (pt.control == 0.0) {
            ref = pt.voigt_fwhm;
            break;
        }
    }
    if (!(ref > 0.0)) throw DomainError("normalized_linewidth: reference linewidth is zero");
    out.reserve(sweep.size());
    for (const auto& pt : sweep) out.push_back(pt.voigt_fwhm / ref);
    return out;
}

}  // namespace trapnoise
