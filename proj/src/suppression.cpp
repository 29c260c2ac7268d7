#include "trapnoise/suppression.hpp"

#include <cmath>

#include "trapnoise/constants.hpp"
#include "trapnoise/errors.hpp"

namespace trapnoise {

void OpticalSuppressionParams::validate() const {
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw DomainError("optical suppression: p0 must be in [0, 1]");
    if (!(p_inf >= 0.0 && p_inf <= 1.0))
        throw DomainError("optical suppression: p_inf must be in [0, 1]");
    if (!(p_sat_nw > 0.0)) throw DomainError("optical suppression: p_sat must be > 0");
}

void MicroscopicOpticalRates::validate() const {
    if (!(k0_plus >= 0.0 && k0_minus >= 0.0 && alpha_c >= 0.0 && alpha_r >= 0.0))
        throw DomainError("microscopic rates must be non-negative");
    if (!(k0_plus + k0_minus > 0.0)) throw DomainError("microscopic rates: k0+ + k0- must be > 0");
    if (!(alpha_c + alpha_r > 0.0))
        throw DomainError("microscopic rates: alpha_c + alpha_r must be > 0");
}

double occupancy_vs_power(double power_nw, const OpticalSuppressionParams& params) {
    params.validate();
    if (!(power_nw >= 0.0)) throw DomainError("occupancy_vs_power: power must be >= 0");
    if (std::isinf(power_nw)) return params.p_inf;
    return params.p0 + (params.p_inf - params.p0) * power_nw / (power_nw + params.p_sat_nw);
}

OpticalSuppressionParams effective_from_microscopic(const MicroscopicOpticalRates& r) {
    r.validate();
    OpticalSuppressionParams out;
    out.p0 = r.k0_plus / (r.k0_plus + r.k0_minus);
    out.p_inf = r.alpha_c / (r.alpha_c + r.alpha_r);
    out.p_sat_nw = (r.k0_plus + r.k0_minus) / (r.alpha_c + r.alpha_r);
    return out;
}

double occupancy_from_rates(double power_nw, const MicroscopicOpticalRates& r) {
    r.validate();
    if (!(power_nw >= 0.0)) throw DomainError("occupancy_from_rates: power must be >= 0");
    return (r.k0_plus + r.alpha_c * power_nw) /
           (r.k0_plus + r.k0_minus + (r.alpha_c + r.alpha_r) * power_nw);
}

double switching_time_from_rates(double power_nw, const MicroscopicOpticalRates& r) {
    r.validate();
    return 1.0 / (r.k0_plus + r.k0_minus + (r.alpha_c + r.alpha_r) * power_nw);
}

double capture_coefficient(double sigma_c, double v_th, double kappa) {
    return sigma_c * v_th * kappa;
}

void CarrierGeneration::validate() const {
    if (!(eta_yield > 0.0 && photon_energy_mev > 0.0 && area_nm2 > 0.0 && thickness_nm > 0.0 &&
          tau_r_s > 0.0))
        throw DomainError("carrier generation parameters must be positive");
}

double carrier_density_coefficient(const CarrierGeneration& g) {
    g.validate();
    const double photon_j = g.photon_energy_mev * constants::joule_per_mev;
    return g.eta_yield * g.tau_r_s * constants::watt_per_nw / (photon_j * g.area_nm2 * g.thickness_nm);
}

double carrier_density(double power_nw, const CarrierGeneration& gen) {
    if (!(power_nw >= 0.0)) throw DomainError("carrier_density: power must be >= 0");
    return carrier_density_coefficient(gen) * power_nw;
}

double characteristic_field(double trap_depth_ev, double effective_mass_ratio) {
    if (!(trap_depth_ev >= 0.0)) throw DomainError("characteristic_field: depth must be >= 0");
    if (!(effective_mass_ratio > 0.0))
        throw DomainError("characteristic_field: mass ratio must be > 0");
    const double m = effective_mass_ratio * constants::electron_mass_kg;
    const double phi_j = trap_depth_ev * constants::elementary_charge_c;
    const double e_star_v_m = 4.0 * std::sqrt(2.0 * m) * std::pow(phi_j, 1.5) /
                              (3.0 * constants::hbar_js * constants::elementary_charge_c);
    return e_star_v_m * constants::kv_cm_per_v_m;
}

double tunneling_factor(double e0, double alpha, double gamma_stretch, double e_star) {
    if (!(e0 >= 0.0)) throw DomainError("tunneling_factor: field must be >= 0");
    if (e0 == 0.0) return 0.0;  // exp(-(E*/0)^gamma) limit
    if (std::isinf(e0)) return alpha == 0.0 ? 1.0 : HUGE_VAL;
    return std::pow(e0, alpha) * std::exp(-std::pow(e_star / e0, gamma_stretch));
}

double release_rate_field(double e0, double k0_minus, double b0, double alpha,
                          double gamma_stretch, double e_star) {
    if (!(e0 >= 0.0)) throw DomainError("release_rate_field: field must be >= 0");
    if (e0 == 0.0) return k0_minus;
    return k0_minus + b0 * tunneling_factor(e0, alpha, gamma_stretch, e_star);
}

void ElectricalSuppressionParams::validate() const {
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw DomainError("electrical suppression: p0 must be in [0, 1]");
    if (!(b >= 0.0)) throw DomainError("electrical suppression: b must be >= 0");
    if (!(gamma_stretch > 0.0))
        throw DomainError("electrical suppression: gamma_stretch must be > 0");
    if (!(e_star_kv_cm > 0.0)) throw DomainError("electrical suppression: e_star must be > 0");
    if (!std::isfinite(alpha)) throw DomainError("electrical suppression: alpha must be finite");
}

double occupancy_vs_field(double e0, const ElectricalSuppressionParams& p) {
    if (!(e0 >= 0.0)) throw DomainError("occupancy_vs_field: field must be >= 0");
    if (e0 == 0.0 || p.b == 0.0) return p.p0;
    return p.p0 / (1.0 + p.b * tunneling_factor(e0, p.alpha, p.gamma_stretch, p.e_star_kv_cm));
}

}  // namespace trapnoise
