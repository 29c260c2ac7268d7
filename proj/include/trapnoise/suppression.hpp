#pragma once

// Occupancy control. Optical: photo-generated carriers raise the capture rate
// linearly in pump power (saturating occupancy). Electrical: field-assisted
// tunneling raises the release rate (generalized Fowler-Nordheim form).

namespace trapnoise {

struct OpticalSuppressionParams {
    double p0 = 0.4;      ///< occupancy without pump
    double p_inf = 1.0;   ///< asymptotic occupancy at high power
    double p_sat_nw = 1.0;

    void validate() const;
};

/// Linear-in-power rates k+ = k0+ + alpha_c P, k- = k0- + alpha_r P.
struct MicroscopicOpticalRates {
    double k0_plus = 0.0;
    double k0_minus = 0.0;
    double alpha_c = 0.0;  ///< 1/(time nW)
    double alpha_r = 0.0;  ///< 1/(time nW)

    void validate() const;
};

/// p(P) = p0 + (p_inf - p0) P / (P + P_sat).
double occupancy_vs_power(double power_nw, const OpticalSuppressionParams& params);

OpticalSuppressionParams effective_from_microscopic(const MicroscopicOpticalRates& rates);

/// Occupancy straight from the linear rates; equals occupancy_vs_power on
/// the mapped parameters.
double occupancy_from_rates(double power_nw, const MicroscopicOpticalRates& rates);
double switching_time_from_rates(double power_nw, const MicroscopicOpticalRates& rates);

/// alpha_c = sigma_c v_th kappa, for callers holding the microscopic factors.
double capture_coefficient(double sigma_c, double v_th, double kappa);

struct CarrierGeneration {
    double eta_yield = 1.0;
    double photon_energy_mev = 3061.0;  ///< 405 nm pump
    double area_nm2 = 1.0;
    double thickness_nm = 1.0;
    double tau_r_s = 1.0e-9;

    void validate() const;
};

/// kappa in n = kappa P, nm^-3 per nW.
double carrier_density_coefficient(const CarrierGeneration& gen);
/// Steady free-carrier density eta tau_r P / (hbar omega A d), nm^-3.
double carrier_density(double power_nw, const CarrierGeneration& gen);

/// Characteristic tunneling field 4 sqrt(2 m*) Phi^{3/2} / (3 hbar q), kV/cm.
///
/// For Phi = 0.5 eV and m* = 0.16 m_e this evaluates to about 9.66e3 kV/cm.
/// Fits treat E* as a free parameter.
double characteristic_field(double trap_depth_ev, double effective_mass_ratio);

/// E0^alpha exp(-(E*/E0)^gamma); exactly 0 at E0 = 0.
double tunneling_factor(double e0_kv_cm, double alpha, double gamma_stretch, double e_star_kv_cm);

/// k- = k0- + B0 E0^alpha exp(-(E*/E0)^gamma).
double release_rate_field(double e0_kv_cm, double k0_minus, double b0, double alpha,
                          double gamma_stretch, double e_star_kv_cm);

struct ElectricalSuppressionParams {
    double p0 = 0.35;
    double b = 50.0;  ///< relative rate B = B0 / p0, against E0 in kV/cm
    double alpha = 0.2;
    double gamma_stretch = 1.0;
    double e_star_kv_cm = 800.0;

    void validate() const;
};

/// p(E0) = p0 / (1 + B E0^alpha exp(-(E*/E0)^gamma)).
double occupancy_vs_field(double e0_kv_cm, const ElectricalSuppressionParams& params);

}  // namespace trapnoise
