#include "trapnoise/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "trapnoise/constants.hpp"
#include "trapnoise/errors.hpp"
#include "trapnoise/rng.hpp"

namespace trapnoise {

using constants::pi;

double Trap::field_x() const { return -field_kv_cm * std::cos(theta_rad); }
double Trap::field_y() const { return -field_kv_cm * std::sin(theta_rad); }

std::vector<double> TrapGeometry::field_magnitudes() const {
    std::vector<double> f;
    f.reserve(traps.size());
    for (const auto& t : traps) f.push_back(t.field_kv_cm);
    return f;
}

void TrapGeometry::validate() const {
    if (!(r_min_nm > 0.0) || !(r_max_nm >= r_min_nm))
        throw DomainError("trap geometry: need 0 < r_min <= r_max");
    if (!(epsilon_r >= 1.0)) throw DomainError("trap geometry: epsilon_r must be >= 1");
    if (traps.empty()) throw DomainError("trap geometry: no traps");
    for (const auto& t : traps) {
        if (t.radius_nm < r_min_nm || t.radius_nm > r_max_nm)
            throw DomainError("trap geometry: radius outside annulus");
        if (!(t.theta_rad >= 0.0 && t.theta_rad < 2.0 * pi))
            throw DomainError("trap geometry: angle outside [0, 2pi)");
        if (!(t.field_kv_cm > 0.0) || !std::isfinite(t.field_kv_cm))
            throw DomainError("trap geometry: non-positive field magnitude");
    }
}

void GeometrySpec::validate() const {
    if (n_traps == 0) throw DomainError("geometry: n_traps must be >= 1");
    if (!(r_min_nm > 0.0) || !(r_max_nm > r_min_nm))
        throw DomainError("geometry: need 0 < r_min < r_max");
    if (!(epsilon_r >= 1.0)) throw DomainError("geometry: epsilon_r must be >= 1");
}

double trap_field_magnitude(double r_nm, double epsilon_r) {
    if (!(r_nm > 0.0)) throw DomainError("trap_field_magnitude: r must be > 0");
    if (!(epsilon_r >= 1.0)) throw DomainError("trap_field_magnitude: epsilon_r must be >= 1");
    return constants::coulomb_v_nm / (epsilon_r * r_nm * r_nm) * constants::kv_cm_per_v_nm;
}

TrapGeometry sample_trap_geometry(std::size_t n_traps, double r_min_nm, double r_max_nm,
                                  double epsilon_r, std::uint64_t seed) {
    GeometrySpec spec{n_traps, r_min_nm, r_max_nm, epsilon_r};
    spec.validate();

    TrapGeometry g;
    g.r_min_nm = r_min_nm;
    g.r_max_nm = r_max_nm;
    g.epsilon_r = epsilon_r;
    g.traps.reserve(n_traps);

    Rng rng(seed);
    const double r2lo = r_min_nm * r_min_nm;
    const double r2span = r_max_nm * r_max_nm - r2lo;
    for (std::size_t i = 0; i < n_traps; ++i) {
        Trap t;
        // density proportional to r dr: invert the CDF of r^2
        t.radius_nm = std::clamp(std::sqrt(r2lo + rng.uniform() * r2span), r_min_nm, r_max_nm);
        t.theta_rad = 2.0 * pi * rng.uniform();
        t.field_kv_cm = trap_field_magnitude(t.radius_nm, epsilon_r);
        g.traps.push_back(t);
    }
    return g;
}

TrapGeometry sample_trap_geometry(const GeometrySpec& spec, std::uint64_t seed) {
    return sample_trap_geometry(spec.n_traps, spec.r_min_nm, spec.r_max_nm, spec.epsilon_r, seed);
}

FieldMoments field_moments(std::span<const double> f) {
    FieldMoments m;
    for (double v : f) {
        const double v2 = v * v;
        m.s2 += v2;
        m.s4 += v2 * v2;
    }
    m.kappa_hat = m.s2 > 0.0 ? m.s4 / (m.s2 * m.s2) : 0.0;
    return m;
}

FieldMoments field_moments(const TrapGeometry& geometry) {
    const auto f = geometry.field_magnitudes();
    return field_moments(f);
}

double kappa_hat_annulus(double a, std::size_t n_traps) {
    if (n_traps == 0) throw DomainError("kappa_hat_annulus: n_traps must be >= 1");
    if (!(a >= 1.0)) throw DomainError("kappa_hat_annulus: a = r_max/r_min must be >= 1");
    const auto n = static_cast<double>(n_traps);
    if (a == 1.0) return 1.0 / n;
    return (a * a + 1.0 + 1.0 / (a * a)) / (3.0 * n);
}

ExpectedMoments expected_moments(const GeometrySpec& spec) {
    spec.validate();
    const double r = spec.r_min_nm;
    const double R = spec.r_max_nm;
    // field = c / rho^2 with rho area-uniform on [r, R]
    const double c = constants::coulomb_v_nm / spec.epsilon_r * constants::kv_cm_per_v_nm;
    const double c2 = c * c;
    const double ef2 = c2 / (r * r * R * R);
    const double ef4 = c2 * c2 * (std::pow(r, -6.0) - std::pow(R, -6.0)) / (3.0 * (R * R - r * r));
    const auto n = static_cast<double>(spec.n_traps);

    ExpectedMoments m;
    m.s2 = n * ef2;
    m.s4 = n * ef4;
    m.s2_squared = n * ef4 + n * (n - 1.0) * ef2 * ef2;
    return m;
}

double effective_bohr_radius(double epsilon_r, double mass_ratio) {
    if (!(epsilon_r > 0.0) || !(mass_ratio > 0.0))
        throw DomainError("effective_bohr_radius: arguments must be positive");
    return constants::bohr_radius_h_nm * epsilon_r / mass_ratio;
}

void FieldConversion::validate() const {
    std::ostringstream bad;
    if (!(gap_length_um > 0.0)) bad << " gap_length_um";
    if (!(eta > 0.0 && eta <= 1.0)) bad << " eta";
    if (!(epsilon_r >= 1.0)) bad << " epsilon_r";
    if (!bad.str().empty()) throw DomainError("field conversion: invalid" + bad.str());
}

double FieldConversion::local_per_volt() const {
    return (epsilon_r + 2.0) / 3.0 * eta / gap_length_um * constants::kv_cm_per_v_um;
}

LocalField local_field_from_voltage(double volts, const FieldConversion& conv) {
    conv.validate();
    LocalField out;
    out.f_ext_kv_cm = conv.eta * volts / conv.gap_length_um * constants::kv_cm_per_v_um;
    out.f_loc_kv_cm = (conv.epsilon_r + 2.0) / 3.0 * out.f_ext_kv_cm;
    return out;
}

void StarkResponse::validate() const {
    if (!std::isfinite(beta) || !std::isfinite(dipole_d) || !std::isfinite(c3) ||
        !std::isfinite(c4))
        throw DomainError("stark response: coefficients must be finite");
    if (!(heating_c >= 0.0)) throw DomainError("stark response: heating_c must be >= 0");
}

double stark_shift(double f, const StarkResponse& r) {
    return f * (r.dipole_d + f * (r.beta + f * (r.c3 + f * r.c4)));
}

double mirror_visibility(double lambda0_nm, double gap_nm, double n, double k) {
    if (!(lambda0_nm > 0.0)) throw DomainError("mirror_visibility: lambda0 must be > 0");
    if (!(gap_nm > 0.0)) throw DomainError("mirror_visibility: gap must be > 0");
    const std::complex<double> index(n, k);
    const std::complex<double> r = (index - 1.0) / (index + 1.0);
    const double mag = std::abs(r);
    const double delta = std::arg(r);
    const double phi = 2.0 * pi * gap_nm / lambda0_nm;
    return 2.0 * mag * std::cos(phi + delta) / (1.0 + mag * mag);
}

}  // namespace trapnoise
