#pragma once

// Trap ensembles, Coulomb fields at the emitter, field moments, the
// voltage-to-local-field conversion, the Stark response polynomial and the
// two-mirror polarization visibility.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace trapnoise {

/// A charge trap in the quantum-well plane, polar coordinates about the
/// emitter. field_kv_cm is the magnitude of the field it produces at the
/// emitter when charged.
struct Trap {
    double radius_nm = 0.0;
    double theta_rad = 0.0;
    double field_kv_cm = 0.0;

    /// In-plane field vector at the emitter. Points from the trap towards the
    /// emitter, i.e. along theta + pi.
    double field_x() const;
    double field_y() const;
};

struct TrapGeometry {
    double r_min_nm = 0.0;
    double r_max_nm = 0.0;
    double epsilon_r = 1.0;
    std::vector<Trap> traps;

    std::size_t n_traps() const { return traps.size(); }
    std::vector<double> field_magnitudes() const;

    /// Throws DomainError if an invariant is violated.
    void validate() const;
};

/// Sampling recipe for an annulus of traps.
struct GeometrySpec {
    std::size_t n_traps = 18;
    double r_min_nm = 3.0;
    double r_max_nm = 5.0;
    double epsilon_r = 8.8;

    void validate() const;
};

struct FieldMoments {
    double s2 = 0.0;         ///< sum f_i^2, (kV/cm)^2
    double s4 = 0.0;         ///< sum f_i^4, (kV/cm)^4
    double kappa_hat = 0.0;  ///< s4 / s2^2
};

/// Closed-form ensemble expectations for N traps placed area-uniformly in
/// the annulus: E[S2], E[S4] and E[S2^2].
struct ExpectedMoments {
    double s2 = 0.0;
    double s4 = 0.0;
    double s2_squared = 0.0;
};

/// Coulomb field magnitude e / (4 pi eps0 eps_r r^2) in kV/cm.
double trap_field_magnitude(double r_nm, double epsilon_r);

/// Area-uniform radii, uniform angles; deterministic in seed.
TrapGeometry sample_trap_geometry(std::size_t n_traps, double r_min_nm, double r_max_nm,
                                  double epsilon_r, std::uint64_t seed);
TrapGeometry sample_trap_geometry(const GeometrySpec& spec, std::uint64_t seed);

FieldMoments field_moments(const TrapGeometry& geometry);
FieldMoments field_moments(std::span<const double> field_magnitudes);

/// kappa_hat ~ (a^2 + 1 + a^-2) / (3 N) for a = r_max / r_min. a == 1 returns
/// the thin-shell limit 1/N.
double kappa_hat_annulus(double a, std::size_t n_traps);

ExpectedMoments expected_moments(const GeometrySpec& spec);

/// Effective hydrogenic Bohr radius a_H eps_r m_e / m*, nm.
double effective_bohr_radius(double epsilon_r, double mass_ratio);

// --- electrodes ---------------------------------------------------------

struct FieldConversion {
    double gap_length_um = 1.0;
    double eta = 0.911;
    double epsilon_r = 8.8;

    void validate() const;
    /// Local (Lorentz) field per applied volt, kV/cm/V.
    double local_per_volt() const;
};

struct LocalField {
    double f_ext_kv_cm = 0.0;
    double f_loc_kv_cm = 0.0;
};

/// F_ext = eta V / L, F_loc = (eps_r + 2)/3 F_ext. Signed.
LocalField local_field_from_voltage(double volts, const FieldConversion& conv);

// --- Stark response -------------------------------------------------------

/// Polynomial Stark response, all coefficients in meV and powers of cm/kV.
struct StarkResponse {
    double beta = 2.6e-6;     ///< quadratic (polarizability)
    double dipole_d = 0.0;    ///< linear
    double c3 = 0.0;
    double c4 = 0.0;
    double heating_c = 0.0;   ///< additive C E0^2 broadening of the Gaussian FWHM

    bool quadratic_only() const { return dipole_d == 0.0 && c3 == 0.0 && c4 == 0.0; }
    void validate() const;
};

/// d f + beta f^2 + c3 f^3 + c4 f^4, meV.
double stark_shift(double field_kv_cm, const StarkResponse& resp);

// --- polarization between two mirrors --------------------------------------

/// Visibility 2|r| cos(phi + delta) / (1 + |r|^2) for a dipole midway between
/// two metal faces separated by gap_nm, with complex index n + i k.
double mirror_visibility(double lambda0_nm, double gap_nm, double n, double k);

}  // namespace trapnoise
