#pragma once

// Monte Carlo verification engine: independent trap geometries, stationary
// occupancy snapshots per geometry, and the exact 2^N enumeration oracle.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "trapnoise/analytics.hpp"
#include "trapnoise/geometry.hpp"
#include "trapnoise/shift_statistics.hpp"
#include "trapnoise/suppression.hpp"

namespace trapnoise {

enum class ControlKind { power, voltage };

std::string to_string(ControlKind kind);

struct ControlSweep {
    ControlKind kind = ControlKind::power;
    std::vector<double> values;
    OpticalSuppressionParams optical;
    ElectricalSuppressionParams electrical;
    FieldConversion conversion;

    /// Bias field (kV/cm, magnitude) and occupancy at sweep index i.
    double field_at(std::size_t i) const;
    double occupancy_at(std::size_t i) const;
};

struct MCConfig {
    std::size_t n_geometries = 200;
    std::size_t n_snapshots = 2000;
    GeometrySpec geometry;
    ControlSweep sweep;
    StarkResponse stark{1.44e-6};
    /// Include d, c3, c4 in the per-snapshot shift (the closed forms assume
    /// a quadratic response).
    bool polynomial_terms = false;
    std::uint64_t master_seed = 1;
    double lambda0_nm = 440.0;
    /// Lorentzian HWHM used when composing Voigt widths in sweep tables.
    double gamma_lorentz = 0.0;
    /// Worker threads; 0 uses hardware concurrency. Results do not depend on it.
    unsigned threads = 0;

    /// Throws ConfigError listing every offending field.
    void validate() const;
};

struct MCPoint {
    double control = 0.0;
    double e0_kv_cm = 0.0;
    double p = 0.0;
    double mean_shift = 0.0;   ///< meV, average of per-geometry means
    double std_shift = 0.0;    ///< meV, sqrt of average within-geometry variance
    double stderr_mean = 0.0;
    double stderr_std = 0.0;
    double center_wavelength = 0.0;
    double gaussian_fwhm = 0.0;
};

struct GeometrySnapshotMoments {
    double mean = 0.0;
    double variance = 0.0;       ///< unbiased
    double fourth_central = 0.0;
};

struct MCResult {
    std::vector<MCPoint> points;
    /// Field moments of every sampled geometry.
    std::vector<FieldMoments> geometry_moments;
    /// Row-major [point][geometry] snapshot moments.
    std::vector<GeometrySnapshotMoments> raw;
    std::size_t n_geometries = 0;
    std::size_t n_snapshots = 0;
    double lambda0_nm = 440.0;
    double gamma_lorentz = 0.0;

    const GeometrySnapshotMoments& raw_at(std::size_t point, std::size_t geometry) const {
        return raw[point * n_geometries + geometry];
    }
};

MCResult run_mc(const MCConfig& config);

/// Seeds used by run_mc. Geometry g is shared by all sweep points; the
/// snapshots of (g, point) come from their own stream.
std::uint64_t geometry_seed(std::uint64_t master, std::size_t geometry_index);
std::uint64_t snapshot_seed(std::uint64_t master, std::size_t geometry_index,
                            std::size_t sweep_index);

struct ExactMoments {
    double mean = 0.0;
    double variance = 0.0;
};

inline constexpr std::size_t brute_force_max_traps = 20;

/// Exact mean and variance of beta |E0 + sum s_i f_i|^2 by enumerating all 2^N
/// occupancy configurations. The bias vector has magnitude e0 and direction
/// e0_angle_rad.
ExactMoments brute_force_moments(const TrapGeometry& geometry, double p, double e0_kv_cm,
                                 double e0_angle_rad, double beta);

struct SnapshotEstimate {
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased
    double stderr_mean = 0.0;
    double stderr_variance = 0.0;
};

/// Snapshot Monte Carlo on one fixed geometry, the sampled counterpart of
/// brute_force_moments.
SnapshotEstimate sample_fixed_geometry(const TrapGeometry& geometry, double p, double e0_kv_cm,
                                       double e0_angle_rad, double beta, std::size_t n_snapshots,
                                       std::uint64_t seed);

/// Closed-form statistics evaluated on the sampled geometry ensemble: the
/// linear moments S2, S4 and S2^2 are replaced by their ensemble averages.
std::vector<ShiftStatistics> analytic_reference(const MCConfig& config, const MCResult& result);

struct AgreementRow {
    double control = 0.0;
    double mc_mean = 0.0;
    double analytic_mean = 0.0;
    double z_mean = 0.0;  ///< (mc - analytic) / stderr
    double mc_std = 0.0;
    double analytic_std = 0.0;
    double z_std = 0.0;
};

std::vector<AgreementRow> agreement_report(const MCResult& result,
                                           const std::vector<ShiftStatistics>& analytic);

/// MC statistics as sweep rows (mean -> center wavelength, std -> FWHM).
std::vector<SweepPoint> mc_to_sweep_table(const MCResult& result);

}  // namespace trapnoise
