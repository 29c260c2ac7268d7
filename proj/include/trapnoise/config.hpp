#pragma once

// Run configuration for the command-line tool. JSON with a required
// "version"; unknown keys are rejected and every error names the offending
// field path (e.g. "$.mc.n_snapshots").

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trapnoise/analytics.hpp"
#include "trapnoise/fitting.hpp"
#include "trapnoise/geometry.hpp"
#include "trapnoise/montecarlo.hpp"

namespace trapnoise {

inline constexpr int config_version = 1;

struct BruteForceConfig {
    bool enabled = false;
    std::size_t n_instances = 50;
    std::size_t n_traps = 8;
    std::size_t n_snapshots = 100000;
    double p = 0.35;
    double e0_kv_cm = 0.0;
};

enum class FitKind {
    voigt,
    double_voigt,
    zeeman,
    stark,
    saturation,
    polarization,
    suppression_power,
    suppression_field
};

std::string to_string(FitKind kind);

struct FitConfig {
    FitKind kind = FitKind::voigt;
    /// Data files, resolved against the config file's directory.
    std::vector<std::string> data;
    VoigtFitOptions voigt;
    DoubleVoigtOptions double_voigt;
    StarkFitOptions stark;
    PowerSuppressionOptions power;
    FieldSuppressionOptions field;
};

struct RunConfig {
    int version = config_version;
    std::string command;  ///< sweep | mc | fit
    std::string name;     ///< output file prefix
    std::uint64_t master_seed = 1;
    std::string out_dir = ".";
    std::string base_dir = ".";  ///< directory of the config file

    GeometrySpec geometry;
    ControlSweep sweep;
    StarkResponse stark{2.6e-6};
    double lambda0_nm = 440.0;
    double gamma_lorentz = default_gamma_lorentz_mev;

    /// Sweep moments; the annulus expectations of the geometry section when
    /// absent.
    std::optional<BiasMoments> moments;

    std::size_t n_geometries = 200;
    std::size_t n_snapshots = 2000;
    bool polynomial_terms = false;
    unsigned threads = 0;
    BruteForceConfig brute_force;

    FitConfig fit;

    /// The Monte Carlo configuration implied by this run.
    MCConfig mc_config() const;
};

/// Parses and validates a configuration document. base_dir is recorded for
/// resolving relative data paths.
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir = ".");

}  // namespace trapnoise
