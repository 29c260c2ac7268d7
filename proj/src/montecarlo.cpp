#include "trapnoise/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "trapnoise/constants.hpp"
#include "trapnoise/errors.hpp"
#include "trapnoise/lineshape.hpp"
#include "trapnoise/rng.hpp"

namespace trapnoise {

std::string to_string(ControlKind kind) {
    return kind == ControlKind::power ? "power" : "voltage";
}

double ControlSweep::field_at(std::size_t i) const {
    if (kind == ControlKind::power) return 0.0;
    return std::abs(local_field_from_voltage(values.at(i), conversion).f_loc_kv_cm);
}

double ControlSweep::occupancy_at(std::size_t i) const {
    if (kind == ControlKind::power) return occupancy_vs_power(values.at(i), optical);
    return occupancy_vs_field(field_at(i), electrical);
}

void MCConfig::validate() const {
    std::vector<std::string> bad;
    if (n_geometries < 1) bad.emplace_back("mc.n_geometries (must be >= 1)");
    if (n_snapshots < 2) bad.emplace_back("mc.n_snapshots (must be >= 2)");
    if (geometry.n_traps < 1) bad.emplace_back("geometry.n_traps (must be >= 1)");
    if (!(geometry.r_min_nm > 0.0 && geometry.r_max_nm > geometry.r_min_nm))
        bad.emplace_back("geometry.r_min_nm/r_max_nm (need 0 < r_min < r_max)");
    if (!(geometry.epsilon_r >= 1.0)) bad.emplace_back("geometry.epsilon_r (must be >= 1)");
    if (sweep.values.empty()) bad.emplace_back("sweep.values (empty)");
    for (double v : sweep.values) {
        if (!std::isfinite(v) || (sweep.kind == ControlKind::power && v < 0.0)) {
            bad.emplace_back("sweep.values (non-finite or negative power)");
            break;
        }
    }
    try {
        if (sweep.kind == ControlKind::power) {
            sweep.optical.validate();
        } else {
            sweep.electrical.validate();
            sweep.conversion.validate();
        }
    } catch (const DomainError& e) {
        bad.emplace_back(std::string("suppression (") + e.what() + ")");
    }
    try {
        stark.validate();
    } catch (const DomainError& e) {
        bad.emplace_back(std::string("stark (") + e.what() + ")");
    }
    if (!(lambda0_nm > 0.0)) bad.emplace_back("lineshape.lambda0_nm (must be > 0)");
    if (!(gamma_lorentz >= 0.0)) bad.emplace_back("lineshape.gamma_lorentz_mev (must be >= 0)");
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "invalid MC configuration:";
        for (const auto& b : bad) msg << "\n  " << b;
        throw ConfigError(msg.str());
    }
}

std::uint64_t geometry_seed(std::uint64_t master, std::size_t g) {
    return derive_seed(master, g, 0);
}

std::uint64_t snapshot_seed(std::uint64_t master, std::size_t g, std::size_t sweep_index) {
    return derive_seed(master, g, sweep_index + 1);
}

namespace {

double shift_for_field(double e2, const StarkResponse& stark, bool polynomial) {
    if (!polynomial) return stark.beta * e2;
    return stark_shift(std::sqrt(e2), stark);
}

GeometrySnapshotMoments moments_of(std::vector<double>& samples) {
    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : samples) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    return {mean, m2 / (n - 1.0), m4 / n};
}

struct GeometryWork {
    const MCConfig& config;
    const std::vector<double>& fields;
    const std::vector<double>& probabilities;
    MCResult& result;

    void operator()(std::size_t g) const {
        const auto geometry = sample_trap_geometry(config.geometry, geometry_seed(config.master_seed, g));
        result.geometry_moments[g] = field_moments(geometry);

        const std::size_t n = geometry.n_traps();
        std::vector<double> fx(n);
        std::vector<double> fy(n);
        for (std::size_t i = 0; i < n; ++i) {
            fx[i] = geometry.traps[i].field_x();
            fy[i] = geometry.traps[i].field_y();
        }
        std::vector<double> samples(config.n_snapshots);
        const std::size_t n_points = fields.size();
        for (std::size_t k = 0; k < n_points; ++k) {
            Rng rng(snapshot_seed(config.master_seed, g, k));
            const double p = probabilities[k];
            const double e0 = fields[k];  // bias along +x
            for (auto& s : samples) {
                double ex = e0;
                double ey = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (rng.uniform() < p) {
                        ex += fx[i];
                        ey += fy[i];
                    }
                }
                s = shift_for_field(ex * ex + ey * ey, config.stark, config.polynomial_terms);
            }
            result.raw[k * config.n_geometries + g] = moments_of(samples);
        }
    }
};

double sample_sd(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

MCResult run_mc(const MCConfig& config) {
    config.validate();

    const std::size_t n_points = config.sweep.values.size();
    const std::size_t G = config.n_geometries;
    std::vector<double> fields(n_points);
    std::vector<double> probabilities(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        fields[k] = config.sweep.field_at(k);
        probabilities[k] = config.sweep.occupancy_at(k);
    }

    MCResult result;
    result.n_geometries = G;
    result.n_snapshots = config.n_snapshots;
    result.lambda0_nm = config.lambda0_nm;
    result.gamma_lorentz = config.gamma_lorentz;
    result.geometry_moments.resize(G);
    result.raw.resize(n_points * G);

    GeometryWork work{config, fields, probabilities, result};
    unsigned threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(G)));
    if (threads == 1) {
        for (std::size_t g = 0; g < G; ++g) work(g);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t g = next++; g < G; g = next++) work(g);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Reductions run in geometry-index order, so they are independent of the
    // thread schedule.
    const auto Gd = static_cast<double>(G);
    const auto nsnap = static_cast<double>(config.n_snapshots);
    result.points.reserve(n_points);
    std::vector<double> means(G);
    std::vector<double> vars(G);
    for (std::size_t k = 0; k < n_points; ++k) {
        double mean_acc = 0.0;
        double var_acc = 0.0;
        for (std::size_t g = 0; g < G; ++g) {
            const auto& m = result.raw[k * G + g];
            means[g] = m.mean;
            vars[g] = m.variance;
            mean_acc += m.mean;
            var_acc += m.variance;
        }
        MCPoint pt;
        pt.control = config.sweep.values[k];
        pt.e0_kv_cm = fields[k];
        pt.p = probabilities[k];
        pt.mean_shift = mean_acc / Gd;
        const double var = var_acc / Gd;
        pt.std_shift = std::sqrt(var);

        double se_mean = 0.0;
        double se_var = 0.0;
        if (G >= 2) {
            se_mean = sample_sd(means, pt.mean_shift) / std::sqrt(Gd);
            se_var = sample_sd(vars, var) / std::sqrt(Gd);
        } else {
            const auto& m = result.raw[k * G];
            se_mean = std::sqrt(m.variance / nsnap);
            se_var = std::sqrt(std::max(m.fourth_central - m.variance * m.variance, 0.0) / nsnap);
        }
        pt.stderr_mean = se_mean;
        pt.stderr_std = pt.std_shift > 0.0 ? se_var / (2.0 * pt.std_shift) : 0.0;
        pt.center_wavelength =
            config.lambda0_nm + energy_to_wavelength_shift(pt.mean_shift, config.lambda0_nm);
        pt.gaussian_fwhm = constants::gaussian_fwhm_per_sigma * pt.std_shift;
        result.points.push_back(pt);
    }
    return result;
}

ExactMoments brute_force_moments(const TrapGeometry& geometry, double p, double e0,
                                 double e0_angle, double beta) {
    const std::size_t n = geometry.n_traps();
    if (n > brute_force_max_traps) {
        std::ostringstream msg;
        msg << "brute_force_moments: " << n << " traps need 2^" << n
            << " configurations; enumeration is limited to N <= " << brute_force_max_traps
            << " (use run_mc for larger ensembles)";
        throw DomainError(msg.str());
    }
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("brute_force_moments: p must be in [0, 1]");

    std::vector<double> fx(n);
    std::vector<double> fy(n);
    for (std::size_t i = 0; i < n; ++i) {
        fx[i] = geometry.traps[i].field_x();
        fy[i] = geometry.traps[i].field_y();
    }
    std::vector<double> weight_by_count(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        weight_by_count[k] = std::pow(p, static_cast<double>(k)) *
                             std::pow(1.0 - p, static_cast<double>(n - k));

    const double bx = e0 * std::cos(e0_angle);
    const double by = e0 * std::sin(e0_angle);
    const std::uint64_t configs = std::uint64_t{1} << n;

    auto shift_of = [&](std::uint64_t mask, std::size_t& count) {
        double ex = bx;
        double ey = by;
        count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1U) {
                ex += fx[i];
                ey += fy[i];
                ++count;
            }
        }
        return beta * (ex * ex + ey * ey);
    };

    double mean = 0.0;
    std::size_t count = 0;
    for (std::uint64_t mask = 0; mask < configs; ++mask) {
        const double x = shift_of(mask, count);
        mean += weight_by_count[count] * x;
    }
    double var = 0.0;
    for (std::uint64_t mask = 0; mask < configs; ++mask) {
        const double d = shift_of(mask, count) - mean;
        var += weight_by_count[count] * d * d;
    }
    return {mean, var};
}

SnapshotEstimate sample_fixed_geometry(const TrapGeometry& geometry, double p, double e0,
                                       double e0_angle, double beta, std::size_t n_snapshots,
                                       std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample_fixed_geometry: p must be in [0, 1]");
    if (n_snapshots < 2) throw DomainError("sample_fixed_geometry: need at least 2 snapshots");
    const std::size_t n = geometry.n_traps();
    std::vector<double> fx(n);
    std::vector<double> fy(n);
    for (std::size_t i = 0; i < n; ++i) {
        fx[i] = geometry.traps[i].field_x();
        fy[i] = geometry.traps[i].field_y();
    }
    const double bx = e0 * std::cos(e0_angle);
    const double by = e0 * std::sin(e0_angle);
    Rng rng(seed);
    std::vector<double> samples(n_snapshots);
    for (auto& s : samples) {
        double ex = bx;
        double ey = by;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng.uniform() < p) {
                ex += fx[i];
                ey += fy[i];
            }
        }
        s = beta * (ex * ex + ey * ey);
    }
    const auto m = moments_of(samples);
    const auto ns = static_cast<double>(n_snapshots);
    SnapshotEstimate est;
    est.mean = m.mean;
    est.variance = m.variance;
    est.stderr_mean = std::sqrt(m.variance / ns);
    est.stderr_variance = std::sqrt(std::max(m.fourth_central - m.variance * m.variance, 0.0) / ns);
    return est;
}

std::vector<ShiftStatistics> analytic_reference(const MCConfig& config, const MCResult& result) {
    const std::size_t G = result.geometry_moments.size();
    if (G == 0) throw DomainError("analytic_reference: result has no geometries");
    double s2 = 0.0;
    double s4 = 0.0;
    double s2sq = 0.0;
    for (const auto& m : result.geometry_moments) {
        s2 += m.s2;
        s4 += m.s4;
        s2sq += m.s2 * m.s2;
    }
    const auto Gd = static_cast<double>(G);
    s2 /= Gd;
    s4 /= Gd;
    s2sq /= Gd;

    const double beta = config.stark.beta;
    std::vector<ShiftStatistics> out;
    out.reserve(result.points.size());
    for (const auto& pt : result.points) {
        const double p = pt.p;
        const double e0 = pt.e0_kv_cm;
        ShiftStatistics st;
        st.mu = beta * (e0 * e0 + p * s2);
        st.sigma2 = beta * beta *
                    (p * (1.0 - p) * (s4 + 2.0 * e0 * e0 * s2) + p * p * (1.0 - p * p) * (s2sq - s4));
        out.push_back(st);
    }
    return out;
}

std::vector<AgreementRow> agreement_report(const MCResult& result,
                                           const std::vector<ShiftStatistics>& analytic) {
    if (analytic.size() != result.points.size())
        throw DomainError("agreement_report: analytic table length differs from MC result");
    auto z = [](double diff, double se, double scale) {
        if (se > 0.0) return diff / se;
        // zero stderr: exact agreement expected up to rounding
        return std::abs(diff) <= 1e-12 * std::max(scale, 1e-300) ? 0.0 : HUGE_VAL;
    };
    std::vector<AgreementRow> rows;
    rows.reserve(analytic.size());
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        const auto& pt = result.points[k];
        AgreementRow row;
        row.control = pt.control;
        row.mc_mean = pt.mean_shift;
        row.analytic_mean = analytic[k].mu;
        row.z_mean = z(pt.mean_shift - analytic[k].mu, pt.stderr_mean, std::abs(analytic[k].mu) + 1.0);
        row.mc_std = pt.std_shift;
        row.analytic_std = analytic[k].sigma();
        row.z_std = z(pt.std_shift - row.analytic_std, pt.stderr_std, row.analytic_std + 1.0);
        rows.push_back(row);
    }
    return rows;
}

std::vector<SweepPoint> mc_to_sweep_table(const MCResult& result) {
    std::vector<SweepPoint> out;
    out.reserve(result.points.size());
    for (const auto& pt : result.points) {
        SweepPoint sp;
        sp.control = pt.control;
        sp.e0_kv_cm = pt.e0_kv_cm;
        sp.p = pt.p;
        sp.mu = pt.mean_shift;
        sp.sigma2 = pt.std_shift * pt.std_shift;
        sp.gaussian_fwhm = constants::gaussian_fwhm_per_sigma * pt.std_shift;
        sp.voigt_fwhm = voigt_fwhm_approx(sp.gaussian_fwhm, 2.0 * result.gamma_lorentz);
        sp.center_wavelength =
            result.lambda0_nm + energy_to_wavelength_shift(pt.mean_shift, result.lambda0_nm);
        out.push_back(sp);
    }
    return out;
}

}  // namespace trapnoise
