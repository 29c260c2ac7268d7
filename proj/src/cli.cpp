#include "trapnoise/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trapnoise/analytics.hpp"
#include "trapnoise/config.hpp"
#include "trapnoise/errors.hpp"
#include "trapnoise/fitting.hpp"
#include "trapnoise/io.hpp"
#include "trapnoise/montecarlo.hpp"
#include "trapnoise/rng.hpp"

namespace trapnoise {

namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::vector<std::string> data;
};

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunConfig load_config(const Overrides& ov) {
    const std::string text = read_text_file(ov.config_path);
    const fs::path base = fs::path(ov.config_path).parent_path();
    RunConfig rc = parse_run_config(text, base.empty() ? "." : base.string());
    if (ov.seed) {
        rc.master_seed = *ov.seed;
        rc.fit.power.seed = *ov.seed;
        rc.fit.field.seed = *ov.seed;
    }
    if (ov.threads) rc.threads = *ov.threads;
    if (!ov.out_dir.empty()) rc.out_dir = ov.out_dir;
    return rc;
}

std::string output_path(const RunConfig& rc, const std::string& file) {
    const fs::path dir(rc.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + rc.out_dir + "': " + ec.message());
    const std::string prefix = rc.name.empty() ? "" : rc.name + "_";
    return (dir / (prefix + file)).string();
}

template <typename Writer>
std::string write_with(const RunConfig& rc, const std::string& file, Writer&& writer) {
    std::ostringstream os;
    writer(os);
    const std::string path = output_path(rc, file);
    write_text_file(path, os.str());
    return path;
}

BiasMoments sweep_moments(const RunConfig& rc) {
    if (rc.moments) return *rc.moments;
    const ExpectedMoments em = expected_moments(rc.geometry);
    return {em.s2, em.s4};
}

void require_grid(const RunConfig& rc) {
    if (rc.sweep.values.empty())
        throw ConfigError("$.suppression.values: sweep grid is empty or missing");
}

std::string control_name(ControlKind k) {
    return k == ControlKind::power ? "power_nw" : "voltage_v";
}

// --- sweep ------------------------------------------------------------------------

int cmd_sweep(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    require_grid(rc);
    const BiasMoments mom = sweep_moments(rc);
    std::vector<SweepPoint> sweep;
    try {
        if (rc.sweep.kind == ControlKind::power) {
            const PowerMoments pm{rc.stark.beta * mom.s2, mom.s4 / (mom.s2 * mom.s2)};
            sweep = power_sweep(rc.sweep.values, rc.sweep.optical, pm, rc.gamma_lorentz, rc.lambda0_nm);
        } else {
            sweep = field_sweep(rc.sweep.values, rc.sweep.conversion, rc.sweep.electrical, mom, rc.stark,
                                rc.gamma_lorentz, rc.lambda0_nm);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("$: ") + e.what());
    }
    const auto csv = write_with(rc, "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, sweep); });
    const auto js = write_with(rc, "sweep.json", [&](std::ostream& os) {
        os << sweep_to_json(sweep, control_name(rc.sweep.kind));
    });
    err << "sweep: wrote " << csv << " and " << js << "\n";

    const auto norm = normalized_linewidth(sweep);
    std::size_t imin = 0;
    for (std::size_t i = 1; i < norm.size(); ++i)
        if (norm[i] < norm[imin]) imin = i;
    out << "sweep (" << to_string(rc.sweep.kind) << "): " << sweep.size() << " points\n"
        << "  S2 = " << format_double(mom.s2) << " (kV/cm)^2, kappa_hat = "
        << format_double(mom.s4 / (mom.s2 * mom.s2)) << "\n"
        << "  narrowest line at control = " << format_double(sweep[imin].control)
        << ", FWHM = " << format_double(sweep[imin].voigt_fwhm) << " meV ("
        << format_double(norm[imin]) << " of the reference point)\n";
    return exit_ok;
}

// --- mc ---------------------------------------------------------------------------

std::vector<SweepPoint> analytic_table(const MCResult& result, const std::vector<ShiftStatistics>& an) {
    std::vector<SweepPoint> rows;
    for (std::size_t i = 0; i < an.size(); ++i) {
        SweepPoint sp;
        sp.control = result.points[i].control;
        sp.e0_kv_cm = result.points[i].e0_kv_cm;
        sp.p = result.points[i].p;
        sp.mu = an[i].mu;
        sp.sigma2 = an[i].sigma2;
        sp.gaussian_fwhm = an[i].gaussian_fwhm();
        sp.voigt_fwhm = voigt_fwhm_approx(sp.gaussian_fwhm, 2.0 * result.gamma_lorentz);
        sp.center_wavelength = result.lambda0_nm + energy_to_wavelength_shift(sp.mu, result.lambda0_nm);
        rows.push_back(sp);
    }
    return rows;
}

int cmd_mc(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    require_grid(rc);
    const MCConfig cfg = rc.mc_config();
    cfg.validate();
    const Clock clock;
    err << "mc: " << cfg.n_geometries << " geometries x " << cfg.n_snapshots << " snapshots x "
        << cfg.sweep.values.size() << " points\n";
    const MCResult result = run_mc(cfg);
    err << "mc: sampling done in " << std::fixed << std::setprecision(2) << clock.seconds() << " s\n"
        << std::defaultfloat;

    const auto analytic = analytic_reference(cfg, result);
    const auto rows = agreement_report(result, analytic);
    const std::string control = control_name(cfg.sweep.kind);
    write_with(rc, "mc.csv", [&](std::ostream& os) { write_mc_csv(os, result); });
    write_with(rc, "mc.json", [&](std::ostream& os) { os << mc_to_json(result, control); });
    write_with(rc, "analytic.csv",
               [&](std::ostream& os) { write_sweep_csv(os, analytic_table(result, analytic)); });
    write_with(rc, "agreement.csv", [&](std::ostream& os) { write_agreement_csv(os, rows); });

    double zm = 0.0;
    double zs = 0.0;
    for (const auto& r : rows) {
        zm = std::max(zm, std::abs(r.z_mean));
        zs = std::max(zs, std::abs(r.z_std));
    }
    out << "mc (" << to_string(cfg.sweep.kind) << "): " << rows.size() << " points, "
        << cfg.n_geometries << " geometries, " << cfg.n_snapshots << " snapshots\n"
        << "  max |MC - analytic| / stderr: mean " << format_double(zm) << ", std "
        << format_double(zs) << "\n";
    if (cfg.polynomial_terms && !cfg.stark.quadratic_only())
        out << "  note: polynomial Stark terms are on; the analytic reference is quadratic only\n";

    if (rc.brute_force.enabled) {
        const auto& bf = rc.brute_force;
        std::ostringstream os;
        os << "instance,n_traps,p,e0_kv_cm,exact_mean_mev,mc_mean_mev,z_mean,exact_variance_mev2,"
              "mc_variance_mev2,z_variance\n";
        double bz = 0.0;
        for (std::size_t i = 0; i < bf.n_instances; ++i) {
            const auto geo = sample_trap_geometry(bf.n_traps, rc.geometry.r_min_nm, rc.geometry.r_max_nm,
                                                  rc.geometry.epsilon_r, derive_seed(rc.master_seed, 0xb1, i));
            const auto exact = brute_force_moments(geo, bf.p, bf.e0_kv_cm, 0.0, cfg.stark.beta);
            const auto est = sample_fixed_geometry(geo, bf.p, bf.e0_kv_cm, 0.0, cfg.stark.beta,
                                                   bf.n_snapshots, derive_seed(rc.master_seed, 0xb2, i));
            const double z1 = est.stderr_mean > 0 ? (est.mean - exact.mean) / est.stderr_mean : 0.0;
            const double z2 =
                est.stderr_variance > 0 ? (est.variance - exact.variance) / est.stderr_variance : 0.0;
            bz = std::max({bz, std::abs(z1), std::abs(z2)});
            os << i << ',' << bf.n_traps << ',' << format_double(bf.p) << ',' << format_double(bf.e0_kv_cm)
               << ',' << format_double(exact.mean) << ',' << format_double(est.mean) << ','
               << format_double(z1) << ',' << format_double(exact.variance) << ','
               << format_double(est.variance) << ',' << format_double(z2) << '\n';
        }
        const auto path = output_path(rc, "brute_force.csv");
        write_text_file(path, os.str());
        out << "  brute force: " << bf.n_instances << " instances of N = " << bf.n_traps
            << ", max |MC - exact| / stderr = " << format_double(bz) << "\n";
    }
    err << "mc: outputs in " << rc.out_dir << "\n";
    return exit_ok;
}

// --- fit --------------------------------------------------------------------------

std::vector<std::string> data_paths(const RunConfig& rc, const Overrides& ov) {
    if (!ov.data.empty()) return ov.data;
    std::vector<std::string> out;
    for (const auto& d : rc.fit.data) {
        const fs::path p(d);
        out.push_back(p.is_absolute() ? d : (fs::path(rc.base_dir) / p).string());
    }
    return out;
}

template <typename T, typename Reader>
T read_data(const std::string& path, Reader&& reader) {
    std::istringstream is(read_text_file(path));
    try {
        return reader(is);
    } catch (const DataError& e) {
        std::ostringstream msg;
        msg << path;
        if (e.line() > 0) msg << ":" << e.line();
        msg << ": " << e.what();
        throw DataError(msg.str(), e.line());
    }
}

MeasurementSeries series_at(const std::string& path) {
    return read_data<MeasurementSeries>(path, [](std::istream& is) { return read_series_csv(is); });
}

SpectrumRecord spectrum_at(const std::string& path) {
    return read_data<SpectrumRecord>(path, [](std::istream& is) { return read_spectrum_csv(is); });
}

void need_files(const std::vector<std::string>& files, std::size_t lo, std::size_t hi, FitKind kind) {
    if (files.size() < lo || files.size() > hi) {
        std::ostringstream msg;
        msg << "$.fit.data: fit kind '" << to_string(kind) << "' takes " << lo;
        if (hi > lo) msg << " to " << hi;
        msg << " data file(s), got " << files.size();
        throw ConfigError(msg.str());
    }
}

FitResult zeeman_pair(const FitResult& h, const FitResult& v) {
    FitResult res;
    res.model = "zeeman_pair";
    const double gh = h.value("g_effective");
    const double gv = v.value("g_effective");
    const GFactors g = compose_g_factors(gh, gv, h.uncertainty("g_effective"), v.uncertainty("g_effective"));
    res.parameters.push_back({"g_h", gh, h.uncertainty("g_effective")});
    res.parameters.push_back({"g_v", gv, v.uncertainty("g_effective")});
    res.parameters.push_back({"g_e", g.g_e, g.g_e_err, false, true});
    res.parameters.push_back({"three_g_hh", g.three_g_hh, g.three_g_hh_err, false, true});
    res.residual_norm = std::hypot(h.residual_norm, v.residual_norm);
    res.converged = h.converged && v.converged;
    res.status = "linear least squares";
    res.provenance = "closed form, two polarizations";
    for (const auto& f : h.flags) res.flags.push_back("h:" + f);
    for (const auto& f : v.flags) res.flags.push_back("v:" + f);
    return res;
}

int cmd_fit(const RunConfig& rc, const Overrides& ov, std::ostream& out, std::ostream& err) {
    const auto files = data_paths(rc, ov);
    const FitKind kind = rc.fit.kind;
    FitResult res;
    switch (kind) {
        case FitKind::voigt:
            need_files(files, 1, 1, kind);
            res = fit_voigt(spectrum_at(files[0]), rc.fit.voigt);
            break;
        case FitKind::double_voigt:
            need_files(files, 1, 1, kind);
            res = fit_double_voigt_splitting(spectrum_at(files[0]), rc.fit.double_voigt);
            break;
        case FitKind::zeeman:
            need_files(files, 1, 2, kind);
            res = fit_zeeman(series_at(files[0]));
            if (files.size() == 2) res = zeeman_pair(res, fit_zeeman(series_at(files[1])));
            break;
        case FitKind::stark:
            need_files(files, 1, 1, kind);
            res = fit_stark_polynomial(series_at(files[0]), rc.sweep.conversion, rc.fit.stark);
            break;
        case FitKind::saturation:
            need_files(files, 1, 1, kind);
            res = fit_saturation(series_at(files[0]));
            break;
        case FitKind::polarization:
            need_files(files, 1, 1, kind);
            res = fit_polarization(series_at(files[0]));
            break;
        case FitKind::suppression_power: {
            need_files(files, 1, 2, kind);
            const MeasurementSeries centers = files.size() == 2 ? series_at(files[1]) : MeasurementSeries{};
            res = fit_suppression_power(series_at(files[0]), centers, rc.fit.power);
            break;
        }
        case FitKind::suppression_field:
            need_files(files, 1, 1, kind);
            res = fit_suppression_field(series_at(files[0]), rc.fit.field);
            break;
    }
    const auto path = output_path(rc, "fit.json");
    write_text_file(path, fit_result_to_json(res));
    err << "fit: wrote " << path << "\n";

    out << "fit " << res.model << ": " << (res.converged ? "converged" : "NOT converged") << " ("
        << res.status << ", " << res.n_iterations << " iterations)\n";
    for (const auto& p : res.parameters) {
        out << "  " << std::left << std::setw(28) << p.name << std::right << " = "
            << format_double(p.value);
        if (p.fixed) {
            out << " (fixed)";
        } else {
            out << " +- " << format_double(p.uncertainty);
        }
        if (p.derived) out << " (derived)";
        out << "\n";
    }
    out << "  residual norm = " << format_double(res.residual_norm) << "\n";
    if (!res.flags.empty()) {
        out << "  flags:";
        for (const auto& f : res.flags) out << " " << f;
        out << "\n";
    }
    return res.converged ? exit_ok : exit_not_converged;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Charge-trap spectral diffusion toolkit: analytic sweeps, Monte Carlo, fits", "trapnoise"};
    app.require_subcommand(1);
    Overrides ov;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", ov.config_path, "JSON run configuration")->required();
        sub->add_option("-o,--out", ov.out_dir, "output directory (overrides out_dir)");
        sub->add_option("--seed", seed, "master seed (overrides master_seed)");
        sub->add_option("--threads", threads, "worker thread cap (0 = all cores)");
    };
    CLI::App* sweep = app.add_subcommand("sweep", "closed-form power or voltage sweep");
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo run with analytic overlay");
    CLI::App* fit = app.add_subcommand("fit", "fit a model to CSV data");
    add_common(sweep);
    add_common(mc);
    add_common(fit);
    fit->add_option("--data", ov.data, "data file(s); overrides fit.data in the config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }
    for (CLI::App* sub : {sweep, mc, fit}) {
        if (sub->count("--seed")) ov.seed = seed;
        if (sub->count("--threads")) ov.threads = threads;
    }

    try {
        const RunConfig rc = load_config(ov);
        if (*sweep) return cmd_sweep(rc, out, err);
        if (*mc) return cmd_mc(rc, out, err);
        return cmd_fit(rc, ov, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const DomainError& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return exit_config;
    }
}

}  // namespace trapnoise
