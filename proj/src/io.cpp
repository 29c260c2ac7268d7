#include "trapnoise/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "trapnoise/errors.hpp"

namespace trapnoise {

using nlohmann::json;

namespace {

constexpr int json_indent = 2;

json number(double v) {
    // nlohmann writes non-finite numbers as null; keep the intent explicit.
    if (std::isfinite(v)) return v;
    return nullptr;
}

double number_or_inf(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    return ec == std::errc() && ptr == last;
}

json sweep_point_json(const SweepPoint& pt) {
    return json{{"control", number(pt.control)},
                {"e0_kv_cm", number(pt.e0_kv_cm)},
                {"p", number(pt.p)},
                {"mu_mev", number(pt.mu)},
                {"sigma2_mev2", number(pt.sigma2)},
                {"fwhm_gaussian_mev", number(pt.gaussian_fwhm)},
                {"fwhm_voigt_mev", number(pt.voigt_fwhm)},
                {"center_nm", number(pt.center_wavelength)}};
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw IoError("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("error while writing '" + path + "'");
}

// --- geometry -------------------------------------------------------------------

std::string geometry_to_json(const TrapGeometry& g) {
    json traps = json::array();
    for (const auto& t : g.traps)
        traps.push_back({{"r_nm", t.radius_nm}, {"theta_rad", t.theta_rad}, {"f_kv_cm", t.field_kv_cm}});
    json j{{"n_traps", g.n_traps()},
           {"r_min_nm", g.r_min_nm},
           {"r_max_nm", g.r_max_nm},
           {"epsilon_r", g.epsilon_r},
           {"traps", traps}};
    return j.dump(json_indent) + "\n";
}

TrapGeometry geometry_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        TrapGeometry g;
        g.r_min_nm = j.at("r_min_nm").get<double>();
        g.r_max_nm = j.at("r_max_nm").get<double>();
        g.epsilon_r = j.at("epsilon_r").get<double>();
        for (const auto& t : j.at("traps")) {
            Trap tr;
            tr.radius_nm = t.at("r_nm").get<double>();
            tr.theta_rad = t.at("theta_rad").get<double>();
            tr.field_kv_cm = t.contains("f_kv_cm") ? t.at("f_kv_cm").get<double>()
                                                   : trap_field_magnitude(tr.radius_nm, g.epsilon_r);
            g.traps.push_back(tr);
        }
        if (j.contains("n_traps") && j.at("n_traps").get<std::size_t>() != g.traps.size())
            throw DataError("geometry JSON: n_traps does not match the trap list");
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw DataError(std::string("geometry JSON: ") + e.what());
    } catch (const DomainError& e) {
        throw DataError(std::string("geometry JSON: ") + e.what());
    }
}

// --- sweeps and MC ------------------------------------------------------------------

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& sweep) {
    os << "control,e0_kv_cm,p,mu_mev,sigma2_mev2,fwhm_voigt_mev,center_nm\n";
    for (const auto& pt : sweep) {
        os << format_double(pt.control) << ',' << format_double(pt.e0_kv_cm) << ','
           << format_double(pt.p) << ',' << format_double(pt.mu) << ',' << format_double(pt.sigma2)
           << ',' << format_double(pt.voigt_fwhm) << ',' << format_double(pt.center_wavelength)
           << '\n';
    }
}

std::string sweep_to_json(const std::vector<SweepPoint>& sweep, const std::string& control) {
    json pts = json::array();
    for (const auto& pt : sweep) pts.push_back(sweep_point_json(pt));
    json j{{"control", control}, {"points", pts}};
    return j.dump(json_indent) + "\n";
}

void write_mc_csv(std::ostream& os, const MCResult& result) {
    const auto table = mc_to_sweep_table(result);
    os << "control,e0_kv_cm,p,mu_mev,sigma2_mev2,fwhm_voigt_mev,center_nm,std_mev,"
          "stderr_mean_mev,stderr_std_mev,fwhm_gaussian_mev\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& pt = table[i];
        const auto& mc = result.points[i];
        os << format_double(pt.control) << ',' << format_double(pt.e0_kv_cm) << ','
           << format_double(pt.p) << ',' << format_double(pt.mu) << ',' << format_double(pt.sigma2)
           << ',' << format_double(pt.voigt_fwhm) << ',' << format_double(pt.center_wavelength)
           << ',' << format_double(mc.std_shift) << ',' << format_double(mc.stderr_mean) << ','
           << format_double(mc.stderr_std) << ',' << format_double(mc.gaussian_fwhm) << '\n';
    }
}

std::string mc_to_json(const MCResult& result, const std::string& control) {
    const auto table = mc_to_sweep_table(result);
    json pts = json::array();
    for (std::size_t i = 0; i < table.size(); ++i) {
        json p = sweep_point_json(table[i]);
        const auto& mc = result.points[i];
        p["std_mev"] = number(mc.std_shift);
        p["stderr_mean_mev"] = number(mc.stderr_mean);
        p["stderr_std_mev"] = number(mc.stderr_std);
        pts.push_back(p);
    }
    json geo = json::array();
    for (const auto& m : result.geometry_moments)
        geo.push_back({{"s2", m.s2}, {"s4", m.s4}, {"kappa_hat", m.kappa_hat}});
    json j{{"control", control},
           {"n_geometries", result.n_geometries},
           {"n_snapshots", result.n_snapshots},
           {"lambda0_nm", result.lambda0_nm},
           {"gamma_lorentz_mev", result.gamma_lorentz},
           {"points", pts},
           {"geometry_moments", geo}};
    return j.dump(json_indent) + "\n";
}

void write_agreement_csv(std::ostream& os, const std::vector<AgreementRow>& rows) {
    os << "control,mc_mean_mev,analytic_mean_mev,z_mean,mc_std_mev,analytic_std_mev,z_std\n";
    for (const auto& r : rows) {
        os << format_double(r.control) << ',' << format_double(r.mc_mean) << ','
           << format_double(r.analytic_mean) << ',' << format_double(r.z_mean) << ','
           << format_double(r.mc_std) << ',' << format_double(r.analytic_std) << ','
           << format_double(r.z_std) << '\n';
    }
}

// --- fit results ------------------------------------------------------------------

std::string fit_result_to_json(const FitResult& fit) {
    json params = json::object();
    json unc = json::object();
    json details = json::array();
    for (const auto& p : fit.parameters) {
        params[p.name] = number(p.value);
        unc[p.name] = number(p.uncertainty);
        details.push_back({{"name", p.name},
                           {"value", number(p.value)},
                           {"uncertainty", number(p.uncertainty)},
                           {"fixed", p.fixed},
                           {"derived", p.derived}});
    }
    json j{{"model", fit.model},
           {"parameters", params},
           {"uncertainties", unc},
           {"parameter_details", details},
           {"residual_norm", number(fit.residual_norm)},
           {"gradient_norm", number(fit.gradient_norm)},
           {"n_iterations", fit.n_iterations},
           {"converged", fit.converged},
           {"status", fit.status},
           {"provenance", fit.provenance},
           {"flags", fit.flags}};
    return j.dump(json_indent) + "\n";
}

FitResult fit_result_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        FitResult fit;
        fit.model = j.at("model").get<std::string>();
        for (const auto& d : j.at("parameter_details")) {
            FitParameter p;
            p.name = d.at("name").get<std::string>();
            p.value = d.at("value").is_null() ? std::nan("") : d.at("value").get<double>();
            p.uncertainty = number_or_inf(d.at("uncertainty"));
            p.fixed = d.at("fixed").get<bool>();
            p.derived = d.at("derived").get<bool>();
            fit.parameters.push_back(p);
        }
        fit.residual_norm = number_or_inf(j.at("residual_norm"));
        fit.gradient_norm = number_or_inf(j.at("gradient_norm"));
        fit.n_iterations = j.at("n_iterations").get<int>();
        fit.converged = j.at("converged").get<bool>();
        fit.status = j.at("status").get<std::string>();
        fit.provenance = j.at("provenance").get<std::string>();
        fit.flags = j.at("flags").get<std::vector<std::string>>();
        return fit;
    } catch (const json::exception& e) {
        throw DataError(std::string("fit result JSON: ") + e.what());
    }
}

// --- spectra and series --------------------------------------------------------------

void write_spectrum_csv(std::ostream& os, const SpectrumRecord& s) {
    os << "# axis=" << to_string(s.axis) << '\n';
    if (s.noise) {
        os << "# noise=" << (s.noise->type == NoiseType::poisson ? "poisson" : "gaussian") << ':'
           << format_double(s.noise->scale) << '\n';
    }
    os << "x,intensity\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        os << format_double(s.x[i]) << ',' << format_double(s.intensity[i]) << '\n';
}

SpectrumRecord read_spectrum_csv(std::istream& is) {
    SpectrumRecord s;
    std::string line;
    long lineno = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const std::string body = trim(t.substr(1));
            if (body.rfind("axis=", 0) == 0) {
                try {
                    s.axis = spectrum_axis_from_string(trim(body.substr(5)));
                } catch (const DataError& e) {
                    throw DataError(std::string("spectrum CSV: ") + e.what(), lineno);
                }
            } else if (body.rfind("noise=", 0) == 0) {
                const std::string spec = trim(body.substr(6));
                const auto colon = spec.find(':');
                NoiseModel nm;
                const std::string type = spec.substr(0, colon);
                if (type == "poisson") {
                    nm.type = NoiseType::poisson;
                } else if (type == "gaussian") {
                    nm.type = NoiseType::gaussian;
                } else {
                    throw DataError("spectrum CSV: unknown noise type '" + type + "'", lineno);
                }
                if (colon != std::string::npos && !parse_double(trim(spec.substr(colon + 1)), nm.scale))
                    throw DataError("spectrum CSV: bad noise scale", lineno);
                s.noise = nm;
            }
            continue;
        }
        const auto f = split_fields(t);
        double a = 0.0;
        double b = 0.0;
        if (f.size() == 2 && parse_double(f[0], a) && parse_double(f[1], b)) {
            s.x.push_back(a);
            s.intensity.push_back(b);
            continue;
        }
        if (!header_seen && s.x.empty()) {
            header_seen = true;
            continue;
        }
        throw DataError("spectrum CSV: expected 'x,intensity' numbers, got '" + t + "'", lineno);
    }
    if (s.x.empty()) throw DataError("spectrum CSV: no data rows", lineno);
    s.validate();
    return s;
}

std::string spectrum_to_json(const SpectrumRecord& s) {
    json noise = nullptr;
    if (s.noise)
        noise = {{"type", s.noise->type == NoiseType::poisson ? "poisson" : "gaussian"},
                 {"scale", s.noise->scale}};
    json j{{"axis", to_string(s.axis)}, {"x", s.x}, {"intensity", s.intensity}, {"noise", noise}};
    return j.dump(json_indent) + "\n";
}

MeasurementSeries read_series_csv(std::istream& is) {
    MeasurementSeries s;
    std::string line;
    long lineno = 0;
    bool header_seen = false;
    std::size_t width = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto f = split_fields(t);
        std::vector<double> vals;
        bool ok = f.size() == 2 || f.size() == 3;
        for (std::size_t i = 0; ok && i < f.size(); ++i) {
            double v = 0.0;
            ok = parse_double(f[i], v);
            vals.push_back(v);
        }
        if (!ok) {
            if (!header_seen && s.x.empty()) {
                header_seen = true;
                continue;
            }
            throw DataError("series CSV: expected 2 or 3 numeric columns (x,y[,y_err]), got '" + t + "'",
                            lineno);
        }
        if (width == 0) width = vals.size();
        if (vals.size() != width)
            throw DataError("series CSV: inconsistent column count", lineno);
        if (width == 3 && !(vals[2] > 0.0))
            throw DataError("series CSV: y_err must be positive", lineno);
        s.x.push_back(vals[0]);
        s.y.push_back(vals[1]);
        if (width == 3) s.y_err.push_back(vals[2]);
    }
    if (s.x.empty()) throw DataError("series CSV: no data rows", lineno);
    return s;
}

}  // namespace trapnoise
