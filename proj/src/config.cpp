#include "trapnoise/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "trapnoise/errors.hpp"

namespace trapnoise {

using nlohmann::json;

namespace {

/// A JSON object being consumed; remembers which keys were read so that the
/// leftovers can be reported as unknown.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    const std::string& path() const { return path_; }
    std::string child(const std::string& key) const { return path_ + "." + key; }

    [[noreturn]] static void fail(const std::string& path, const std::string& what) {
        throw ConfigError(path + ": " + what);
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    Section section(const std::string& key) {
        seen_.insert(key);
        return Section(j_.at(key), child(key));
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return number_at(key);
    }

    double number_required(const std::string& key) {
        if (!has(key)) fail(child(key), "required field is missing");
        return number_at(key);
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) fail(child(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) fail(child(key), "expected a string");
        return v.get<std::string>();
    }

    std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            fail(child(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) fail(child(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number())
                fail(child(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(child(it.key()), "unknown key");
    }

private:
    double number_at(const std::string& key) const {
        const json& v = j_.at(key);
        if (!v.is_number()) fail(child(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(child(key), "expected a finite number");
        return d;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) Section::fail(path, what);
}

std::vector<double> parse_grid(Section& parent, const std::string& key) {
    const json& v = parent.raw(key);
    const std::string path = parent.child(key);
    std::vector<double> out;
    if (v.is_array()) {
        out = parent.numbers(key);
    } else if (v.is_object()) {
        Section g(v, path);
        const double start = g.number_required("start");
        const double stop = g.number_required("stop");
        if (g.has("step")) {
            const double step = g.number_required("step");
            require(step > 0.0, g.child("step"), "must be > 0");
            require(stop >= start, g.child("stop"), "must be >= start");
            const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
            require(n <= 1000000, path, "grid has too many points");
            for (std::size_t i = 0; i < n; ++i) out.push_back(start + step * static_cast<double>(i));
        } else {
            const auto n = g.unsigned_int("n", 0);
            require(n >= 1, g.child("n"), "give 'step' or 'n' >= 1");
            require(n <= 1000000, g.child("n"), "grid has too many points");
            for (std::size_t i = 0; i < n; ++i)
                out.push_back(n == 1 ? start
                                     : start + (stop - start) * static_cast<double>(i) /
                                                   static_cast<double>(n - 1));
        }
        g.finish();
    } else {
        Section::fail(path, "expected an array or {start, stop, step|n}");
    }
    require(!out.empty(), path, "sweep grid is empty");
    return out;
}

void parse_geometry(Section s, GeometrySpec& g) {
    g.n_traps = s.unsigned_int("n_traps", g.n_traps);
    g.r_min_nm = s.number("r_min_nm", g.r_min_nm);
    g.r_max_nm = s.number("r_max_nm", g.r_max_nm);
    g.epsilon_r = s.number("epsilon_r", g.epsilon_r);
    s.finish();
    require(g.n_traps >= 1, s.child("n_traps"), "must be >= 1");
    require(g.r_min_nm > 0.0, s.child("r_min_nm"), "must be > 0");
    require(g.r_max_nm > g.r_min_nm, s.child("r_max_nm"), "must exceed r_min_nm");
    require(g.epsilon_r >= 1.0, s.child("epsilon_r"), "must be >= 1");
}

void parse_conversion(Section s, FieldConversion& c) {
    c.gap_length_um = s.number("gap_length_um", c.gap_length_um);
    c.eta = s.number("eta", c.eta);
    c.epsilon_r = s.number("epsilon_r", c.epsilon_r);
    s.finish();
    require(c.gap_length_um > 0.0, s.child("gap_length_um"), "must be > 0");
    require(c.eta > 0.0 && c.eta <= 1.0, s.child("eta"), "must be in (0, 1]");
    require(c.epsilon_r >= 1.0, s.child("epsilon_r"), "must be >= 1");
}

void parse_suppression(Section s, ControlSweep& sweep) {
    const std::string kind = s.string("kind", "power");
    if (kind == "power") {
        sweep.kind = ControlKind::power;
    } else if (kind == "voltage") {
        sweep.kind = ControlKind::voltage;
    } else {
        Section::fail(s.child("kind"), "expected \"power\" or \"voltage\"");
    }
    if (s.has("values")) sweep.values = parse_grid(s, "values");
    if (s.has("optical")) {
        Section o = s.section("optical");
        auto& op = sweep.optical;
        op.p0 = o.number("p0", op.p0);
        op.p_inf = o.number("p_inf", op.p_inf);
        op.p_sat_nw = o.number("p_sat_nw", op.p_sat_nw);
        o.finish();
        require(op.p0 >= 0.0 && op.p0 <= 1.0, o.child("p0"), "must be in [0, 1]");
        require(op.p_inf >= 0.0 && op.p_inf <= 1.0, o.child("p_inf"), "must be in [0, 1]");
        require(op.p_sat_nw > 0.0, o.child("p_sat_nw"), "must be > 0");
    }
    if (s.has("electrical")) {
        Section e = s.section("electrical");
        auto& el = sweep.electrical;
        el.p0 = e.number("p0", el.p0);
        el.b = e.number("b", el.b);
        el.alpha = e.number("alpha", el.alpha);
        el.gamma_stretch = e.number("gamma_stretch", el.gamma_stretch);
        el.e_star_kv_cm = e.number("e_star_kv_cm", el.e_star_kv_cm);
        e.finish();
        require(el.p0 >= 0.0 && el.p0 <= 1.0, e.child("p0"), "must be in [0, 1]");
        require(el.b >= 0.0, e.child("b"), "must be >= 0");
        require(el.gamma_stretch > 0.0, e.child("gamma_stretch"), "must be > 0");
        require(el.e_star_kv_cm > 0.0, e.child("e_star_kv_cm"), "must be > 0");
    }
    if (s.has("conversion")) parse_conversion(s.section("conversion"), sweep.conversion);
    s.finish();
    if (sweep.kind == ControlKind::power) {
        for (double v : sweep.values)
            require(v >= 0.0, s.child("values"), "powers must be >= 0");
    }
}

void parse_stark(Section s, StarkResponse& r) {
    r.beta = s.number("beta", r.beta);
    r.dipole_d = s.number("dipole_d", r.dipole_d);
    r.c3 = s.number("c3", r.c3);
    r.c4 = s.number("c4", r.c4);
    r.heating_c = s.number("heating_c", r.heating_c);
    s.finish();
    require(r.heating_c >= 0.0, s.child("heating_c"), "must be >= 0");
}

void parse_moments(Section s, std::optional<BiasMoments>& m) {
    BiasMoments b;
    if (s.has("kappa_hat")) {
        b.s2 = s.number_required("s2");
        const double k = s.number_required("kappa_hat");
        require(k > 0.0 && k <= 1.0, s.child("kappa_hat"), "must be in (0, 1]");
        b.s4 = k * b.s2 * b.s2;
    } else {
        b.s2 = s.number_required("s2");
        b.s4 = s.number_required("s4");
    }
    s.finish();
    require(b.s2 > 0.0, s.child("s2"), "must be > 0");
    require(b.s4 > 0.0 && b.s4 <= b.s2 * b.s2 * (1.0 + 1e-12), s.child("s4"), "must be in (0, s2^2]");
    m = b;
}

void parse_mc(Section s, RunConfig& rc) {
    rc.n_geometries = s.unsigned_int("n_geometries", rc.n_geometries);
    rc.n_snapshots = s.unsigned_int("n_snapshots", rc.n_snapshots);
    rc.polynomial_terms = s.boolean("polynomial_terms", rc.polynomial_terms);
    rc.threads = static_cast<unsigned>(s.unsigned_int("threads", rc.threads));
    if (s.has("brute_force")) {
        Section b = s.section("brute_force");
        auto& bf = rc.brute_force;
        bf.enabled = b.boolean("enabled", true);
        bf.n_instances = b.unsigned_int("n_instances", bf.n_instances);
        bf.n_traps = b.unsigned_int("n_traps", bf.n_traps);
        bf.n_snapshots = b.unsigned_int("n_snapshots", bf.n_snapshots);
        bf.p = b.number("p", bf.p);
        bf.e0_kv_cm = b.number("e0_kv_cm", bf.e0_kv_cm);
        b.finish();
        require(bf.n_traps >= 1 && bf.n_traps <= brute_force_max_traps, b.child("n_traps"),
                "must be in [1, " + std::to_string(brute_force_max_traps) + "]");
        require(bf.n_instances >= 1, b.child("n_instances"), "must be >= 1");
        require(bf.n_snapshots >= 2, b.child("n_snapshots"), "must be >= 2");
        require(bf.p >= 0.0 && bf.p <= 1.0, b.child("p"), "must be in [0, 1]");
        require(bf.e0_kv_cm >= 0.0, b.child("e0_kv_cm"), "must be >= 0");
    }
    s.finish();
    require(rc.n_geometries >= 1, s.child("n_geometries"), "must be >= 1");
    require(rc.n_snapshots >= 2, s.child("n_snapshots"), "must be >= 2");
}

FitKind parse_fit_kind(const std::string& k, const std::string& path) {
    static const std::vector<std::pair<std::string, FitKind>> kinds{
        {"voigt", FitKind::voigt},
        {"double_voigt", FitKind::double_voigt},
        {"zeeman", FitKind::zeeman},
        {"stark", FitKind::stark},
        {"saturation", FitKind::saturation},
        {"polarization", FitKind::polarization},
        {"suppression_power", FitKind::suppression_power},
        {"suppression_field", FitKind::suppression_field},
    };
    for (const auto& [name, kind] : kinds)
        if (name == k) return kind;
    std::string all;
    for (const auto& [name, kind] : kinds) all += (all.empty() ? "" : ", ") + name;
    Section::fail(path, "unknown fit kind '" + k + "' (expected one of " + all + ")");
}

void parse_bounds(Section& s, const std::string& key, double& lo, double& hi) {
    if (!s.has(key)) return;
    const auto v = s.numbers(key);
    require(v.size() == 2 && v[0] < v[1], s.child(key), "expected [lower, upper] with lower < upper");
    lo = v[0];
    hi = v[1];
}

void parse_fit(Section s, FitConfig& fit) {
    fit.kind = parse_fit_kind(s.string("kind", ""), s.child("kind"));
    if (s.has("data")) {
        const json& d = s.raw("data");
        if (d.is_string()) {
            fit.data.push_back(d.get<std::string>());
        } else if (d.is_array()) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (!d[i].is_string())
                    Section::fail(s.child("data") + "[" + std::to_string(i) + "]", "expected a path");
                fit.data.push_back(d[i].get<std::string>());
            }
        } else {
            Section::fail(s.child("data"), "expected a path or an array of paths");
        }
    }
    if (s.has("fixed_gamma_mev")) {
        const double g = s.number_required("fixed_gamma_mev");
        require(g >= 0.0, s.child("fixed_gamma_mev"), "must be >= 0");
        fit.voigt.fixed_gamma = g;
        fit.double_voigt.fixed_gamma = g;
    }
    fit.stark.even_only = s.boolean("even_only", fit.stark.even_only);
    fit.stark.max_condition = s.number("max_condition", fit.stark.max_condition);
    if (s.has("max_iterations")) {
        const std::size_t it = s.unsigned_int("max_iterations", 500);
        require(it >= 1, s.child("max_iterations"), "must be >= 1");
        for (LsqOptions* o : {&fit.voigt.lsq, &fit.double_voigt.lsq, &fit.power.lsq, &fit.field.lsq})
            o->max_iterations = static_cast<int>(it);
    }

    auto& pw = fit.power;
    auto& fd = fit.field;
    const std::size_t n_max = s.unsigned_int("n_max", pw.n_max);
    require(n_max >= 1, s.child("n_max"), "must be >= 1");
    pw.n_max = fd.n_max = n_max;
    const bool normalized = s.boolean("normalized", false);
    pw.normalized = fd.normalized = normalized;
    const std::size_t n_starts = s.unsigned_int("n_starts", 0);
    if (n_starts) pw.n_starts = fd.n_starts = n_starts;

    pw.fix_p_inf = s.boolean("fix_p_inf", pw.fix_p_inf);
    pw.p_inf = s.number("p_inf", pw.p_inf);
    pw.center_weight = s.number("center_weight", pw.center_weight);
    require(pw.center_weight > 0.0, s.child("center_weight"), "must be > 0");
    const std::string units = s.string("center_units", "wavelength_nm");
    if (units == "wavelength_nm") {
        pw.center_units = CenterUnits::wavelength_nm;
    } else if (units == "energy_mev") {
        pw.center_units = CenterUnits::energy_mev;
    } else {
        Section::fail(s.child("center_units"), "expected \"wavelength_nm\" or \"energy_mev\"");
    }

    fd.free_alpha = s.boolean("free_alpha", fd.free_alpha);
    fd.free_gamma_stretch = s.boolean("free_gamma_stretch", fd.free_gamma_stretch);
    fd.alpha = s.number("alpha", fd.alpha);
    fd.gamma_stretch = s.number("gamma_stretch", fd.gamma_stretch);
    if (s.has("fixed_kappa_hat")) fd.fixed_kappa_hat = s.number_required("fixed_kappa_hat");
    if (s.has("fixed_beta_s2")) fd.fixed_beta_s2 = s.number_required("fixed_beta_s2");
    parse_bounds(s, "p0_bounds", fd.p0_min, fd.p0_max);
    parse_bounds(s, "log10_b_bounds", fd.log10_b_min, fd.log10_b_max);
    parse_bounds(s, "e_star_bounds", fd.e_star_min, fd.e_star_max);
    parse_bounds(s, "beta_s2_bounds", fd.beta_s2_min, fd.beta_s2_max);
    fd.heating_max = s.number("heating_max", fd.heating_max);
    s.finish();
}

}  // namespace

std::string to_string(FitKind kind) {
    switch (kind) {
        case FitKind::voigt: return "voigt";
        case FitKind::double_voigt: return "double_voigt";
        case FitKind::zeeman: return "zeeman";
        case FitKind::stark: return "stark";
        case FitKind::saturation: return "saturation";
        case FitKind::polarization: return "polarization";
        case FitKind::suppression_power: return "suppression_power";
        case FitKind::suppression_field: return "suppression_field";
    }
    return "unknown";
}

MCConfig RunConfig::mc_config() const {
    MCConfig mc;
    mc.n_geometries = n_geometries;
    mc.n_snapshots = n_snapshots;
    mc.geometry = geometry;
    mc.sweep = sweep;
    mc.stark = stark;
    mc.polynomial_terms = polynomial_terms;
    mc.master_seed = master_seed;
    mc.lambda0_nm = lambda0_nm;
    mc.gamma_lorentz = gamma_lorentz;
    mc.threads = threads;
    return mc;
}

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("$: invalid JSON: ") + e.what());
    }
    RunConfig rc;
    rc.base_dir = base_dir;
    try {
        Section root(doc, "$");
        if (!root.has("version")) Section::fail("$.version", "required field is missing");
        const json& v = root.raw("version");
        if (!v.is_number_integer() || v.get<long long>() != config_version)
            Section::fail("$.version", "unsupported version (expected " + std::to_string(config_version) + ")");
        rc.command = root.string("command", "");
        if (!rc.command.empty() && rc.command != "sweep" && rc.command != "mc" && rc.command != "fit")
            Section::fail("$.command", "expected \"sweep\", \"mc\" or \"fit\"");
        rc.name = root.string("name", "");
        rc.master_seed = root.unsigned_int("master_seed", rc.master_seed);
        rc.out_dir = root.string("out_dir", rc.out_dir);
        // Optional free-text note, ignored by every command.
        root.string("description", "");

        if (root.has("geometry")) parse_geometry(root.section("geometry"), rc.geometry);
        if (root.has("suppression")) parse_suppression(root.section("suppression"), rc.sweep);
        if (root.has("stark")) parse_stark(root.section("stark"), rc.stark);
        if (root.has("lineshape")) {
            Section l = root.section("lineshape");
            rc.lambda0_nm = l.number("lambda0_nm", rc.lambda0_nm);
            rc.gamma_lorentz = l.number("gamma_lorentz_mev", rc.gamma_lorentz);
            l.finish();
            require(rc.lambda0_nm > 0.0, l.child("lambda0_nm"), "must be > 0");
            require(rc.gamma_lorentz >= 0.0, l.child("gamma_lorentz_mev"), "must be >= 0");
        }
        if (root.has("moments")) parse_moments(root.section("moments"), rc.moments);
        if (root.has("mc")) parse_mc(root.section("mc"), rc);
        if (root.has("fit")) parse_fit(root.section("fit"), rc.fit);
        root.finish();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("$: ") + e.what());
    }

    // Propagate shared settings into the fit options.
    rc.fit.power.gamma_lorentz = rc.gamma_lorentz;
    rc.fit.power.lambda0_nm = rc.lambda0_nm;
    rc.fit.power.seed = rc.master_seed;
    rc.fit.field.gamma_lorentz = rc.gamma_lorentz;
    rc.fit.field.conversion = rc.sweep.conversion;
    rc.fit.field.beta = rc.stark.beta;
    rc.fit.field.seed = rc.master_seed;
    return rc;
}

}  // namespace trapnoise
