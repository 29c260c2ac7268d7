// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Tolerances are fixed; nothing here is tuned per seed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fit_fixtures.hpp"
#include "test_support.hpp"
#include "trapnoise/analytics.hpp"
#include "trapnoise/cli.hpp"
#include "trapnoise/constants.hpp"
#include "trapnoise/fitting.hpp"
#include "trapnoise/geometry.hpp"
#include "trapnoise/io.hpp"
#include "trapnoise/lineshape.hpp"
#include "trapnoise/montecarlo.hpp"
#include "trapnoise/rng.hpp"

using namespace trapnoise;
namespace fs = std::filesystem;
using constants::pi;

namespace {

int n_failed = 0;

void report(const std::string& id, bool pass, const std::string& what, const std::string& detail) {
    if (!pass) ++n_failed;
    std::cout << (pass ? "PASS " : "FAIL ") << id << "  " << what << "  [" << detail << "]" << std::endl;
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<double> mc_powers{0.0, 0.1, 0.2, 0.4, 0.7, 1.0, 1.5, 2.0, 3.0, 4.5, 6.0, 8.0, 10.0, 15.0, 20.0};
const GeometrySpec mc_geometry{50, 3.0, 8.0, 8.8};

// 3.3e6 V/m of local field per applied volt.
FieldConversion mc_conversion() {
    FieldConversion c;
    c.gap_length_um = 1.0 / 3.3;
    c.eta = 1.0;
    c.epsilon_r = 1.0;
    return c;
}

struct McCheck {
    double max_z = 0.0;
    double seconds = 0.0;
};

McCheck run_and_compare(const MCConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_mc(cfg);
    McCheck out;
    out.seconds = seconds_since(t0);
    for (const auto& row : agreement_report(r, analytic_reference(cfg, r)))
        out.max_z = std::max({out.max_z, std::abs(row.z_mean), std::abs(row.z_std)});
    return out;
}

// --- AC1 ------------------------------------------------------------------------

void ac1() {
    bool ok = true;
    std::ostringstream d;
    for (double p0 : {0.4, 0.9}) {
        MCConfig c;
        c.geometry = mc_geometry;
        c.sweep.kind = ControlKind::power;
        c.sweep.values = mc_powers;
        c.sweep.optical = OpticalSuppressionParams{p0, 1.0, 1.5};
        c.stark = StarkResponse{1.44e-6};
        c.lambda0_nm = 440.0;
        const auto m = run_and_compare(c);
        ok = ok && m.max_z <= 3.0 && m.seconds < 60.0;
        d << "p0=" << p0 << ": max|z|=" << fmt(m.max_z, 3) << " in " << fmt(m.seconds, 3) << " s; ";
    }
    report("AC1", ok, "power sweep (50 traps), MC vs closed form within 3 stderr, < 60 s", d.str());
}

// --- AC2 ------------------------------------------------------------------------

void ac2() {
    bool ok = true;
    std::ostringstream d;
    std::vector<double> volts;
    for (int v = 0; v <= 60; v += 4) volts.push_back(v);
    const ElectricalSuppressionParams base{0.4, 50.0, 0.2, 1.0, 800.0};
    for (double p0 : {0.4, 0.9}) {
        MCConfig c;
        c.geometry = mc_geometry;
        c.sweep.kind = ControlKind::voltage;
        c.sweep.values = volts;
        c.sweep.electrical = base;
        c.sweep.electrical.p0 = p0;
        c.sweep.conversion = mc_conversion();
        c.stark = StarkResponse{1.44e-6};
        const auto m = run_and_compare(c);
        ok = ok && m.max_z <= 3.0;
        d << "p0=" << p0 << ": max|z|=" << fmt(m.max_z, 3) << "; ";
    }

    // Shape on the closed form with the expected geometry moments.
    const auto em = expected_moments(mc_geometry);
    std::vector<double> fine;
    for (int i = 0; i <= 1200; ++i) fine.push_back(0.05 * i);
    auto widths = [&](double p0) {
        auto el = base;
        el.p0 = p0;
        return field_sweep(fine, mc_conversion(), el, BiasMoments{em.s2, em.s4}, StarkResponse{1.44e-6});
    };
    const auto hi = widths(0.9);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < hi.size(); ++i)
        if (hi[i].voigt_fwhm > hi[imax].voigt_fwhm) imax = i;
    std::size_t imin_after = imax;
    for (std::size_t i = imax; i < hi.size(); ++i)
        if (hi[i].voigt_fwhm < hi[imin_after].voigt_fwhm) imin_after = i;
    const bool broadens_then_narrows = imax > 0 && imin_after > imax && imin_after + 1 < hi.size();
    ok = ok && broadens_then_narrows;
    d << "p0=0.9 peak at " << fmt(fine[imax], 3) << " V (p=" << fmt(hi[imax].p, 3) << "), dip at "
      << fmt(fine[imin_after], 3) << " V; ";

    // Large field: once the traps are emptied (p < 1% of p0) the 2 E0^2 S2
    // coupling makes the width grow monotonically.
    for (double p0 : {0.4, 0.9}) {
        const auto sw = widths(p0);
        std::size_t start = 0;
        while (start < sw.size() && sw[start].p > 0.01 * p0) ++start;
        bool mono = start + 10 < sw.size();
        for (std::size_t i = start + 1; mono && i < sw.size(); ++i) mono = sw[i].voigt_fwhm > sw[i - 1].voigt_fwhm;
        ok = ok && mono;
        d << "p0=" << p0 << " monotone broadening from " << fmt(fine[std::min(start, sw.size() - 1)], 3)
          << " V: " << (mono ? "yes" : "no") << "; ";
    }
    report("AC2", ok, "voltage sweep (B=50, E*=800), MC vs closed form within 3 stderr, line shape", d.str());
}

// --- AC3 ------------------------------------------------------------------------

void ac3() {
    Rng rng(303);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 9);
        const auto g = sample_trap_geometry(n, 3.0, 8.0, 8.8, derive_seed(303, static_cast<std::uint64_t>(i)));
        const double p = rng.uniform(0.05, 0.95);
        const double e0 = i % 2 ? rng.uniform(0.0, 400.0) : 0.0;
        const double angle = rng.uniform(0.0, 2.0 * pi);
        const auto ex = brute_force_moments(g, p, e0, angle, 1.44e-6);
        const auto mc = sample_fixed_geometry(g, p, e0, angle, 1.44e-6, 200000, derive_seed(304, i));
        worst = std::max({worst, std::abs(mc.mean - ex.mean) / mc.stderr_mean,
                          std::abs(mc.variance - ex.variance) / mc.stderr_variance});
    }

    const GeometrySpec spec{8, 3.0, 5.0, 8.8};
    const double beta = 2.6e-6, p = 0.35;
    const std::size_t n_geo = 4000;
    std::vector<double> exact(n_geo), formula(n_geo);
    for (std::size_t i = 0; i < n_geo; ++i) {
        const auto g = sample_trap_geometry(spec, derive_seed(305, i));
        const auto m = field_moments(g);
        exact[i] = brute_force_moments(g, p, 0.0, 0.0, beta).variance;
        formula[i] = variance_shift(0.0, p, m.s2, m.s4, beta);
    }
    const double se = std::sqrt(testsupport::variance(exact) / static_cast<double>(n_geo));
    const double z = (testsupport::mean(exact) - testsupport::mean(formula)) / se;
    report("AC3", worst <= 4.0 && std::abs(z) <= 3.0, "enumeration oracle vs MC and vs closed form",
           "50 instances N<=10: max|z|=" + fmt(worst, 3) + "; geometry-averaged variance z=" + fmt(z, 3));
}

// --- AC4 ------------------------------------------------------------------------

double angle_mean(const std::function<double(double)>& f, int n = 64) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(2.0 * pi * i / n);
    return s / n;
}

void ac4() {
    const double fi = 140.0, fj = 95.0, fk = 70.0, e0 = 210.0;
    // u_i = 2 E0 . f_i, b_ij = 2 f_i . f_j with the angles measured from E0.
    auto u = [&](double ti) { return 2.0 * e0 * fi * std::cos(ti); };
    auto b = [](double fa, double fb, double ta, double tb) { return 2.0 * fa * fb * std::cos(ta - tb); };
    auto mean2 = [](const std::function<double(double, double)>& f) {
        return angle_mean([&](double a) { return angle_mean([&](double c) { return f(a, c); }); });
    };
    auto mean3 = [&](const std::function<double(double, double, double)>& f) {
        return angle_mean([&](double a) { return mean2([&](double c, double e) { return f(a, c, e); }); }, 32);
    };
    const double scale_u = e0 * fi, scale_b = fi * fj;
    const double m_u = angle_mean(u) / scale_u;
    const double m_u2 = angle_mean([&](double t) { return u(t) * u(t); }) / (2.0 * fi * fi * e0 * e0) - 1.0;
    const double m_b = mean2([&](double a, double c) { return b(fi, fj, a, c); }) / scale_b;
    const double m_b2 =
        mean2([&](double a, double c) { return std::pow(b(fi, fj, a, c), 2); }) / (2.0 * fi * fi * fj * fj) - 1.0;
    const double m_mixed =
        mean3([&](double a, double c, double e) { return b(fi, fj, a, c) * b(fi, fk, a, e); }) / (scale_b * fi * fk);
    const double m_ub = mean2([&](double a, double c) { return u(a) * b(fi, fj, a, c); }) / (scale_u * scale_b);
    const double worst = std::max({std::abs(m_u), std::abs(m_u2), std::abs(m_b), std::abs(m_b2),
                                   std::abs(m_mixed), std::abs(m_ub)});
    report("AC4", worst <= 1e-10, "isotropic angle averages (0, 2f^2E^2, 0, 2fi^2fj^2, 0)",
           "worst relative deviation " + fmt(worst, 3));
}

// --- AC5 ------------------------------------------------------------------------

void ac5() {
    double worst = 0.0, worst_ratio = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double ratio = std::pow(10.0, -2.0 + 4.0 * i / 400.0);
        const double L = 1.0, G = ratio;
        const double exact = voigt_fwhm_exact(G / constants::gaussian_fwhm_per_sigma, 0.5 * L);
        const double err = std::abs(voigt_fwhm_approx(G, L) / exact - 1.0);
        if (err > worst) worst = err, worst_ratio = ratio;
    }
    const bool fwhm_ok = worst <= 2e-4;

    using cplx = std::complex<double>;
    const double e0 = std::abs(faddeeva(cplx(0.0, 0.0)) - 1.0);
    const double e1 = std::abs(faddeeva(cplx(0.0, 1.0)).real() - 0.427584);
    const double e2 = std::abs(faddeeva(cplx(1.0, 0.0)).real() - 0.367879);
    const bool spot_ok = e0 <= 1e-6 && e1 <= 1e-6 && e2 <= 1e-6;

    // Area over the whole line via x = gamma tan(t).
    double worst_area = 0.0;
    for (auto [s, g] : {std::pair{0.1, 0.05}, {0.05, 0.3}, {0.3, 0.01}, {0.08, 0.064}}) {
        const VoigtParams vp{0.0, s, g, 1.0};
        const double area = testsupport::simpson(
            [&](double t) { return voigt(g * std::tan(t), vp) * g / std::pow(std::cos(t), 2); }, -0.5 * pi + 1e-9,
            0.5 * pi - 1e-9, 200000);
        worst_area = std::max(worst_area, std::abs(area - 1.0));
    }
    const bool area_ok = worst_area <= 1e-3;
    report("AC5", fwhm_ok && spot_ok && area_ok, "Voigt FWHM within 0.02%, Faddeeva spot values, unit area",
           "FWHM worst " + fmt(100.0 * worst, 3) + "% at G/L=" + fmt(worst_ratio, 3) + (fwhm_ok ? "" : " (over 0.02%)") +
               "; spot errors " + fmt(std::max({e0, e1, e2}), 2) + "; area error " + fmt(worst_area, 2));
}

// --- AC6 ------------------------------------------------------------------------

void ac6() {
    Rng rng(606);
    bool bounds_ok = true;
    for (int i = 0; i < 5000; ++i) {
        const std::size_t n = 1 + rng.next() % 100;
        const auto m = field_moments(sample_trap_geometry(n, 3.0, rng.uniform(3.0, 20.0), 8.8, rng.next()));
        const double nn = static_cast<double>(n);
        bounds_ok = bounds_ok && m.kappa_hat >= 1.0 / nn * (1.0 - 1e-12) && m.kappa_hat <= 1.0 + 1e-12;
    }

    const GeometrySpec spec{18, 3.0, 5.0, 8.8};
    const std::size_t n_geo = 20000;
    std::vector<double> s2(n_geo), s4(n_geo), kh(n_geo);
    for (std::size_t i = 0; i < n_geo; ++i) {
        const auto m = field_moments(sample_trap_geometry(spec, derive_seed(607, i)));
        s2[i] = m.s2;
        s4[i] = m.s4;
        kh[i] = m.kappa_hat;
    }
    using namespace testsupport;
    const double target = kappa_hat_annulus(5.0 / 3.0, 18);
    // ratio of ensemble moments, delta-method standard error
    const double a = mean(s4), b = mean(s2), nn = static_cast<double>(n_geo);
    const double r = a / (b * b);
    const double var_r = (variance(s4) / (b * b * b * b) - 4.0 * a * covariance(s4, s2) / std::pow(b, 5) +
                          4.0 * a * a * variance(s2) / std::pow(b, 6)) / nn;
    const double z = (r - target) / std::sqrt(var_r);
    const double z_mean_of_ratios = (mean(kh) - target) / std::sqrt(variance(kh) / nn);
    report("AC6", bounds_ok && std::abs(z) <= 3.0, "kappa_hat bounds and ensemble value 0.07663",
           std::string("bounds ") + (bounds_ok ? "hold" : "violated") + "; E[S4]/E[S2]^2=" + fmt(r, 5) +
               " vs " + fmt(target, 5) + " (z=" + fmt(z, 3) + "); diagnostic mean of per-geometry kappa_hat=" +
               fmt(mean(kh), 5) + " (z=" + fmt(z_mean_of_ratios, 3) + ")");
}

// --- AC7 ------------------------------------------------------------------------

void ac7() {
    const auto f = local_field_from_voltage(10.0, FieldConversion{});
    const double vis = mirror_visibility(440.0, 1000.0, 1.417, 1.932);
    const double a = effective_bohr_radius(8.8, 0.16);
    const bool ok = std::abs(f.f_ext_kv_cm - 91.1) <= 0.05 && std::abs(f.f_loc_kv_cm - 328.0) <= 0.5 &&
                    std::abs(vis + 0.667) <= 1e-3 &&
                    std::abs(vis + 0.6675034069892485) <= 1e-12 && std::abs(a - 2.9) <= 0.05;
    report("AC7", ok, "local field, mirror visibility, Bohr radius",
           "10 V -> " + fmt(f.f_ext_kv_cm) + " / " + fmt(f.f_loc_kv_cm) + " kV/cm; V=" + fmt(vis, 7) +
               "; a*=" + fmt(a, 3) + " nm");
}

// --- AC8 ------------------------------------------------------------------------

void ac8() {
    using namespace fixtures;
    std::ostringstream d;
    bool ok = true;
    auto check = [&](const std::string& name, bool pass, const std::string& info) {
        ok = ok && pass;
        d << name << (pass ? " ok" : " FAILED") << " (" << info << "); ";
    };

    {
        const double peak = voigt(line_center, VoigtParams{line_center, 0.08, 0.064, 1000.0});
        const double true_fwhm = voigt_fwhm_approx(constants::gaussian_fwhm_per_sigma * 0.08, 0.128);
        double dc = 0.0, df = 0.0;
        for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
            const auto fit = fit_voigt(single_line(0.08, 0.064, NoiseModel{NoiseType::poisson, 1000.0 / peak}, seed));
            dc = std::max(dc, std::abs(fit.value("center") - line_center));
            df = std::max(df, std::abs(fit.value("fwhm") / true_fwhm - 1.0));
        }
        check("voigt", dc <= 0.005 && df <= 0.05, "center " + fmt(dc, 2) + " meV, fwhm " + fmt(100 * df, 2) + "%");
    }
    {
        const FieldConversion conv;
        const StarkResponse truth{2.6e-6, 1e-4, 0.0, 0.0};
        Rng rng(8);
        MeasurementSeries s;
        for (double v = -60.0; v <= 60.0; v += 5.0) {
            s.x.push_back(v);
            s.y.push_back(stark_shift(local_field_from_voltage(v, conv).f_loc_kv_cm, truth) *
                          (1.0 + rng.normal(0.0, 0.01)));
        }
        const double db = std::abs(fit_stark_polynomial(s, conv).value("beta") - 2.6e-6);
        check("stark", db <= 0.2e-6, "|dbeta|=" + fmt(db, 2));
    }
    {
        Rng rng(14);
        MeasurementSeries s;
        for (double P : {0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0, 30.0, 40.0}) {
            s.x.push_back(P);
            s.y.push_back(2000.0 * P / (P + 4.6) * (1.0 + rng.normal(0.0, 0.02)));
        }
        const double ps = fit_saturation(s).value("p_sat");
        check("saturation", std::abs(ps / 4.6 - 1.0) <= 0.05, "P_sat=" + fmt(ps));
    }
    {
        MeasurementSeries h, v;
        for (double bf : {1.0, 2.0, 4.0, 6.0, 9.0}) {
            h.x.push_back(bf);
            h.y.push_back(1.463 * constants::bohr_magneton_mev_per_t * bf);
            v.x.push_back(bf);
            v.y.push_back(0.915 * constants::bohr_magneton_mev_per_t * bf);
        }
        const auto g = compose_g_factors(fit_zeeman(h).value("g_effective"), fit_zeeman(v).value("g_effective"));
        check("zeeman", std::abs(g.g_e - 1.189) <= 1e-12, "g_e=" + fmt(g.g_e, 12));
    }
    {
        const PowerTruth t;
        double dp = 0.0, dps = 0.0;
        for (std::uint64_t seed : {3u, 4u, 5u}) {
            const auto [w, c] = power_data(t, 0.03, seed);
            const auto fit = fit_suppression_power(w, c);
            dp = std::max(dp, std::abs(fit.value("p0") - t.p0));
            dps = std::max(dps, std::abs(fit.value("p_sat") / t.p_sat - 1.0));
        }
        check("suppression_power", dp <= 0.05 && dps <= 0.10,
              "|dp0|=" + fmt(dp, 3) + ", P_sat " + fmt(100 * dps, 3) + "%");
    }
    {
        const FieldTruth t;
        const auto volts = voltage_grid();
        const auto clean = field_truth_widths(t, volts);
        std::vector<double> fine;
        for (int i = 0; i <= 600; ++i) fine.push_back(0.1 * i);
        const double v_true = argmin_on(fine, field_truth_widths(t, fine));
        const auto mom = expected_moments(GeometrySpec{18, 3.0, 5.0, 8.8});
        FieldSuppressionOptions opt;
        opt.fixed_beta_s2 = t.beta * mom.s2;
        opt.fixed_kappa_hat = mom.s4 / (mom.s2 * mom.s2);
        double dp = 0.0, dv = 0.0;
        for (std::uint64_t seed : {77u, 1u, 2u, 3u}) {
            Rng rng(seed);
            MeasurementSeries s;
            s.x = volts;
            for (double w : clean) s.y.push_back(w * (1.0 + rng.normal(0.0, 0.03)));
            const auto fit = fit_suppression_field(s, opt);
            dp = std::max(dp, std::abs(fit.value("p0") - t.p0));
            dv = std::max(dv, std::abs(argmin_on(fine, suppression_field_linewidth(fit, fine, opt)) / v_true - 1.0));
        }
        check("suppression_field", dp <= 0.07 && dv <= 0.10,
              "geometry-constrained moments, |dp0|=" + fmt(dp, 3) + ", minimum " + fmt(100 * dv, 3) + "%");
    }
    report("AC8", ok, "fit round trips", d.str());
}

// --- AC9 ------------------------------------------------------------------------

void ac9() {
    std::ostringstream d;
    // Electrical: 18 traps in 3-5 nm, p0 = 0.35.
    const fixtures::FieldTruth t;
    std::vector<double> volts;
    for (int i = 0; i <= 600; ++i) volts.push_back(0.1 * i);
    const auto w = fixtures::field_truth_widths(t, volts);
    int n_minima = 0;
    std::size_t imin = 0;
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        if (w[i] < w[i - 1] && w[i] <= w[i + 1]) {
            ++n_minima;
            imin = i;
        }
    }
    const bool field_ok = n_minima == 1;
    d << "voltage: " << n_minima << " interior minimum at " << fmt(volts[imin], 3) << " V, "
      << fmt(100 * w[imin] / w[0], 3) << "% of zero-bias width; ";

    // Optical: p0 = 0.4 -> 1, P_sat = 1 nW, kappa_hat = 0.077.
    std::vector<double> powers;
    for (int i = 0; i <= 400; ++i) powers.push_back(0.05 * i);
    const auto sw = power_sweep(powers, OpticalSuppressionParams{0.4, 1.0, 1.0}, PowerMoments{0.275, 0.077});
    bool narrowing = true, blue = true;
    double wmax = sw[0].voigt_fwhm;
    for (std::size_t i = 1; i < sw.size(); ++i) {
        narrowing = narrowing && sw[i].voigt_fwhm <= sw[i - 1].voigt_fwhm;
        blue = blue && sw[i].center_wavelength < sw[i - 1].center_wavelength;
        wmax = std::max(wmax, sw[i].voigt_fwhm);
    }
    d << "power: narrowing " << (narrowing ? "monotone" : "NOT monotone") << " (peak "
      << fmt(100 * wmax / sw[0].voigt_fwhm, 4) << "% of initial before falling to "
      << fmt(100 * sw.back().voigt_fwhm / sw[0].voigt_fwhm, 3) << "%), blue shift " << (blue ? "monotone" : "NOT monotone")
      << "; ";

    // d/dp [p^2 (1 - p^2)] = 2p - 4p^3 vanishes at 1/sqrt(2).
    const double ps = 1.0 / std::sqrt(2.0);
    const double deriv = 2.0 * ps - 4.0 * ps * ps * ps;
    const double h = 1e-5;
    auto g = [](double p) { return p * p * (1.0 - p * p); };
    const double numeric = (g(ps + h) - g(ps - h)) / (2.0 * h);
    const bool argmax_ok = std::abs(deriv) < 1e-12 && std::abs(numeric) < 1e-8;
    d << "argmax p^2(1-p^2) derivative " << fmt(numeric, 2);
    report("AC9", field_ok && narrowing && blue && argmax_ok, "qualitative line-shape checks", d.str());
}

// --- AC10 -----------------------------------------------------------------------

struct CliRun {
    int code;
    std::string out;
};

CliRun cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"trapnoise"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str()};
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& n_files) {
    for (const auto& e : fs::directory_iterator(a)) {
        const auto other = b / e.path().filename();
        if (!fs::exists(other)) return false;
        if (read_text_file(e.path().string()) != read_text_file(other.string())) return false;
        ++n_files;
    }
    return true;
}

void ac10() {
    const fs::path dir = testsupport::scratch_dir("acceptance_determinism");
    const fs::path recipes = fs::path(TRAPNOISE_SOURCE_DIR) / "recipes";
    bool ok = true;
    std::size_t n_files = 0;
    std::ostringstream d;

    for (const char* r : {"power_mc_p0_0.4.json", "voltage_mc_p0_0.9.json", "voltage_18_traps.json", "power_narrowing.json"}) {
        const auto cfg = (recipes / r).string();
        const auto a = cli({"sweep", "-c", cfg, "-o", (dir / r / "a").string()});
        const auto b = cli({"sweep", "-c", cfg, "-o", (dir / r / "b").string()});
        ok = ok && a.code == 0 && b.code == 0 && a.out == b.out && same_tree(dir / r / "a", dir / r / "b", n_files);
    }

    const std::string mc_cfg = (dir / "mc.json").string();
    write_text_file(mc_cfg, R"({"version": 1, "name": "det", "master_seed": 4242,
      "geometry": {"n_traps": 50, "r_min_nm": 3, "r_max_nm": 8},
      "suppression": {"kind": "voltage", "values": {"start": 0, "stop": 60, "step": 10},
                      "electrical": {"p0": 0.9, "b": 50, "alpha": 0.2, "gamma_stretch": 1, "e_star_kv_cm": 800}},
      "stark": {"beta": 1.44e-6},
      "mc": {"n_geometries": 40, "n_snapshots": 500, "brute_force": {"n_instances": 3, "n_traps": 6}}})");
    const std::vector<std::string> thread_counts{"1", "2", "4", "1"};
    std::vector<CliRun> runs;
    for (std::size_t i = 0; i < thread_counts.size(); ++i) {
        const auto out = dir / "mc" / ("run" + std::to_string(i));
        runs.push_back(cli({"mc", "-c", mc_cfg, "-o", out.string(), "--threads", thread_counts[i]}));
        ok = ok && runs.back().code == 0 && runs.back().out == runs.front().out;
        if (i > 0) ok = ok && same_tree(dir / "mc" / "run0", out, n_files);
    }

    // Seeded multi-start fit.
    fixtures::FieldTruth t;
    const auto volts = fixtures::voltage_grid();
    const auto clean = fixtures::field_truth_widths(t, volts);
    Rng rng(5);
    std::ostringstream csv;
    csv << "voltage_v,fwhm_mev\n";
    for (std::size_t i = 0; i < volts.size(); ++i)
        csv << format_double(volts[i]) << ',' << format_double(clean[i] * (1.0 + rng.normal(0.0, 0.03))) << '\n';
    write_text_file((dir / "field.csv").string(), csv.str());
    write_text_file((dir / "fit.json").string(),
                    R"({"version": 1, "master_seed": 3, "fit": {"kind": "suppression_field", "data": "field.csv"}})");
    const auto f1 = cli({"fit", "-c", (dir / "fit.json").string(), "-o", (dir / "fit_a").string()});
    const auto f2 = cli({"fit", "-c", (dir / "fit.json").string(), "-o", (dir / "fit_b").string()});
    ok = ok && f1.out == f2.out && same_tree(dir / "fit_a", dir / "fit_b", n_files);

    // In-process MC across thread counts.
    MCConfig c;
    c.geometry = mc_geometry;
    c.sweep.values = mc_powers;
    c.sweep.optical = OpticalSuppressionParams{0.9, 1.0, 1.5};
    c.stark = StarkResponse{1.44e-6};
    c.n_geometries = 30;
    c.n_snapshots = 300;
    c.threads = 1;
    const auto r1 = run_mc(c);
    c.threads = 5;
    const auto r5 = run_mc(c);
    auto same = [](double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; };
    for (std::size_t k = 0; k < r1.points.size(); ++k) {
        const auto &a = r1.points[k], &b = r5.points[k];
        ok = ok && same(a.mean_shift, b.mean_shift) && same(a.std_shift, b.std_shift) &&
             same(a.stderr_mean, b.stderr_mean) && same(a.stderr_std, b.stderr_std);
    }

    d << n_files << " output files compared byte for byte over sweep, mc (1/2/4 threads) and fit runs";
    report("AC10", ok, "determinism across runs and thread counts", d.str());
}

}  // namespace

int main() {
    std::cout << std::unitbuf;
    ac1();
    ac2();
    ac3();
    ac4();
    ac5();
    ac6();
    ac7();
    ac8();
    ac9();
    ac10();
    std::cout << (n_failed == 0 ? "all criteria passed" : std::to_string(n_failed) + " criteria failed") << std::endl;
    return n_failed == 0 ? 0 : 1;
}
