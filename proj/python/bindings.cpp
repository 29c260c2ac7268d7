#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "trapnoise/analytics.hpp"
#include "trapnoise/cli.hpp"
#include "trapnoise/errors.hpp"
#include "trapnoise/fitting.hpp"
#include "trapnoise/geometry.hpp"
#include "trapnoise/lineshape.hpp"
#include "trapnoise/montecarlo.hpp"
#include "trapnoise/suppression.hpp"

namespace py = pybind11;
using namespace trapnoise;

namespace {

MeasurementSeries series(std::vector<double> x, std::vector<double> y, std::vector<double> y_err) {
    MeasurementSeries s;
    s.x = std::move(x);
    s.y = std::move(y);
    s.y_err = std::move(y_err);
    return s;
}

py::dict fit_to_dict(const FitResult& f) {
    py::dict params, errs;
    for (const auto& p : f.parameters) {
        params[py::str(p.name)] = p.value;
        errs[py::str(p.name)] = p.uncertainty;
    }
    py::dict d;
    d["model"] = f.model;
    d["values"] = params;
    d["uncertainties"] = errs;
    d["converged"] = f.converged;
    d["status"] = f.status;
    d["flags"] = f.flags;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Trap-induced spectral diffusion: closed forms, Monte Carlo and fits";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    auto& data_error = py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConditioningError>(m, "ConditioningError", data_error.ptr());
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    // --- geometry ---------------------------------------------------------------

    py::class_<Trap>(m, "Trap")
        .def_readonly("radius_nm", &Trap::radius_nm)
        .def_readonly("theta_rad", &Trap::theta_rad)
        .def_readonly("field_kv_cm", &Trap::field_kv_cm)
        .def_property_readonly("field_x", &Trap::field_x)
        .def_property_readonly("field_y", &Trap::field_y);

    py::class_<TrapGeometry>(m, "TrapGeometry")
        .def_readonly("r_min_nm", &TrapGeometry::r_min_nm)
        .def_readonly("r_max_nm", &TrapGeometry::r_max_nm)
        .def_readonly("epsilon_r", &TrapGeometry::epsilon_r)
        .def_readonly("traps", &TrapGeometry::traps)
        .def_property_readonly("n_traps", &TrapGeometry::n_traps)
        .def("field_magnitudes", &TrapGeometry::field_magnitudes);

    py::class_<GeometrySpec>(m, "GeometrySpec")
        .def(py::init([](std::size_t n, double r_min, double r_max, double eps) {
                 GeometrySpec s{n, r_min, r_max, eps};
                 s.validate();
                 return s;
             }),
             py::arg("n_traps") = 18, py::arg("r_min_nm") = 3.0, py::arg("r_max_nm") = 5.0,
             py::arg("epsilon_r") = 8.8)
        .def_readwrite("n_traps", &GeometrySpec::n_traps)
        .def_readwrite("r_min_nm", &GeometrySpec::r_min_nm)
        .def_readwrite("r_max_nm", &GeometrySpec::r_max_nm)
        .def_readwrite("epsilon_r", &GeometrySpec::epsilon_r);

    py::class_<FieldMoments>(m, "FieldMoments")
        .def_readonly("s2", &FieldMoments::s2)
        .def_readonly("s4", &FieldMoments::s4)
        .def_readonly("kappa_hat", &FieldMoments::kappa_hat);

    py::class_<ExpectedMoments>(m, "ExpectedMoments")
        .def_readonly("s2", &ExpectedMoments::s2)
        .def_readonly("s4", &ExpectedMoments::s4)
        .def_readonly("s2_squared", &ExpectedMoments::s2_squared);

    py::class_<FieldConversion>(m, "FieldConversion")
        .def(py::init([](double gap, double eta, double eps) {
                 FieldConversion c{gap, eta, eps};
                 c.validate();
                 return c;
             }),
             py::arg("gap_length_um") = 1.0, py::arg("eta") = 0.911, py::arg("epsilon_r") = 8.8)
        .def_readwrite("gap_length_um", &FieldConversion::gap_length_um)
        .def_readwrite("eta", &FieldConversion::eta)
        .def_readwrite("epsilon_r", &FieldConversion::epsilon_r)
        .def("local_per_volt", &FieldConversion::local_per_volt);

    py::class_<StarkResponse>(m, "StarkResponse")
        .def(py::init([](double beta, double d, double c3, double c4, double heating) {
                 StarkResponse r{beta, d, c3, c4, heating};
                 r.validate();
                 return r;
             }),
             py::arg("beta") = 2.6e-6, py::arg("dipole_d") = 0.0, py::arg("c3") = 0.0, py::arg("c4") = 0.0,
             py::arg("heating_c") = 0.0)
        .def_readwrite("beta", &StarkResponse::beta)
        .def_readwrite("dipole_d", &StarkResponse::dipole_d)
        .def_readwrite("c3", &StarkResponse::c3)
        .def_readwrite("c4", &StarkResponse::c4)
        .def_readwrite("heating_c", &StarkResponse::heating_c);

    m.def("trap_field_magnitude", &trap_field_magnitude, py::arg("r_nm"), py::arg("epsilon_r") = 8.8);
    m.def("sample_trap_geometry", py::overload_cast<const GeometrySpec&, std::uint64_t>(&sample_trap_geometry),
          py::arg("spec"), py::arg("seed"));
    m.def("field_moments", py::overload_cast<const TrapGeometry&>(&field_moments), py::arg("geometry"));
    m.def(
        "field_moments_of",
        [](const std::vector<double>& f) { return field_moments(std::span<const double>(f)); },
        py::arg("field_magnitudes"));
    m.def("kappa_hat_annulus", &kappa_hat_annulus, py::arg("a"), py::arg("n_traps"));
    m.def("expected_moments", &expected_moments, py::arg("spec"));
    m.def("effective_bohr_radius", &effective_bohr_radius, py::arg("epsilon_r"), py::arg("mass_ratio"));
    m.def(
        "local_field_from_voltage",
        [](double v, const FieldConversion& c) {
            const auto f = local_field_from_voltage(v, c);
            return py::make_tuple(f.f_ext_kv_cm, f.f_loc_kv_cm);
        },
        py::arg("volts"), py::arg("conversion") = FieldConversion{});
    m.def("stark_shift", &stark_shift, py::arg("field_kv_cm"), py::arg("response"));
    m.def("mirror_visibility", &mirror_visibility, py::arg("lambda0_nm"), py::arg("gap_nm"), py::arg("n"),
          py::arg("k"));

    // --- suppression --------------------------------------------------------------

    py::class_<OpticalSuppressionParams>(m, "OpticalSuppressionParams")
        .def(py::init([](double p0, double p_inf, double p_sat) {
                 OpticalSuppressionParams p{p0, p_inf, p_sat};
                 p.validate();
                 return p;
             }),
             py::arg("p0") = 0.4, py::arg("p_inf") = 1.0, py::arg("p_sat_nw") = 1.0)
        .def_readwrite("p0", &OpticalSuppressionParams::p0)
        .def_readwrite("p_inf", &OpticalSuppressionParams::p_inf)
        .def_readwrite("p_sat_nw", &OpticalSuppressionParams::p_sat_nw);

    py::class_<ElectricalSuppressionParams>(m, "ElectricalSuppressionParams")
        .def(py::init([](double p0, double b, double alpha, double g, double e_star) {
                 ElectricalSuppressionParams p{p0, b, alpha, g, e_star};
                 p.validate();
                 return p;
             }),
             py::arg("p0") = 0.35, py::arg("b") = 50.0, py::arg("alpha") = 0.2, py::arg("gamma_stretch") = 1.0,
             py::arg("e_star_kv_cm") = 800.0)
        .def_readwrite("p0", &ElectricalSuppressionParams::p0)
        .def_readwrite("b", &ElectricalSuppressionParams::b)
        .def_readwrite("alpha", &ElectricalSuppressionParams::alpha)
        .def_readwrite("gamma_stretch", &ElectricalSuppressionParams::gamma_stretch)
        .def_readwrite("e_star_kv_cm", &ElectricalSuppressionParams::e_star_kv_cm);

    m.def("occupancy_vs_power", &occupancy_vs_power, py::arg("power_nw"), py::arg("params"));
    m.def("occupancy_vs_field", &occupancy_vs_field, py::arg("e0_kv_cm"), py::arg("params"));
    m.def("characteristic_field", &characteristic_field, py::arg("trap_depth_ev"),
          py::arg("effective_mass_ratio"));

    // --- analytics ------------------------------------------------------------------

    m.def("mean_shift", &mean_shift, py::arg("e0"), py::arg("p"), py::arg("s2"), py::arg("beta"));
    m.def("variance_shift", &variance_shift, py::arg("e0"), py::arg("p"), py::arg("s2"), py::arg("s4"),
          py::arg("beta"));
    m.def("variance_shift_khat", &variance_shift_khat, py::arg("beta_s2"), py::arg("kappa_hat"), py::arg("p"));

    py::class_<SweepPoint>(m, "SweepPoint")
        .def_readonly("control", &SweepPoint::control)
        .def_readonly("e0_kv_cm", &SweepPoint::e0_kv_cm)
        .def_readonly("p", &SweepPoint::p)
        .def_readonly("mu", &SweepPoint::mu)
        .def_readonly("sigma2", &SweepPoint::sigma2)
        .def_readonly("gaussian_fwhm", &SweepPoint::gaussian_fwhm)
        .def_readonly("voigt_fwhm", &SweepPoint::voigt_fwhm)
        .def_readonly("center_wavelength", &SweepPoint::center_wavelength);

    m.def(
        "power_sweep",
        [](const std::vector<double>& powers, const OpticalSuppressionParams& optical, double beta_s2,
           double kappa_hat, double gamma, double lambda0) {
            return power_sweep(powers, optical, PowerMoments{beta_s2, kappa_hat}, gamma, lambda0);
        },
        py::arg("powers_nw"), py::arg("optical"), py::arg("beta_s2"), py::arg("kappa_hat"),
        py::arg("gamma_lorentz") = default_gamma_lorentz_mev, py::arg("lambda0_nm") = 440.0);
    m.def(
        "field_sweep",
        [](const std::vector<double>& volts, const ElectricalSuppressionParams& electrical, double s2, double s4,
           const StarkResponse& resp, const FieldConversion& conv, double gamma, double lambda0) {
            return field_sweep(volts, conv, electrical, BiasMoments{s2, s4}, resp, gamma, lambda0);
        },
        py::arg("voltages"), py::arg("electrical"), py::arg("s2"), py::arg("s4"),
        py::arg("response") = StarkResponse{}, py::arg("conversion") = FieldConversion{},
        py::arg("gamma_lorentz") = default_gamma_lorentz_mev, py::arg("lambda0_nm") = 440.0);
    m.def(
        "normalized_linewidth", [](const std::vector<SweepPoint>& sw) { return normalized_linewidth(sw); },
        py::arg("sweep"));

    // --- line shapes ----------------------------------------------------------------

    m.def("faddeeva", &faddeeva, py::arg("z"));
    m.def(
        "voigt",
        [](const std::vector<double>& x, double center, double sigma, double gamma, double amplitude) {
            return voigt_profile(x, VoigtParams{center, sigma, gamma, amplitude});
        },
        py::arg("x"), py::arg("center"), py::arg("sigma_g"), py::arg("gamma_lorentz"), py::arg("amplitude") = 1.0);
    m.def("voigt_fwhm_approx", &voigt_fwhm_approx, py::arg("fwhm_g"), py::arg("fwhm_l"));
    m.def("voigt_fwhm_exact", &voigt_fwhm_exact, py::arg("sigma_g"), py::arg("gamma_lorentz"));

    // --- Monte Carlo ----------------------------------------------------------------

    py::class_<MCPoint>(m, "MCPoint")
        .def_readonly("control", &MCPoint::control)
        .def_readonly("e0_kv_cm", &MCPoint::e0_kv_cm)
        .def_readonly("p", &MCPoint::p)
        .def_readonly("mean_shift", &MCPoint::mean_shift)
        .def_readonly("std_shift", &MCPoint::std_shift)
        .def_readonly("stderr_mean", &MCPoint::stderr_mean)
        .def_readonly("stderr_std", &MCPoint::stderr_std)
        .def_readonly("center_wavelength", &MCPoint::center_wavelength)
        .def_readonly("gaussian_fwhm", &MCPoint::gaussian_fwhm);

    py::class_<AgreementRow>(m, "AgreementRow")
        .def_readonly("control", &AgreementRow::control)
        .def_readonly("mc_mean", &AgreementRow::mc_mean)
        .def_readonly("analytic_mean", &AgreementRow::analytic_mean)
        .def_readonly("z_mean", &AgreementRow::z_mean)
        .def_readonly("mc_std", &AgreementRow::mc_std)
        .def_readonly("analytic_std", &AgreementRow::analytic_std)
        .def_readonly("z_std", &AgreementRow::z_std);

    m.def(
        "run_mc",
        [](const std::string& kind, const std::vector<double>& values, const GeometrySpec& geometry,
           const StarkResponse& stark, std::size_t n_geometries, std::size_t n_snapshots, std::uint64_t seed,
           std::optional<OpticalSuppressionParams> optical, std::optional<ElectricalSuppressionParams> electrical,
           const FieldConversion& conv, unsigned threads) {
            MCConfig cfg;
            cfg.n_geometries = n_geometries;
            cfg.n_snapshots = n_snapshots;
            cfg.geometry = geometry;
            cfg.stark = stark;
            cfg.master_seed = seed;
            cfg.threads = threads;
            if (kind == "power") {
                cfg.sweep.kind = ControlKind::power;
            } else if (kind == "voltage") {
                cfg.sweep.kind = ControlKind::voltage;
            } else {
                throw ConfigError("kind must be 'power' or 'voltage'");
            }
            cfg.sweep.values = values;
            if (optical) cfg.sweep.optical = *optical;
            if (electrical) cfg.sweep.electrical = *electrical;
            cfg.sweep.conversion = conv;
            cfg.validate();
            MCResult res;
            {
                py::gil_scoped_release release;
                res = run_mc(cfg);
            }
            const auto agreement = agreement_report(res, analytic_reference(cfg, res));
            return py::make_tuple(res.points, agreement);
        },
        py::arg("kind"), py::arg("values"), py::arg("geometry") = GeometrySpec{},
        py::arg("stark") = StarkResponse{1.44e-6}, py::arg("n_geometries") = 200, py::arg("n_snapshots") = 2000,
        py::arg("seed") = 1, py::arg("optical") = py::none(), py::arg("electrical") = py::none(),
        py::arg("conversion") = FieldConversion{}, py::arg("threads") = 0,
        "Returns (points, agreement rows against the closed forms).");

    // --- fits -------------------------------------------------------------------------

    m.def(
        "fit_voigt",
        [](std::vector<double> x, std::vector<double> y, std::optional<double> fixed_gamma) {
            SpectrumRecord s;
            s.x = std::move(x);
            s.intensity = std::move(y);
            VoigtFitOptions o;
            o.fixed_gamma = fixed_gamma;
            return fit_to_dict(fit_voigt(s, o));
        },
        py::arg("x_mev"), py::arg("intensity"), py::arg("fixed_gamma") = py::none());
    m.def(
        "fit_double_voigt_splitting",
        [](std::vector<double> x, std::vector<double> y) {
            SpectrumRecord s;
            s.x = std::move(x);
            s.intensity = std::move(y);
            return fit_to_dict(fit_double_voigt_splitting(s));
        },
        py::arg("x_mev"), py::arg("intensity"));
    m.def(
        "fit_zeeman",
        [](std::vector<double> b, std::vector<double> split) {
            return fit_to_dict(fit_zeeman(series(std::move(b), std::move(split), {})));
        },
        py::arg("field_t"), py::arg("splitting_mev"));
    m.def(
        "fit_stark_polynomial",
        [](std::vector<double> v, std::vector<double> shift, const FieldConversion& conv, bool even_only) {
            StarkFitOptions o;
            o.even_only = even_only;
            return fit_to_dict(fit_stark_polynomial(series(std::move(v), std::move(shift), {}), conv, o));
        },
        py::arg("voltages"), py::arg("shift_mev"), py::arg("conversion") = FieldConversion{},
        py::arg("even_only") = false);
    m.def(
        "fit_saturation",
        [](std::vector<double> p, std::vector<double> i, std::vector<double> err) {
            return fit_to_dict(fit_saturation(series(std::move(p), std::move(i), std::move(err))));
        },
        py::arg("power_nw"), py::arg("intensity"), py::arg("y_err") = std::vector<double>{});
    m.def(
        "fit_polarization",
        [](std::vector<double> th, std::vector<double> i) {
            return fit_to_dict(fit_polarization(series(std::move(th), std::move(i), {})));
        },
        py::arg("angle_rad"), py::arg("intensity"));
    m.def(
        "fit_suppression_power",
        [](std::vector<double> p, std::vector<double> fwhm, std::vector<double> centers, bool normalized,
           std::uint64_t seed) {
            PowerSuppressionOptions o;
            o.normalized = normalized;
            o.seed = seed;
            MeasurementSeries c;
            if (!centers.empty()) c = series(p, std::move(centers), {});
            return fit_to_dict(fit_suppression_power(series(p, std::move(fwhm), {}), c, o));
        },
        py::arg("power_nw"), py::arg("fwhm_mev"), py::arg("center_nm") = std::vector<double>{},
        py::arg("normalized") = false, py::arg("seed") = 1);
    m.def(
        "fit_suppression_field",
        [](std::vector<double> v, std::vector<double> fwhm, const FieldConversion& conv, double beta,
           std::optional<double> fixed_beta_s2, std::optional<double> fixed_kappa_hat, bool normalized,
           std::uint64_t seed) {
            FieldSuppressionOptions o;
            o.conversion = conv;
            o.beta = beta;
            o.fixed_beta_s2 = fixed_beta_s2;
            o.fixed_kappa_hat = fixed_kappa_hat;
            o.normalized = normalized;
            o.seed = seed;
            return fit_to_dict(fit_suppression_field(series(std::move(v), std::move(fwhm), {}), o));
        },
        py::arg("voltages"), py::arg("fwhm_mev"), py::arg("conversion") = FieldConversion{},
        py::arg("beta") = 2.6e-6, py::arg("fixed_beta_s2") = py::none(), py::arg("fixed_kappa_hat") = py::none(),
        py::arg("normalized") = false, py::arg("seed") = 1);

    // --- command line -----------------------------------------------------------------

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "trapnoise");
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
}
