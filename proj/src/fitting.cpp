#include "trapnoise/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "trapnoise/analytics.hpp"
#include "trapnoise/constants.hpp"
#include "trapnoise/errors.hpp"

namespace trapnoise {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double fwhm_per_sigma = constants::gaussian_fwhm_per_sigma;

// --- generic bounded fit over named parameters ---------------------------------

struct ParamDef {
    std::string name;
    double init = 0.0;
    double lo = -inf;
    double hi = inf;
    bool fixed = false;
    /// Solver coordinate is (value - shift) / scale.
    double shift = 0.0;
    double scale = 1.0;
};

using Values = std::vector<double>;
using ResidualFn = std::function<void(const Values&, Vector&)>;
/// Columns for every parameter (fixed ones are ignored).
using JacobianFn = std::function<void(const Values&, Matrix&)>;

struct CoreFit {
    Values values;
    Matrix covariance;  ///< full parameter space
    LsqSolution solution;
    std::vector<bool> at_bound;
    std::size_t best_start = 0;
    std::size_t n_converged = 0;
};

class ParamMap {
public:
    explicit ParamMap(std::vector<ParamDef> defs) : defs_(std::move(defs)) {
        for (std::size_t i = 0; i < defs_.size(); ++i)
            if (!defs_[i].fixed) free_.push_back(i);
    }

    const std::vector<ParamDef>& defs() const { return defs_; }
    const std::vector<std::size_t>& free() const { return free_; }
    Eigen::Index n_free() const { return static_cast<Eigen::Index>(free_.size()); }

    Vector to_x(const Values& v) const {
        Vector x(n_free());
        for (Eigen::Index k = 0; k < n_free(); ++k) {
            const auto& d = defs_[free_[static_cast<std::size_t>(k)]];
            x[k] = (v[free_[static_cast<std::size_t>(k)]] - d.shift) / d.scale;
        }
        return x;
    }

    Values to_values(const Vector& x, const Values& base) const {
        Values v = base;
        for (Eigen::Index k = 0; k < n_free(); ++k) {
            const auto& d = defs_[free_[static_cast<std::size_t>(k)]];
            v[free_[static_cast<std::size_t>(k)]] = d.shift + d.scale * x[k];
        }
        return v;
    }

    Values initial() const {
        Values v;
        for (const auto& d : defs_) v.push_back(d.init);
        return v;
    }

    Vector lower() const {
        Vector b(n_free());
        for (Eigen::Index k = 0; k < n_free(); ++k) {
            const auto& d = defs_[free_[static_cast<std::size_t>(k)]];
            b[k] = (d.lo - d.shift) / d.scale;
        }
        return b;
    }

    Vector upper() const {
        Vector b(n_free());
        for (Eigen::Index k = 0; k < n_free(); ++k) {
            const auto& d = defs_[free_[static_cast<std::size_t>(k)]];
            b[k] = (d.hi - d.shift) / d.scale;
        }
        return b;
    }

private:
    std::vector<ParamDef> defs_;
    std::vector<std::size_t> free_;
};

CoreFit run_core(const ParamMap& map, std::size_t n_residuals, const ResidualFn& residual,
                 const JacobianFn& jacobian, const std::vector<Values>& starts,
                 const LsqOptions& options) {
    const Values base = map.initial();
    CoreFit out;
    if (map.n_free() == 0) {
        out.values = base;
        Vector r(static_cast<Eigen::Index>(n_residuals));
        residual(base, r);
        out.solution.x = Vector();
        out.solution.residuals = r;
        out.solution.cost = 0.5 * r.squaredNorm();
        out.solution.status = LsqStatus::gradient;
        out.covariance = Matrix::Zero(static_cast<Eigen::Index>(base.size()),
                                      static_cast<Eigen::Index>(base.size()));
        out.at_bound.assign(base.size(), false);
        return out;
    }

    LsqProblem prob;
    prob.n_residuals = n_residuals;
    prob.residuals = [&](const Vector& x, Vector& r) { residual(map.to_values(x, base), r); };
    if (jacobian) {
        prob.jacobian = [&](const Vector& x, Matrix& jac) {
            Matrix full(static_cast<Eigen::Index>(n_residuals), static_cast<Eigen::Index>(base.size()));
            jacobian(map.to_values(x, base), full);
            for (Eigen::Index k = 0; k < map.n_free(); ++k) {
                const std::size_t i = map.free()[static_cast<std::size_t>(k)];
                jac.col(k) = full.col(static_cast<Eigen::Index>(i)) * map.defs()[i].scale;
            }
        };
    }
    prob.lower = map.lower();
    prob.upper = map.upper();
    prob.typical = Vector::Ones(map.n_free());

    std::vector<Vector> xs;
    xs.reserve(starts.size());
    for (const auto& s : starts) xs.push_back(map.to_x(s));
    MultiStartResult ms = solve_lsq_multistart(prob, xs, options);
    out.solution = std::move(ms.best);
    out.best_start = ms.best_start;
    out.n_converged = ms.n_converged;
    out.values = map.to_values(out.solution.x, base);

    // Covariance in solver coordinates, then mapped back.
    const Vector lo = prob.lower;
    const Vector hi = prob.upper;
    std::vector<bool> pinned(static_cast<std::size_t>(map.n_free()), false);
    out.at_bound.assign(base.size(), false);
    for (Eigen::Index k = 0; k < map.n_free(); ++k) {
        const double x = out.solution.x[k];
        const double tol = 1e-9 * std::max(1.0, std::abs(x));
        if (x - lo[k] <= tol || hi[k] - x <= tol) {
            pinned[static_cast<std::size_t>(k)] = true;
            out.at_bound[map.free()[static_cast<std::size_t>(k)]] = true;
        }
    }
    const Matrix cov_x =
        covariance_from_jacobian(out.solution.jacobian, out.solution.residuals, pinned);
    const auto n = static_cast<Eigen::Index>(base.size());
    out.covariance = Matrix::Zero(n, n);
    for (Eigen::Index a = 0; a < map.n_free(); ++a) {
        const std::size_t ia = map.free()[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < map.n_free(); ++b) {
            const std::size_t ib = map.free()[static_cast<std::size_t>(b)];
            out.covariance(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib)) =
                cov_x(a, b) * map.defs()[ia].scale * map.defs()[ib].scale;
        }
    }
    return out;
}

double safe_sqrt(double v) {
    if (std::isnan(v)) return inf;
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

FitResult assemble(const std::string& model, const ParamMap& map, const CoreFit& core,
                   const std::string& provenance) {
    FitResult res;
    res.model = model;
    const auto& defs = map.defs();
    for (std::size_t i = 0; i < defs.size(); ++i) {
        FitParameter p;
        p.name = defs[i].name;
        p.value = core.values[i];
        p.fixed = defs[i].fixed;
        p.uncertainty = p.fixed ? 0.0
                                : safe_sqrt(core.covariance(static_cast<Eigen::Index>(i),
                                                            static_cast<Eigen::Index>(i)));
        res.parameters.push_back(p);
        if (core.at_bound[i]) res.flags.push_back("at_bound:" + defs[i].name);
    }
    res.residual_norm = core.solution.residuals.norm();
    res.gradient_norm = core.solution.gradient_norm;
    res.n_iterations = core.solution.iterations;
    res.converged = core.solution.converged();
    res.status = to_string(core.solution.status);
    res.provenance = provenance;
    return res;
}

/// Uncertainty of a derived quantity g(values) by linear propagation with a
/// central-difference gradient.
double propagate(const std::function<double(const Values&)>& g, const Values& v, const Matrix& cov,
                 const std::vector<ParamDef>& defs) {
    const auto n = static_cast<Eigen::Index>(v.size());
    Vector grad = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (defs[static_cast<std::size_t>(i)].fixed) continue;
        if (cov(i, i) == 0.0) continue;
        const double h = 1e-6 * std::max(std::abs(v[static_cast<std::size_t>(i)]), defs[static_cast<std::size_t>(i)].scale);
        Values up = v;
        Values dn = v;
        up[static_cast<std::size_t>(i)] += h;
        dn[static_cast<std::size_t>(i)] -= h;
        grad[i] = (g(up) - g(dn)) / (2.0 * h);
    }
    double var = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (grad[i] == 0.0) continue;
        if (!std::isfinite(cov(i, i))) return inf;
        for (Eigen::Index j = 0; j < n; ++j)
            if (grad[j] != 0.0) var += grad[i] * cov(i, j) * grad[j];
    }
    return safe_sqrt(var);
}

void add_derived(FitResult& res, const std::string& name, double value, double unc) {
    FitParameter p;
    p.name = name;
    p.value = value;
    p.uncertainty = unc;
    p.derived = true;
    res.parameters.push_back(p);
}

std::string describe_start(const std::vector<ParamDef>& defs, const Values& v) {
    std::ostringstream os;
    os.precision(6);
    os << "initial guess {";
    for (std::size_t i = 0; i < defs.size(); ++i) {
        if (i) os << ", ";
        os << defs[i].name << "=" << v[i];
    }
    os << "}";
    return os.str();
}

double series_range(const std::vector<double>& y) {
    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    return *mx - *mn;
}

// --- Voigt helpers ------------------------------------------------------------

struct PeakGuess {
    double center = 0.0;
    double fwhm = 0.0;
    double area = 0.0;
    double height = 0.0;
    double baseline = 0.0;
    double noise = 0.0;
};

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

PeakGuess guess_peak(const std::vector<double>& x, const std::vector<double>& y) {
    PeakGuess g;
    const std::size_t n = x.size();
    const auto imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    g.center = x[imax];
    g.height = y[imax];
    g.baseline = *std::min_element(y.begin(), y.end());
    std::vector<double> diffs;
    for (std::size_t i = 1; i < n; ++i) diffs.push_back(std::abs(y[i] - y[i - 1]));
    g.noise = 1.4826 * median(diffs) / std::sqrt(2.0);

    const double half = g.baseline + 0.5 * (g.height - g.baseline);
    std::size_t l = imax;
    while (l > 0 && y[l] > half) --l;
    std::size_t r = imax;
    while (r + 1 < n && y[r] > half) ++r;
    auto cross = [&](std::size_t a, std::size_t b) {
        const double ya = y[a];
        const double yb = y[b];
        if (ya == yb) return x[a];
        return x[a] + (half - ya) * (x[b] - x[a]) / (yb - ya);
    };
    const double xl = l < imax ? cross(l, l + 1) : x[0];
    const double xr = r > imax ? cross(r - 1, r) : x[n - 1];
    g.fwhm = std::max(xr - xl, 2.0 * (x[1] - x[0]));

    for (std::size_t i = 1; i < n; ++i) g.area += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    g.area = std::max(g.area, g.height * g.fwhm);
    return g;
}

/// Per-point standard deviations from the noise metadata, empty if none.
std::vector<double> noise_sd(const SpectrumRecord& s) {
    std::vector<double> sd;
    if (!s.noise) return sd;
    sd.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.noise->type == NoiseType::poisson) {
            const double counts = std::max(s.intensity[i], 1.0 / s.noise->scale);
            sd[i] = std::sqrt(counts / s.noise->scale);
        } else {
            sd[i] = s.noise->scale;
        }
    }
    return sd;
}

void check_spectrum(const SpectrumRecord& s, const char* who) {
    s.validate();
    if (s.size() < 8) {
        std::ostringstream msg;
        msg << who << ": need at least 8 points, got " << s.size();
        throw DataError(msg.str());
    }
    for (double v : s.intensity)
        if (!std::isfinite(v)) throw DataError(std::string(who) + ": non-finite intensity");
}

void check_not_flat(const std::vector<double>& y, const PeakGuess& g, const char* who) {
    const double height = g.height - median(y);
    const double scale = std::max(std::abs(g.height), std::abs(g.baseline));
    if (!(height > 1e-12 * scale) || !(height > 5.0 * g.noise)) {
        std::ostringstream msg;
        msg << who << ": spectrum is flat (peak " << height << " above median, noise ~" << g.noise
            << "); nothing to fit";
        throw DataError(msg.str());
    }
}

double voigt_total_fwhm(double sigma, double gamma) {
    return voigt_fwhm_approx(fwhm_per_sigma * sigma, 2.0 * gamma);
}

}  // namespace

// --- FitResult / MeasurementSeries ----------------------------------------------

const FitParameter& FitResult::param(const std::string& name) const {
    for (const auto& p : parameters)
        if (p.name == name) return p;
    throw DomainError("FitResult: no parameter named '" + name + "'");
}

bool FitResult::has_flag(const std::string& flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void MeasurementSeries::validate() const {
    if (x.size() != y.size()) throw DataError("series: x and y lengths differ");
    if (!y_err.empty() && y_err.size() != y.size())
        throw DataError("series: y_err length differs from y");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw DataError("series: non-finite value at row " + std::to_string(i + 1));
        if (!y_err.empty() && !(y_err[i] > 0.0 && std::isfinite(y_err[i])))
            throw DataError("series: y_err must be positive at row " + std::to_string(i + 1));
    }
}

MeasurementSeries MeasurementSeries::sorted() const {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    MeasurementSeries out;
    for (std::size_t i : idx) {
        out.x.push_back(x[i]);
        out.y.push_back(y[i]);
        if (!y_err.empty()) out.y_err.push_back(y_err[i]);
    }
    return out;
}

// --- Voigt ---------------------------------------------------------------------------

FitResult fit_voigt(const SpectrumRecord& spectrum, const VoigtFitOptions& options) {
    check_spectrum(spectrum, "fit_voigt");
    const SpectrumRecord s = spectrum.to_energy();
    const auto& x = s.x;
    const auto& y = s.intensity;
    const std::size_t m = x.size();
    const PeakGuess g = guess_peak(x, y);
    check_not_flat(y, g, "fit_voigt");
    const std::vector<double> sd = noise_sd(s);

    VoigtParams init;
    if (options.initial) {
        init = *options.initial;
    } else {
        init.center = g.center;
        init.sigma_g = 0.6 * g.fwhm / fwhm_per_sigma;
        init.gamma_lorentz = 0.2 * g.fwhm;
        init.amplitude = g.area;
    }
    if (options.fixed_gamma) init.gamma_lorentz = *options.fixed_gamma;
    const double w = g.fwhm;

    ParamMap map({
        {"center", init.center, x.front(), x.back(), false, init.center, w},
        {"sigma_g", std::max(init.sigma_g, 1e-6 * w), 1e-9 * w, inf, false, 0.0, w},
        {"gamma_lorentz", init.gamma_lorentz, 0.0, inf, options.fixed_gamma.has_value(), 0.0, w},
        {"amplitude", init.amplitude, 0.0, inf, false, 0.0, std::max(g.area, 1e-300)},
    });

    auto residual = [&](const Values& v, Vector& r) {
        const VoigtParams p{v[0], v[1], v[2], v[3]};
        for (std::size_t i = 0; i < m; ++i) {
            const double d = voigt(x[i], p) - y[i];
            r[static_cast<Eigen::Index>(i)] = sd.empty() ? d : d / sd[i];
        }
    };
    auto jacobian = [&](const Values& v, Matrix& jac) {
        const VoigtParams p{v[0], v[1], v[2], v[3]};
        for (std::size_t i = 0; i < m; ++i) {
            const VoigtGradient gr = voigt_with_gradient(x[i], p);
            const double wgt = sd.empty() ? 1.0 : 1.0 / sd[i];
            const auto row = static_cast<Eigen::Index>(i);
            jac(row, 0) = gr.d_center * wgt;
            jac(row, 1) = gr.d_sigma * wgt;
            jac(row, 2) = gr.d_gamma * wgt;
            jac(row, 3) = gr.d_amplitude * wgt;
        }
    };

    const Values start = map.initial();
    CoreFit core = run_core(map, m, residual, jacobian, {start}, options.lsq);
    FitResult res = assemble("voigt", map, core, describe_start(map.defs(), start));

    auto fwhm_of = [](const Values& v) { return voigt_total_fwhm(v[1], v[2]); };
    add_derived(res, "fwhm", fwhm_of(core.values),
                propagate(fwhm_of, core.values, core.covariance, map.defs()));

    const auto dof = static_cast<double>(std::max<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(m) - map.n_free(), 1));
    if (!sd.empty()) {
        const double chi2 = core.solution.residuals.squaredNorm() / dof;
        if (chi2 > options.poor_fit_chi2) res.flags.push_back("poor_fit");
    } else {
        const double rms = core.solution.residuals.norm() / std::sqrt(static_cast<double>(m));
        if (rms > options.poor_fit_relative_rms * (g.height - g.baseline))
            res.flags.push_back("poor_fit");
    }
    return res;
}

FitResult fit_double_voigt_splitting(const SpectrumRecord& spectrum, const DoubleVoigtOptions& options) {
    check_spectrum(spectrum, "fit_double_voigt_splitting");
    const SpectrumRecord s = spectrum.to_energy();
    const auto& x = s.x;
    const auto& y = s.intensity;
    const std::size_t m = x.size();
    const PeakGuess g = guess_peak(x, y);
    check_not_flat(y, g, "fit_double_voigt_splitting");
    const std::vector<double> sd = noise_sd(s);

    // Candidate maxima on a lightly smoothed copy.
    std::vector<double> sm(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = std::min(i + 1, m - 1);
        sm[i] = (y[a] + y[i] + y[b]) / 3.0;
    }
    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < m; ++i)
        if (sm[i] > sm[i - 1] && sm[i] >= sm[i + 1] && sm[i] - g.baseline > 0.25 * (g.height - g.baseline))
            maxima.push_back(i);
    std::sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return sm[a] > sm[b]; });

    double c1 = g.center - 0.25 * g.fwhm;
    double c2 = g.center + 0.25 * g.fwhm;
    double width = 0.5 * g.fwhm;
    std::string how = "split of the single-line width";
    for (std::size_t k = 1; k < maxima.size(); ++k) {
        const double sep = std::abs(x[maxima[k]] - x[maxima[0]]);
        if (sep > 3.0 * (x[1] - x[0]) && sep > 0.2 * g.fwhm) {
            c1 = std::min(x[maxima[0]], x[maxima[k]]);
            c2 = std::max(x[maxima[0]], x[maxima[k]]);
            width = std::min(0.5 * g.fwhm, sep);
            how = "two detected maxima";
            break;
        }
    }
    const double gamma0 = options.fixed_gamma ? *options.fixed_gamma : 0.2 * width;
    const double sigma0 = 0.6 * width / fwhm_per_sigma;
    const double w = g.fwhm;

    ParamMap map({
        {"center_1", c1, x.front(), x.back(), false, c1, w},
        {"center_2", c2, x.front(), x.back(), false, c2, w},
        {"sigma_1", sigma0, 1e-9 * w, inf, false, 0.0, w},
        {"sigma_2", sigma0, 1e-9 * w, inf, false, 0.0, w},
        {"gamma_lorentz", gamma0, 0.0, inf, options.fixed_gamma.has_value(), 0.0, w},
        {"amplitude_1", 0.5 * g.area, 0.0, inf, false, 0.0, g.area},
        {"amplitude_2", 0.5 * g.area, 0.0, inf, false, 0.0, g.area},
    });

    auto residual = [&](const Values& v, Vector& r) {
        const VoigtParams p1{v[0], v[2], v[4], v[5]};
        const VoigtParams p2{v[1], v[3], v[4], v[6]};
        for (std::size_t i = 0; i < m; ++i) {
            const double d = voigt(x[i], p1) + voigt(x[i], p2) - y[i];
            r[static_cast<Eigen::Index>(i)] = sd.empty() ? d : d / sd[i];
        }
    };
    auto jacobian = [&](const Values& v, Matrix& jac) {
        const VoigtParams p1{v[0], v[2], v[4], v[5]};
        const VoigtParams p2{v[1], v[3], v[4], v[6]};
        for (std::size_t i = 0; i < m; ++i) {
            const VoigtGradient a = voigt_with_gradient(x[i], p1);
            const VoigtGradient b = voigt_with_gradient(x[i], p2);
            const double wgt = sd.empty() ? 1.0 : 1.0 / sd[i];
            const auto row = static_cast<Eigen::Index>(i);
            jac(row, 0) = a.d_center * wgt;
            jac(row, 1) = b.d_center * wgt;
            jac(row, 2) = a.d_sigma * wgt;
            jac(row, 3) = b.d_sigma * wgt;
            jac(row, 4) = (a.d_gamma + b.d_gamma) * wgt;
            jac(row, 5) = a.d_amplitude * wgt;
            jac(row, 6) = b.d_amplitude * wgt;
        }
    };

    const Values start = map.initial();
    CoreFit core = run_core(map, m, residual, jacobian, {start}, options.lsq);

    // Order the lines by center.
    if (core.values[0] > core.values[1]) {
        const std::vector<std::pair<int, int>> swaps{{0, 1}, {2, 3}, {5, 6}};
        for (auto [a, b] : swaps) {
            std::swap(core.values[static_cast<std::size_t>(a)], core.values[static_cast<std::size_t>(b)]);
            core.covariance.row(a).swap(core.covariance.row(b));
            core.covariance.col(a).swap(core.covariance.col(b));
            std::vector<bool>::swap(core.at_bound[static_cast<std::size_t>(a)],
                                    core.at_bound[static_cast<std::size_t>(b)]);
        }
    }

    const Values& v = core.values;
    const double f1 = voigt_total_fwhm(v[2], v[4]);
    const double f2 = voigt_total_fwhm(v[3], v[4]);
    const double split = v[1] - v[0];
    const double total = v[5] + v[6];
    const double minor = std::min(v[5], v[6]);
    if (!(split >= 0.5 * 0.5 * (f1 + f2)) || !(minor >= 0.05 * total)) {
        std::ostringstream msg;
        msg.precision(5);
        msg << "fit_double_voigt_splitting: lines are not resolved (split " << split
            << " meV, mean FWHM " << 0.5 * (f1 + f2) << " meV, weaker line holds "
            << (total > 0.0 ? 100.0 * minor / total : 0.0)
            << "% of the area); use a fit with fixed widths";
        throw DataError(msg.str());
    }

    FitResult res = assemble("double_voigt", map, core, how + "; " + describe_start(map.defs(), start));
    auto split_of = [](const Values& p) { return p[1] - p[0]; };
    auto f1_of = [](const Values& p) { return voigt_total_fwhm(p[2], p[4]); };
    auto f2_of = [](const Values& p) { return voigt_total_fwhm(p[3], p[4]); };
    add_derived(res, "split", split, propagate(split_of, v, core.covariance, map.defs()));
    add_derived(res, "fwhm_1", f1, propagate(f1_of, v, core.covariance, map.defs()));
    add_derived(res, "fwhm_2", f2, propagate(f2_of, v, core.covariance, map.defs()));
    return res;
}

// --- Zeeman -------------------------------------------------------------------------

FitResult fit_zeeman(const MeasurementSeries& series) {
    series.validate();
    if (series.size() < 3) throw DataError("fit_zeeman: need at least 3 field points");
    const double mub = constants::bohr_magneton_mev_per_t;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double wgt = series.y_err.empty() ? 1.0 : 1.0 / (series.y_err[i] * series.y_err[i]);
        const double u = mub * series.x[i];
        sxx += wgt * u * u;
        sxy += wgt * u * series.y[i];
    }
    if (!(sxx > 0.0)) throw DataError("fit_zeeman: all field values are zero");
    const double g = sxy / sxx;
    double ssr = 0.0;
    bool all_zero = true;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double wgt = series.y_err.empty() ? 1.0 : 1.0 / (series.y_err[i] * series.y_err[i]);
        const double d = series.y[i] - g * mub * series.x[i];
        ssr += wgt * d * d;
        if (series.y[i] != 0.0) all_zero = false;
    }
    FitResult res;
    res.model = "zeeman";
    res.converged = true;
    res.status = "linear least squares";
    res.provenance = "closed form";
    res.residual_norm = std::sqrt(ssr);
    FitParameter p{"g_effective", g, std::sqrt(ssr / static_cast<double>(series.size() - 1) / sxx)};
    if (all_zero) {
        p.value = 0.0;
        p.uncertainty = inf;
        res.flags.push_back("no_splitting");
    }
    res.parameters.push_back(p);
    return res;
}

GFactors compose_g_factors(double g_h, double g_v, double g_h_err, double g_v_err) {
    GFactors out;
    out.g_e = 0.5 * (g_h + g_v);
    out.three_g_hh = 0.5 * (g_h - g_v);
    out.g_e_err = 0.5 * std::hypot(g_h_err, g_v_err);
    out.three_g_hh_err = out.g_e_err;
    return out;
}

// --- Stark polynomial ---------------------------------------------------------------

FitResult fit_stark_polynomial(const MeasurementSeries& series, const FieldConversion& conv,
                               const StarkFitOptions& options) {
    series.validate();
    conv.validate();
    if (series.size() < 6) throw DataError("fit_stark_polynomial: need at least 6 voltage points");
    const std::size_t m = series.size();
    std::vector<double> f(m);
    double fmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        f[i] = local_field_from_voltage(series.x[i], conv).f_loc_kv_cm;
        fmax = std::max(fmax, std::abs(f[i]));
    }
    if (!(fmax > 0.0)) throw ConditioningError("fit_stark_polynomial: all voltages are zero");

    const std::vector<int> powers = options.even_only ? std::vector<int>{2, 4} : std::vector<int>{1, 2, 3, 4};
    const auto k = static_cast<Eigen::Index>(powers.size());
    Matrix X(static_cast<Eigen::Index>(m), k);
    Vector b(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        const double wgt = series.y_err.empty() ? 1.0 : 1.0 / series.y_err[i];
        const auto row = static_cast<Eigen::Index>(i);
        for (Eigen::Index j = 0; j < k; ++j)
            X(row, j) = wgt * std::pow(f[i] / fmax, powers[static_cast<std::size_t>(j)]);
        b[row] = wgt * series.y[i];
    }
    Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cond = sv[k - 1] > 0.0 ? sv[0] / sv[k - 1] : inf;
    if (!(cond <= options.max_condition)) {
        std::ostringstream msg;
        msg << "fit_stark_polynomial: design matrix is ill-conditioned (condition number " << cond
            << "); widen the voltage range or use the even-only model";
        throw ConditioningError(msg.str());
    }
    const Vector coef = svd.solve(b);
    const Vector resid = X * coef - b;
    const double dof = static_cast<double>(std::max<Eigen::Index>(static_cast<Eigen::Index>(m) - k, 1));
    const double s2 = resid.squaredNorm() / dof;
    const Matrix& V = svd.matrixV();
    const Matrix cov = s2 * V * sv.cwiseInverse().cwiseAbs2().asDiagonal() * V.transpose();

    FitResult res;
    res.model = "stark_polynomial";
    res.converged = true;
    res.status = "linear least squares";
    res.provenance = "closed form (SVD)";
    res.residual_norm = resid.norm();
    const std::vector<std::string> names{"d", "beta", "c3", "c4"};
    for (int pw = 1; pw <= 4; ++pw) {
        FitParameter p;
        p.name = names[static_cast<std::size_t>(pw - 1)];
        const auto it = std::find(powers.begin(), powers.end(), pw);
        if (it == powers.end()) {
            p.fixed = true;
        } else {
            const auto j = static_cast<Eigen::Index>(it - powers.begin());
            const double unit = std::pow(fmax, pw);
            p.value = coef[j] / unit;
            p.uncertainty = std::sqrt(std::max(cov(j, j), 0.0)) / unit;
        }
        res.parameters.push_back(p);
    }
    return res;
}

// --- saturation ------------------------------------------------------------------

FitResult fit_saturation(const MeasurementSeries& raw) {
    raw.validate();
    const MeasurementSeries s = raw.sorted();
    if (s.size() < 3) throw DataError("fit_saturation: need at least 3 points");
    if (s.x.front() < 0.0) throw DataError("fit_saturation: negative power");
    const std::size_t m = s.size();
    const double ymax = *std::max_element(s.y.begin(), s.y.end());
    if (!(ymax > 0.0)) throw DataError("fit_saturation: intensities are not positive");

    // Linearized start: 1/I = 1/I_sat + (P_sat/I_sat)(1/P).
    double i0 = 1.5 * ymax;
    double p0 = s.x[m / 2] > 0.0 ? s.x[m / 2] : s.x.back();
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (s.x[i] <= 0.0 || s.y[i] <= 0.0) continue;
            const double u = 1.0 / s.x[i];
            const double v = 1.0 / s.y[i];
            sx += u;
            sy += v;
            sxx += u * u;
            sxy += u * v;
            ++cnt;
        }
        const double den = cnt * sxx - sx * sx;
        if (cnt >= 2 && den > 0.0) {
            const double slope = (cnt * sxy - sx * sy) / den;
            const double icpt = (sy - slope * sx) / cnt;
            if (icpt > 0.0 && slope > 0.0) {
                i0 = 1.0 / icpt;
                p0 = slope / icpt;
            }
        }
    }
    const double xscale = std::max(s.x.back(), 1e-300);

    ParamMap map({
        {"i_sat", i0, 0.0, inf, false, 0.0, ymax},
        {"p_sat", p0, 1e-12 * xscale, inf, false, 0.0, xscale},
    });
    auto residual = [&](const Values& v, Vector& r) {
        for (std::size_t i = 0; i < m; ++i) {
            const double model = v[0] * s.x[i] / (s.x[i] + v[1]);
            const double d = model - s.y[i];
            r[static_cast<Eigen::Index>(i)] = s.y_err.empty() ? d : d / s.y_err[i];
        }
    };
    auto jacobian = [&](const Values& v, Matrix& jac) {
        for (std::size_t i = 0; i < m; ++i) {
            const double den = s.x[i] + v[1];
            const double wgt = s.y_err.empty() ? 1.0 : 1.0 / s.y_err[i];
            const auto row = static_cast<Eigen::Index>(i);
            jac(row, 0) = wgt * s.x[i] / den;
            jac(row, 1) = -wgt * v[0] * s.x[i] / (den * den);
        }
    };
    const Values start = map.initial();
    CoreFit core = run_core(map, m, residual, jacobian, {start}, {});
    FitResult res = assemble("saturation", map, core, describe_start(map.defs(), start));

    const double psat = res.value("p_sat");
    const double rel = res.uncertainty("p_sat") / psat;
    if (!(rel <= 0.25) || s.x.back() < psat) res.flags.push_back("ill_conditioned");

    double noise = core.solution.residuals.norm() / std::sqrt(static_cast<double>(std::max<std::size_t>(m - 2, 1)));
    for (std::size_t i = 1; i < m; ++i) {
        const double tol = 3.0 * (s.y_err.empty() ? noise : std::hypot(s.y_err[i], s.y_err[i - 1]));
        if (s.y[i] < s.y[i - 1] - tol) {
            res.flags.push_back("non_monotonic");
            break;
        }
    }
    return res;
}

// --- polarization --------------------------------------------------------------------

FitResult fit_polarization(const MeasurementSeries& raw) {
    raw.validate();
    const MeasurementSeries s = raw.sorted();
    const std::size_t m = s.size();
    if (m < 5) throw DataError("fit_polarization: need at least 5 angles");
    if (s.x.back() - s.x.front() < 0.5 * constants::pi - 1e-9)
        throw DataError("fit_polarization: angles must cover at least half a period (pi/2 rad)");

    Matrix X(static_cast<Eigen::Index>(m), 3);
    Vector b(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        const double wgt = s.y_err.empty() ? 1.0 : 1.0 / s.y_err[i];
        const auto row = static_cast<Eigen::Index>(i);
        X(row, 0) = wgt;
        X(row, 1) = wgt * std::cos(2.0 * s.x[i]);
        X(row, 2) = wgt * std::sin(2.0 * s.x[i]);
        b[row] = wgt * s.y[i];
    }
    Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector c = svd.solve(b);
    const Vector resid = X * c - b;
    const double s2 = resid.squaredNorm() / static_cast<double>(m - 3);
    const Vector& sv = svd.singularValues();
    const Matrix& V = svd.matrixV();
    const Matrix cov = s2 * V * sv.cwiseInverse().cwiseAbs2().asDiagonal() * V.transpose();

    const double i0 = c[0];
    if (!(i0 > 0.0)) throw DataError("fit_polarization: mean intensity I0 <= 0");
    const double a = c[1];
    const double bb = c[2];
    const double i1 = std::hypot(a, bb);
    double theta0 = 0.5 * std::atan2(bb, a);
    if (theta0 < 0.0) theta0 += constants::pi;
    if (theta0 >= constants::pi) theta0 -= constants::pi;

    // d(i0, i1, theta0, V)/d(c0, a, b)
    Matrix G = Matrix::Zero(4, 3);
    G(0, 0) = 1.0;
    const bool has_i1 = i1 > 1e-12 * i0;
    if (has_i1) {
        G(1, 1) = a / i1;
        G(1, 2) = bb / i1;
        G(2, 1) = -0.5 * bb / (i1 * i1);
        G(2, 2) = 0.5 * a / (i1 * i1);
    }
    G(3, 0) = -i1 / (i0 * i0);
    G.row(3).segment(1, 2) = G.row(1).segment(1, 2) / i0;
    const Matrix pc = G * cov * G.transpose();

    FitResult res;
    res.model = "polarization";
    res.converged = true;
    res.status = "linear least squares";
    res.provenance = "closed form (SVD)";
    res.residual_norm = resid.norm();
    res.parameters.push_back({"i0", i0, safe_sqrt(pc(0, 0))});
    res.parameters.push_back({"i1", i1, safe_sqrt(pc(1, 1))});
    res.parameters.push_back({"theta0", has_i1 ? theta0 : 0.0, has_i1 ? safe_sqrt(pc(2, 2)) : inf});
    FitParameter vis{"visibility", i1 / i0, safe_sqrt(pc(3, 3))};
    vis.derived = true;
    res.parameters.push_back(vis);
    if (!has_i1) res.flags.push_back("theta0_undefined");
    return res;
}

// --- optical suppression ------------------------------------------------------------------

namespace {

double power_width(double bs2, double kappa, double p, double gamma) {
    const double var = variance_shift_khat(bs2, kappa, std::clamp(p, 0.0, 1.0));
    return voigt_fwhm_approx(fwhm_per_sigma * std::sqrt(std::max(var, 0.0)), 2.0 * gamma);
}

// values: p0, p_sat, beta_s2, kappa_hat, p_inf, center_offset
std::vector<double> power_widths(const Values& v, const std::vector<double>& powers,
                                 const PowerSuppressionOptions& opt) {
    const OpticalSuppressionParams op{v[0], v[4], v[1]};
    const double ref = opt.normalized ? power_width(v[2], v[3], v[0], opt.gamma_lorentz) : 1.0;
    std::vector<double> out;
    out.reserve(powers.size());
    for (double P : powers) {
        const double p = op.p0 + (op.p_inf - op.p0) * P / (P + op.p_sat_nw);
        out.push_back(power_width(v[2], v[3], p, opt.gamma_lorentz) / ref);
    }
    return out;
}

double power_center(const Values& v, double P, const PowerSuppressionOptions& opt) {
    const double p = v[0] + (v[4] - v[0]) * P / (P + v[1]);
    const double mu = v[2] * p;
    if (opt.center_units == CenterUnits::energy_mev) return v[5] + mu;
    return v[5] + energy_to_wavelength_shift(mu, opt.lambda0_nm);
}

std::vector<double> block_scales(const MeasurementSeries& s) {
    std::vector<double> sc(s.size());
    if (s.size() == 0) return sc;
    double range = series_range(s.y);
    if (!(range > 0.0)) {
        double mean_abs = 0.0;
        for (double v : s.y) mean_abs += std::abs(v);
        range = mean_abs > 0.0 ? mean_abs / static_cast<double>(s.size()) : 1.0;
    }
    const double root_n = std::sqrt(static_cast<double>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i)
        sc[i] = (s.y_err.empty() ? range : s.y_err[i]) * root_n;
    return sc;
}

}  // namespace

FitResult fit_suppression_power(const MeasurementSeries& width_raw, const MeasurementSeries& center_raw,
                                const PowerSuppressionOptions& opt) {
    width_raw.validate();
    center_raw.validate();
    const MeasurementSeries wd = width_raw.sorted();
    const MeasurementSeries ce = center_raw.sorted();
    if (wd.size() < 5) throw DataError("fit_suppression_power: need at least 5 linewidth points");
    if (wd.x.front() < 0.0 || (ce.size() && ce.x.front() < 0.0))
        throw DataError("fit_suppression_power: negative power");
    if (!(opt.gamma_lorentz >= 0.0)) throw ConfigError("fit_suppression_power: gamma_lorentz must be >= 0");
    if (opt.n_max < 1) throw ConfigError("fit_suppression_power: n_max must be >= 1");

    const std::vector<double> sw = block_scales(wd);
    std::vector<double> sc = block_scales(ce);
    for (double& v : sc) v /= opt.center_weight;
    const std::size_t m = wd.size() + ce.size();

    double pmax = 0.0;
    double pmin_pos = inf;
    for (double P : wd.x) {
        pmax = std::max(pmax, P);
        if (P > 0.0) pmin_pos = std::min(pmin_pos, P);
    }
    if (!(pmax > 0.0)) throw DataError("fit_suppression_power: powers are all zero");
    const double psat_lo = 0.1 * pmin_pos;
    const double psat_hi = 10.0 * pmax;
    const double wmax = *std::max_element(wd.y.begin(), wd.y.end());
    const double w_meV = opt.normalized ? wmax * std::max(2.0 * opt.gamma_lorentz, 1e-3) : wmax;
    const double bs2_lo = 1e-3 * w_meV;
    const double bs2_hi = 10.0 * w_meV;
    const double khat_lo = 1.0 / static_cast<double>(opt.n_max);

    double offset0 = 0.0;
    double offset_scale = 1.0;
    if (ce.size()) {
        offset0 = ce.y.front();
        offset_scale = std::max(series_range(ce.y), 1e-12 * std::max(std::abs(offset0), 1.0));
    }

    ParamMap map({
        {"p0", 0.5, 0.0, 1.0, false, 0.0, 1.0},
        {"p_sat", std::sqrt(psat_lo * psat_hi), psat_lo, psat_hi, false, 0.0, pmax},
        {"beta_s2", w_meV, 0.0, bs2_hi, false, 0.0, w_meV},
        {"kappa_hat", 0.1, khat_lo, 1.0, false, 0.0, 1.0},
        {"p_inf", opt.p_inf, 0.0, 1.0, opt.fix_p_inf, 0.0, 1.0},
        {"center_offset", offset0, -inf, inf, ce.size() == 0, offset0, offset_scale},
    });

    auto residual = [&](const Values& v, Vector& r) {
        const std::vector<double> model = power_widths(v, wd.x, opt);
        Eigen::Index row = 0;
        for (std::size_t i = 0; i < wd.size(); ++i) r[row++] = (model[i] - wd.y[i]) / sw[i];
        for (std::size_t i = 0; i < ce.size(); ++i)
            r[row++] = (power_center(v, ce.x[i], opt) - ce.y[i]) / sc[i];
    };

    // Latin-hypercube starts: p0, log p_sat, log beta_s2, kappa_hat (p_inf at
    // its initial value when free). The offset is solved from the first center.
    const Vector unit_lo = Vector::Zero(5);
    const Vector unit_hi = Vector::Ones(5);
    const auto cube = latin_hypercube(unit_lo, unit_hi, std::max<std::size_t>(opt.n_starts, 1), opt.seed);
    std::vector<Values> starts;
    for (const auto& u : cube) {
        Values v = map.initial();
        v[0] = 0.02 + 0.96 * u[0];
        v[1] = psat_lo * std::pow(psat_hi / psat_lo, u[1]);
        v[2] = bs2_lo * std::pow(bs2_hi / bs2_lo, u[2]);
        v[3] = khat_lo + (1.0 - khat_lo) * u[3];
        if (!opt.fix_p_inf) v[4] = 0.02 + 0.96 * u[4];
        if (ce.size()) {
            v[5] = 0.0;
            v[5] = ce.y.front() - power_center(v, ce.x.front(), opt);
        }
        starts.push_back(v);
    }

    CoreFit core = run_core(map, m, residual, nullptr, starts, opt.lsq);
    std::ostringstream prov;
    prov << "latin hypercube, " << starts.size() << " starts, seed " << opt.seed << ", best start "
         << core.best_start << " (" << core.n_converged << " converged)";
    FitResult res = assemble("suppression_power", map, core, prov.str());

    const double psat = res.value("p_sat");
    const double rel = res.uncertainty("p_sat") / psat;
    if (std::abs(res.value("p_inf") - res.value("p0")) < 0.02 || !(rel <= 1.0))
        res.flags.push_back("unidentifiable_p_sat");

    const auto widths = power_widths(core.values, {0.0, pmax}, opt);
    add_derived(res, "final_to_initial_linewidth", widths[1] / widths[0], 0.0);
    return res;
}

std::vector<double> suppression_power_linewidth(const FitResult& fit, const std::vector<double>& powers,
                                                const PowerSuppressionOptions& options) {
    const Values v{fit.value("p0"), fit.value("p_sat"), fit.value("beta_s2"),
                   fit.value("kappa_hat"), fit.value("p_inf"), fit.value("center_offset")};
    return power_widths(v, powers, options);
}

// --- electrical suppression ----------------------------------------------------------------

namespace {

// values: p0, log10_b, alpha, gamma_stretch, e_star, beta_s2, kappa_hat, heating_c
std::vector<double> field_widths(const Values& v, const std::vector<double>& volts,
                                 const FieldSuppressionOptions& opt) {
    ElectricalSuppressionParams el;
    el.p0 = std::clamp(v[0], 0.0, 1.0);
    el.b = std::pow(10.0, v[1]);
    el.alpha = v[2];
    el.gamma_stretch = v[3];
    el.e_star_kv_cm = v[4];
    const double s2 = v[5] / opt.beta;
    const BiasMoments mom{s2, v[6] * s2 * s2};
    StarkResponse resp;
    resp.beta = opt.beta;
    resp.heating_c = v[7];

    std::vector<double> grid = volts;
    if (opt.normalized) grid.push_back(0.0);
    const auto sweep = field_sweep(grid, opt.conversion, el, mom, resp, opt.gamma_lorentz);
    std::vector<double> out(volts.size());
    const double ref = opt.normalized ? sweep.back().voigt_fwhm : 1.0;
    for (std::size_t i = 0; i < volts.size(); ++i) out[i] = sweep[i].voigt_fwhm / ref;
    return out;
}

}  // namespace

FitResult fit_suppression_field(const MeasurementSeries& raw, const FieldSuppressionOptions& opt) {
    raw.validate();
    const MeasurementSeries s = raw.sorted();
    if (s.size() < 6) throw DataError("fit_suppression_field: need at least 6 voltage points");
    opt.conversion.validate();
    if (!(opt.beta > 0.0)) throw ConfigError("fit_suppression_field: beta must be > 0");
    if (opt.n_max < 1) throw ConfigError("fit_suppression_field: n_max must be >= 1");
    const std::size_t m = s.size();
    const double khat_lo = 1.0 / static_cast<double>(opt.n_max);
    const bool fix_khat = opt.fixed_kappa_hat.has_value();
    const bool fix_bs2 = opt.fixed_beta_s2.has_value();
    if (fix_bs2 && !(*opt.fixed_beta_s2 > 0.0))
        throw ConfigError("fit_suppression_field: fixed beta_s2 must be > 0");

    ParamMap map({
        {"p0", 0.5 * (opt.p0_min + opt.p0_max), opt.p0_min, opt.p0_max, false, 0.0, 1.0},
        {"log10_b", 0.5 * (opt.log10_b_min + opt.log10_b_max), opt.log10_b_min, opt.log10_b_max, false, 0.0, 1.0},
        {"alpha", opt.alpha, 0.0, 3.0, !opt.free_alpha, 0.0, 1.0},
        {"gamma_stretch", opt.gamma_stretch, 0.1, 5.0, !opt.free_gamma_stretch, 0.0, 1.0},
        {"e_star", 0.5 * (opt.e_star_min + opt.e_star_max), opt.e_star_min, opt.e_star_max, false, 0.0,
         opt.e_star_max - opt.e_star_min},
        {"beta_s2", fix_bs2 ? *opt.fixed_beta_s2 : 1.0, fix_bs2 ? *opt.fixed_beta_s2 : opt.beta_s2_min,
         fix_bs2 ? *opt.fixed_beta_s2 : opt.beta_s2_max, fix_bs2, 0.0, 1.0},
        {"kappa_hat", fix_khat ? *opt.fixed_kappa_hat : 0.1, khat_lo, 1.0, fix_khat, 0.0, 1.0},
        {"heating_c", 0.0, 0.0, opt.heating_max, false, 0.0, opt.heating_max},
    });

    std::vector<double> scale(m, 1.0);
    if (!s.y_err.empty()) scale = s.y_err;
    auto residual = [&](const Values& v, Vector& r) {
        const auto model = field_widths(v, s.x, opt);
        for (std::size_t i = 0; i < m; ++i) r[static_cast<Eigen::Index>(i)] = (model[i] - s.y[i]) / scale[i];
    };

    const auto cube = latin_hypercube(Vector::Zero(7), Vector::Ones(7),
                                      std::max<std::size_t>(opt.n_starts, 1), opt.seed);
    std::vector<Values> starts;
    for (const auto& u : cube) {
        Values v = map.initial();
        v[0] = opt.p0_min + (opt.p0_max - opt.p0_min) * u[0];
        v[1] = opt.log10_b_min + (opt.log10_b_max - opt.log10_b_min) * u[1];
        v[4] = opt.e_star_min * std::pow(opt.e_star_max / opt.e_star_min, u[2]);
        if (!fix_bs2) v[5] = opt.beta_s2_min * std::pow(opt.beta_s2_max / opt.beta_s2_min, u[3]);
        if (!fix_khat) v[6] = khat_lo + (1.0 - khat_lo) * u[4];
        v[7] = opt.heating_max * 0.1 * u[5];
        if (opt.free_alpha) v[2] = 1.0 * u[6];
        starts.push_back(v);
    }

    CoreFit core = run_core(map, m, residual, nullptr, starts, opt.lsq);
    std::ostringstream prov;
    prov << "latin hypercube, " << starts.size() << " starts, seed " << opt.seed << ", best start "
         << core.best_start << " (" << core.n_converged << " converged)";
    FitResult res = assemble("suppression_field", map, core, prov.str());

    // Report B itself alongside its logarithm.
    const auto& lb = res.param("log10_b");
    const double b = std::pow(10.0, lb.value);
    add_derived(res, "b", b, std::isfinite(lb.uncertainty) ? b * std::log(10.0) * lb.uncertainty : inf);
    const double s2 = res.value("beta_s2") / opt.beta;
    add_derived(res, "s2", s2, res.uncertainty("beta_s2") / opt.beta);
    add_derived(res, "s4", res.value("kappa_hat") * s2 * s2, 0.0);
    return res;
}

std::vector<double> suppression_field_linewidth(const FitResult& fit, const std::vector<double>& voltages,
                                                const FieldSuppressionOptions& options) {
    const Values v{fit.value("p0"),     fit.value("log10_b"),   fit.value("alpha"),
                   fit.value("gamma_stretch"), fit.value("e_star"), fit.value("beta_s2"),
                   fit.value("kappa_hat"), fit.value("heating_c")};
    return field_widths(v, voltages, options);
}

}  // namespace trapnoise
