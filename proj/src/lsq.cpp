#include "trapnoise/lsq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "trapnoise/errors.hpp"
#include "trapnoise/rng.hpp"

namespace trapnoise {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Vector bound_or(const Vector& b, Eigen::Index n, double fill) {
    if (b.size() == 0) return Vector::Constant(n, fill);
    if (b.size() != n) throw DomainError("solve_lsq: bound vector has the wrong length");
    return b;
}

Vector clamp_to(const Vector& x, const Vector& lo, const Vector& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

struct Evaluator {
    const LsqProblem& problem;
    int evaluations = 0;

    Vector residuals(const Vector& x) {
        Vector r(static_cast<Eigen::Index>(problem.n_residuals));
        problem.residuals(x, r);
        ++evaluations;
        return r;
    }

    Matrix jacobian(const Vector& x) {
        if (problem.jacobian) {
            Matrix jac(static_cast<Eigen::Index>(problem.n_residuals), x.size());
            problem.jacobian(x, jac);
            return jac;
        }
        return numeric_jacobian(problem, x);
    }
};

bool all_finite(const Vector& v) {
    return v.allFinite();
}

}  // namespace

std::string to_string(LsqStatus status) {
    switch (status) {
        case LsqStatus::gradient: return "gradient tolerance reached";
        case LsqStatus::step_size: return "step size below tolerance";
        case LsqStatus::cost_change: return "cost change below tolerance";
        case LsqStatus::zero_residual: return "zero residual";
        case LsqStatus::max_iterations: return "maximum iterations reached";
        case LsqStatus::failed: return "failed";
    }
    return "unknown";
}

Matrix numeric_jacobian(const LsqProblem& problem, const Vector& x) {
    const Eigen::Index n = x.size();
    const auto m = static_cast<Eigen::Index>(problem.n_residuals);
    const Vector lo = bound_or(problem.lower, n, -inf);
    const Vector hi = bound_or(problem.upper, n, inf);
    const double eps3 = std::cbrt(std::numeric_limits<double>::epsilon());

    Matrix jac(m, n);
    Vector r0(m);
    bool have_r0 = false;
    Vector rp(m);
    Vector rm(m);
    for (Eigen::Index j = 0; j < n; ++j) {
        double scale = std::max(std::abs(x[j]), 1.0);
        if (problem.typical.size() == n) scale = std::max(std::abs(x[j]), std::abs(problem.typical[j]));
        if (scale == 0.0) scale = 1.0;
        const double h = eps3 * scale;
        Vector xp = x;
        Vector xm = x;
        const bool up_ok = x[j] + h <= hi[j];
        const bool down_ok = x[j] - h >= lo[j];
        if (up_ok && down_ok) {
            xp[j] += h;
            xm[j] -= h;
            problem.residuals(xp, rp);
            problem.residuals(xm, rm);
            jac.col(j) = (rp - rm) / (xp[j] - xm[j]);
            continue;
        }
        if (!have_r0) {
            problem.residuals(x, r0);
            have_r0 = true;
        }
        if (up_ok) {
            xp[j] += h;
            problem.residuals(xp, rp);
            jac.col(j) = (rp - r0) / (xp[j] - x[j]);
        } else {
            xm[j] -= h;
            problem.residuals(xm, rm);
            jac.col(j) = (r0 - rm) / (x[j] - xm[j]);
        }
    }
    return jac;
}

LsqSolution solve_lsq(const LsqProblem& problem, const Vector& x0, const LsqOptions& options) {
    if (!problem.residuals) throw DomainError("solve_lsq: no residual function");
    const Eigen::Index n = x0.size();
    if (n == 0) throw DomainError("solve_lsq: no parameters");
    const Vector lo = bound_or(problem.lower, n, -inf);
    const Vector hi = bound_or(problem.upper, n, inf);
    if ((lo.array() > hi.array()).any()) throw DomainError("solve_lsq: lower bound above upper bound");

    Evaluator eval{problem};
    LsqSolution sol;
    sol.x = clamp_to(x0, lo, hi);
    sol.residuals = eval.residuals(sol.x);
    if (!all_finite(sol.residuals)) {
        sol.status = LsqStatus::failed;
        sol.cost = inf;
        sol.evaluations = eval.evaluations;
        return sol;
    }
    sol.cost = 0.5 * sol.residuals.squaredNorm();
    sol.jacobian = eval.jacobian(sol.x);

    Vector diag = sol.jacobian.colwise().norm().transpose();
    double mu = -1.0;
    double nu = 2.0;
    sol.status = LsqStatus::max_iterations;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        sol.iterations = iter + 1;
        const Vector& r = sol.residuals;
        const Matrix& J = sol.jacobian;
        const Vector g = J.transpose() * r;
        const double rnorm = r.norm();

        if (rnorm == 0.0) {
            sol.status = LsqStatus::zero_residual;
            sol.gradient_norm = 0.0;
            break;
        }

        // Active set: variables sitting on a bound whose descent direction
        // points out of the box are frozen for this step.
        std::vector<Eigen::Index> free_idx;
        double gcos = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const bool pinned = (sol.x[j] <= lo[j] && g[j] > 0.0) || (sol.x[j] >= hi[j] && g[j] < 0.0);
            if (pinned) continue;
            free_idx.push_back(j);
            const double cn = J.col(j).norm();
            if (cn > 0.0) gcos = std::max(gcos, std::abs(g[j]) / (cn * rnorm));
        }
        sol.gradient_norm = gcos;
        if (gcos <= options.gtol || free_idx.empty()) {
            sol.status = LsqStatus::gradient;
            break;
        }

        const auto nf = static_cast<Eigen::Index>(free_idx.size());
        Matrix Jf(J.rows(), nf);
        Vector Df(nf);
        for (Eigen::Index k = 0; k < nf; ++k) {
            const Eigen::Index j = free_idx[static_cast<std::size_t>(k)];
            Jf.col(k) = J.col(j);
            diag[j] = std::max(diag[j], J.col(j).norm());
            Df[k] = diag[j] > 0.0 ? diag[j] : 1.0;
        }
        if (mu < 0.0) mu = 1e-3;  // relative to the scaled diagonal

        bool accepted = false;
        bool stalled = false;
        while (!accepted) {
            // min |Jf h + r|^2 + mu |Df h|^2 via QR of the stacked system.
            Matrix A(Jf.rows() + nf, nf);
            A.topRows(Jf.rows()) = Jf;
            A.bottomRows(nf) = (std::sqrt(mu) * Df).asDiagonal();
            Vector b = Vector::Zero(A.rows());
            b.head(r.size()) = -r;
            const Vector h = A.householderQr().solve(b);

            Vector x_new = sol.x;
            for (Eigen::Index k = 0; k < nf; ++k) x_new[free_idx[static_cast<std::size_t>(k)]] += h[k];
            x_new = clamp_to(x_new, lo, hi);
            const Vector step = x_new - sol.x;
            const double step_norm = step.norm();

            if (step_norm <= options.xtol * (sol.x.norm() + options.xtol)) {
                stalled = true;
                sol.status = LsqStatus::step_size;
                break;
            }

            const Vector js = J * step;
            const double predicted = sol.cost - 0.5 * (r + js).squaredNorm();
            const Vector r_new = eval.residuals(x_new);
            const double cost_new = all_finite(r_new) ? 0.5 * r_new.squaredNorm() : inf;
            const double actual = sol.cost - cost_new;
            const double rho = predicted > 0.0 ? actual / predicted : -1.0;

            if (rho > 0.0 && actual > 0.0) {
                const double old_cost = sol.cost;
                sol.x = x_new;
                sol.residuals = r_new;
                sol.cost = cost_new;
                sol.jacobian = eval.jacobian(sol.x);
                mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
                nu = 2.0;
                accepted = true;
                if (actual <= options.ftol * old_cost && predicted <= options.ftol * old_cost) {
                    stalled = true;
                    sol.status = LsqStatus::cost_change;
                }
            } else {
                mu *= nu;
                nu *= 2.0;
                if (!std::isfinite(mu) || mu > 1e300) {
                    stalled = true;
                    sol.status = LsqStatus::step_size;
                    break;
                }
            }
        }
        if (stalled) break;
    }
    sol.evaluations = eval.evaluations;
    return sol;
}

Matrix covariance_from_jacobian(const Matrix& jac, const Vector& residuals,
                                const std::vector<bool>& pinned, double rcond) {
    const Eigen::Index n = jac.cols();
    const Eigen::Index m = jac.rows();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (static_cast<std::size_t>(j) < pinned.size() && pinned[static_cast<std::size_t>(j)]) continue;
        keep.push_back(j);
    }
    Matrix cov = Matrix::Zero(n, n);
    if (keep.empty()) return cov;
    const auto nk = static_cast<Eigen::Index>(keep.size());
    Matrix Jk(m, nk);
    for (Eigen::Index k = 0; k < nk; ++k) Jk.col(k) = jac.col(keep[static_cast<std::size_t>(k)]);

    const double dof = static_cast<double>(std::max<Eigen::Index>(m - nk, 1));
    const double s2 = residuals.squaredNorm() / dof;

    Eigen::JacobiSVD<Matrix> svd(Jk, Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const Matrix& V = svd.matrixV();
    const double cutoff = rcond * (sv.size() > 0 ? sv[0] : 0.0);
    Matrix inner = Matrix::Zero(nk, nk);
    std::vector<bool> unresolved(static_cast<std::size_t>(nk), false);
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff && sv[i] > 0.0) {
            inner += V.col(i) * V.col(i).transpose() / (sv[i] * sv[i]);
        } else {
            for (Eigen::Index k = 0; k < nk; ++k)
                if (std::abs(V(k, i)) > 1e-8) unresolved[static_cast<std::size_t>(k)] = true;
        }
    }
    inner *= s2;
    for (Eigen::Index a = 0; a < nk; ++a) {
        for (Eigen::Index b = 0; b < nk; ++b)
            cov(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]) = inner(a, b);
        if (unresolved[static_cast<std::size_t>(a)]) {
            const Eigen::Index j = keep[static_cast<std::size_t>(a)];
            cov(j, j) = inf;
        }
    }
    return cov;
}

std::vector<Vector> latin_hypercube(const Vector& lower, const Vector& upper, std::size_t n,
                                    std::uint64_t seed) {
    if (lower.size() != upper.size()) throw DomainError("latin_hypercube: bound sizes differ");
    if (!lower.allFinite() || !upper.allFinite())
        throw DomainError("latin_hypercube: bounds must be finite");
    if (n == 0) return {};
    Rng rng(seed);
    const Eigen::Index dim = lower.size();
    std::vector<Vector> pts(n, Vector(dim));
    std::vector<std::size_t> perm(n);
    for (Eigen::Index d = 0; d < dim; ++d) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        // Fisher-Yates with our own uniform draws keeps the sequence portable.
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
            std::swap(perm[i], perm[std::min(j, i)]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
            pts[i][d] = lower[d] + u * (upper[d] - lower[d]);
        }
    }
    return pts;
}

MultiStartResult solve_lsq_multistart(const LsqProblem& problem, const std::vector<Vector>& starts,
                                      const LsqOptions& options) {
    if (starts.empty()) throw DomainError("solve_lsq_multistart: no starting points");
    MultiStartResult out;
    out.n_starts = starts.size();
    bool have = false;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        LsqSolution s = solve_lsq(problem, starts[i], options);
        if (s.converged()) ++out.n_converged;
        if (!std::isfinite(s.cost)) continue;
        if (!have || s.cost < out.best.cost) {
            out.best = std::move(s);
            out.best_start = i;
            have = true;
        }
    }
    if (!have) {
        out.best = solve_lsq(problem, starts.front(), options);
        out.best_start = 0;
    } else if (!out.best.converged()) {
        // Polish the best candidate once more from where it stopped.
        LsqSolution again = solve_lsq(problem, out.best.x, options);
        if (again.cost <= out.best.cost) {
            again.iterations += out.best.iterations;
            out.best = std::move(again);
        }
    }
    return out;
}

}  // namespace trapnoise
