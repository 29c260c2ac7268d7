#pragma once

// Bound-constrained nonlinear least squares: Levenberg-Marquardt with
// Moré scaling, projection onto the box and an active set for variables
// pinned at a bound. Small dense problems only (tens of parameters).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace trapnoise {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct LsqProblem {
    std::size_t n_residuals = 0;
    /// r(x), length n_residuals.
    std::function<void(const Vector& x, Vector& r)> residuals;
    /// Optional analytic Jacobian dr/dx (n_residuals x n). Central differences
    /// are used when empty.
    std::function<void(const Vector& x, Matrix& jac)> jacobian;
    /// Box; use +-infinity for free directions. Empty means unbounded.
    Vector lower;
    Vector upper;
    /// Typical magnitude of each parameter, used for finite-difference steps.
    /// Empty means max(|x|, 1).
    Vector typical;
};

struct LsqOptions {
    int max_iterations = 500;
    /// Converged when max_j |J_j . r| / (|J_j| |r|) over free variables is
    /// below gtol (the cosine between the residual and each column).
    double gtol = 1e-10;
    /// Stall criteria: relative step and relative cost decrease.
    double xtol = 1e-10;
    double ftol = 1e-12;
};

enum class LsqStatus { gradient, step_size, cost_change, zero_residual, max_iterations, failed };

std::string to_string(LsqStatus status);

struct LsqSolution {
    Vector x;
    Vector residuals;
    Matrix jacobian;
    double cost = 0.0;           ///< 0.5 |r|^2
    double gradient_norm = 0.0;  ///< projected cosine measure (see gtol)
    int iterations = 0;
    int evaluations = 0;
    LsqStatus status = LsqStatus::failed;
    bool converged() const {
        return status != LsqStatus::max_iterations && status != LsqStatus::failed;
    }
};

LsqSolution solve_lsq(const LsqProblem& problem, const Vector& x0, const LsqOptions& options = {});

/// Central differences, one-sided next to a bound.
Matrix numeric_jacobian(const LsqProblem& problem, const Vector& x);

/// s^2 (J^T J)^+ with s^2 = |r|^2 / (m - n), the pseudo-inverse dropping
/// singular values below rcond * s_max. Columns listed in `pinned` get zero
/// rows and columns (parameters held at a bound).
Matrix covariance_from_jacobian(const Matrix& jac, const Vector& residuals,
                                const std::vector<bool>& pinned = {}, double rcond = 1e-12);

/// n points in the box, one per stratum along every axis, randomly paired.
std::vector<Vector> latin_hypercube(const Vector& lower, const Vector& upper, std::size_t n,
                                    std::uint64_t seed);

struct MultiStartResult {
    LsqSolution best;
    std::size_t best_start = 0;
    std::size_t n_starts = 0;
    std::size_t n_converged = 0;
};

/// Runs solve_lsq from every start in order and keeps the lowest cost (ties
/// keep the earlier start). An unconverged winner gets one restart from its
/// final point.
MultiStartResult solve_lsq_multistart(const LsqProblem& problem, const std::vector<Vector>& starts,
                                      const LsqOptions& options = {});

}  // namespace trapnoise
