#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "precis/lasso.hpp"
#include "precis/matrix.hpp"

namespace precis {

// Column-wise precision matrix estimate: theta column j is the rescaled
// regression of variable j on all others. theta is deliberately NOT
// symmetric; symmetrization happens downstream.
struct PrecisionEstimate {
    enum class Variant { lasso, sqrt_lasso };

    Matrix theta;                             // p x p, column j = Gamma_j / tau_sq[j]
    std::vector<std::vector<double>> gammas;  // gammas[j] has p-1 coefficients
    std::vector<double> tau_sq;               // per-column noise level
    std::vector<double> lambdas;              // per-column penalty actually used
    Variant variant = Variant::lasso;
    std::vector<std::uint8_t> column_converged;

    std::size_t dim() const { return theta.rows(); }
    bool all_converged() const;
};

struct KktReport {
    std::vector<double> per_column_violation; // max_i |(Sigma_hat theta_j - e_j)_i|
    std::vector<double> per_column_bound;     // lambda_j / tau_sq_j
    double worst_ratio = 0.0;
};

// Penalty rule shared by every column: with s_hat = sqrt(n)/log(p) and
// B the (1 - s_hat/(2p)) quantile of a t distribution on n-1 degrees of
// freedom, lambda = B / sqrt(n - 1 + B^2).
double tuning_lambda(std::size_t n, std::size_t p);

struct NodewiseColumn {
    std::vector<double> gamma; // p-1 regression coefficients
    double tau_sq = 0.0;
    std::vector<double> theta_col; // length p
    bool converged = false;
};

// Single regression of column j on the remaining columns; tau_sq is the
// penalized form ||X_j - X_{-j} g||^2 / n + lambda_j * ||g||_1. A tau_sq
// below 1e-12 raises DegenerateColumnError.
//
// With scale_predictors the regression is solved on predictors divided by
// their sample standard deviation (the convention of the usual R solvers),
// so lambda penalizes per-unit-variance coefficients. gamma is mapped back
// to raw units; the l1 term inside tau_sq stays on the scaled coefficients.
// Note the KKT bound lambda_j / tau_sq_j holds for raw fits only.
NodewiseColumn nodewise_column(const Matrix& x, std::size_t j, double lambda_j,
                               const SolverOptions& opts = {}, bool scale_predictors = false);

// Assembles all p columns. Columns are independent; with threads > 1 they are
// solved by a worker pool with output identical to the sequential order.
PrecisionEstimate nodewise_lasso(const Matrix& x, const std::vector<double>& lambdas,
                                 const SolverOptions& opts = {}, std::size_t threads = 1,
                                 bool scale_predictors = false);

// Convenience overload: one shared lambda for every column.
PrecisionEstimate nodewise_lasso(const Matrix& x, double lambda, const SolverOptions& opts = {},
                                 std::size_t threads = 1, bool scale_predictors = false);

// Average of theta and its transpose; both triangles estimate the same
// matrix, so averaging halves the noise and keeps exact zeros exact.
SymMatrix symmetrized_theta(const PrecisionEstimate& est);

// Square-root variant: per-column solve_sqrt_lasso at lambda0, rescaled by
// tau_tilde_sq = tau_hat_sq + lambda0 * tau_hat * ||g||_1 with
// tau_hat_sq = ||X_j - X_{-j} g||^2 / n.
PrecisionEstimate nodewise_sqrt_lasso(const Matrix& x, double lambda0,
                                      const SolverOptions& opts = {}, std::size_t threads = 1);

// Per-column sup-norm residuals of Sigma_hat * theta_j - e_j against the
// lambda_j / tau_sq_j bound. A zero bound yields ratio 0 when the violation
// is also 0 and +infinity otherwise.
KktReport verify_kkt(const SymMatrix& sigma_hat, const PrecisionEstimate& est);

} // namespace precis
