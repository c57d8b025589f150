#include "precis/nodewise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "precis/errors.hpp"
#include "precis/numerics.hpp"
#include "precis/parallel.hpp"

namespace precis {

bool PrecisionEstimate::all_converged() const {
    for (auto f : column_converged)
        if (!f) return false;
    return true;
}

double tuning_lambda(std::size_t n, std::size_t p) {
    if (n < 2 || p < 2) throw ConfigError("tuning_lambda: need n >= 2 and p >= 2");
    const double n_d = static_cast<double>(n);
    const double s_hat = std::sqrt(n_d) / std::log(static_cast<double>(p));
    const double tail = s_hat / (2.0 * static_cast<double>(p));
    const double q = 1.0 - tail;
    if (!(q > 0.0 && q < 1.0))
        throw ConfigError("tuning_lambda: quantile level 1 - s_hat/(2p) = " + std::to_string(q) +
                          " is outside (0,1)");
    const double b = student_t_quantile(q, n - 1);
    return b / std::sqrt(n_d - 1.0 + b * b);
}

namespace {

struct ColumnProblem {
    Matrix design;                // X without column j
    std::vector<double> response; // X_j
};

ColumnProblem split_column(const Matrix& x, std::size_t j) {
    const std::size_t n = x.rows(), p = x.cols();
    ColumnProblem cp;
    cp.design = Matrix(n, p - 1);
    cp.response.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = x.row_ptr(r);
        double* drow = cp.design.row_ptr(r);
        for (std::size_t c = 0; c < j; ++c) drow[c] = row[c];
        for (std::size_t c = j + 1; c < p; ++c) drow[c - 1] = row[c];
        cp.response[r] = row[j];
    }
    return cp;
}

// gamma is in raw units; penalty_l1 is the l1 norm on whatever scale the
// solver penalized (equal to ||gamma||_1 for unscaled fits).
NodewiseColumn assemble_column(const Matrix& x, std::size_t j, double lambda_j,
                               std::vector<double> gamma, double penalty_l1, bool converged) {
    const std::size_t n = x.rows(), p = x.cols();
    const double n_d = static_cast<double>(n);

    // Residual sum of squares via the active coefficients only.
    std::vector<double> res(n);
    for (std::size_t r = 0; r < n; ++r) res[r] = x(r, j);
    for (std::size_t k = 0; k < p - 1; ++k) {
        const double g = gamma[k];
        if (g == 0.0) continue;
        const std::size_t col = k < j ? k : k + 1;
        for (std::size_t r = 0; r < n; ++r) res[r] -= g * x(r, col);
    }
    double sse = 0.0;
    for (double r : res) sse += r * r;

    NodewiseColumn out;
    out.gamma = std::move(gamma);
    out.tau_sq = sse / n_d + lambda_j * penalty_l1;
    out.converged = converged;
    if (out.tau_sq < 1e-12)
        throw DegenerateColumnError(j, "nodewise: tau_sq for column " + std::to_string(j) +
                                           " fell below 1e-12");
    out.theta_col.assign(p, 0.0);
    out.theta_col[j] = 1.0 / out.tau_sq;
    for (std::size_t k = 0; k < p - 1; ++k) {
        const std::size_t row = k < j ? k : k + 1;
        out.theta_col[row] = -out.gamma[k] / out.tau_sq;
    }
    return out;
}

// tau_tilde_sq for the square-root variant.
double sqrt_variant_tau_sq(const Matrix& x, std::size_t j, double lambda0,
                           const LassoSolution& sol, std::size_t n) {
    const double n_d = static_cast<double>(n);
    std::vector<double> res(n);
    const std::size_t p = x.cols();
    for (std::size_t r = 0; r < n; ++r) res[r] = x(r, j);
    for (std::size_t k = 0; k < p - 1; ++k) {
        const double g = sol.coefficients[k];
        if (g == 0.0) continue;
        const std::size_t col = k < j ? k : k + 1;
        for (std::size_t r = 0; r < n; ++r) res[r] -= g * x(r, col);
    }
    double sse = 0.0;
    for (double r : res) sse += r * r;
    double l1 = 0.0;
    for (double g : sol.coefficients) l1 += std::fabs(g);
    const double tau_hat_sq = sse / n_d;
    return tau_hat_sq + lambda0 * std::sqrt(tau_hat_sq) * l1;
}

// Per-column sample standard deviations (about the column mean, n-1 divisor).
std::vector<double> column_sd(const Matrix& m) {
    const std::size_t n = m.rows(), k = m.cols();
    std::vector<double> mean(k, 0.0), sd(k, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < k; ++c) mean[c] += m(r, c);
    for (double& v : mean) v /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            const double d = m(r, c) - mean[c];
            sd[c] += d * d;
        }
    for (double& v : sd) v = std::sqrt(v / static_cast<double>(n - 1));
    return sd;
}

using ColumnSolver = NodewiseColumn (*)(const Matrix&, std::size_t, double,
                                        const SolverOptions&);

NodewiseColumn solve_column_raw(const Matrix& x, std::size_t j, double lambda_j,
                                const SolverOptions& opts) {
    return nodewise_column(x, j, lambda_j, opts, false);
}

NodewiseColumn solve_column_scaled(const Matrix& x, std::size_t j, double lambda_j,
                                   const SolverOptions& opts) {
    return nodewise_column(x, j, lambda_j, opts, true);
}

PrecisionEstimate assemble_estimate(const Matrix& x, const std::vector<double>& lambdas,
                                    const SolverOptions& opts, std::size_t threads,
                                    PrecisionEstimate::Variant variant, ColumnSolver solver) {
    const std::size_t p = x.cols();
    if (p < 1) throw std::invalid_argument("nodewise: design has no columns");
    if (x.rows() < 1) throw std::invalid_argument("nodewise: design has no rows");
    if (lambdas.size() != p)
        throw std::invalid_argument("nodewise: lambda vector length does not match columns");
    for (double l : lambdas)
        if (!(l >= 0.0)) throw std::domain_error("nodewise: lambdas must be nonnegative");

    std::vector<NodewiseColumn> columns(p);
    parallel_for_index(0, p, threads, [&](std::size_t j) {
        try {
            columns[j] = solver(x, j, lambdas[j], opts);
        } catch (const NumericError&) {
            throw;
        } catch (const std::exception& e) {
            throw NumericError("nodewise: column " + std::to_string(j) + ": " + e.what());
        }
    });

    PrecisionEstimate est;
    est.variant = variant;
    est.theta = Matrix(p, p, 0.0);
    est.gammas.resize(p);
    est.tau_sq.resize(p);
    est.lambdas = lambdas;
    est.column_converged.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        est.gammas[j] = std::move(columns[j].gamma);
        est.tau_sq[j] = columns[j].tau_sq;
        est.column_converged[j] = columns[j].converged ? 1 : 0;
        for (std::size_t i = 0; i < p; ++i) est.theta(i, j) = columns[j].theta_col[i];
    }
    return est;
}

NodewiseColumn solve_column_sqrt(const Matrix& x, std::size_t j, double lambda0,
                                 const SolverOptions& opts) {
    ColumnProblem cp = split_column(x, j);
    LassoProblem prob{std::move(cp.design), std::move(cp.response), lambda0};
    const LassoSolution sol = solve_sqrt_lasso(prob, opts);

    NodewiseColumn out;
    out.gamma = sol.coefficients;
    out.converged = sol.converged;
    out.tau_sq = sqrt_variant_tau_sq(x, j, lambda0, sol, x.rows());
    if (out.tau_sq < 1e-12)
        throw DegenerateColumnError(j, "nodewise: tau_sq for column " + std::to_string(j) +
                                           " fell below 1e-12");
    const std::size_t p = x.cols();
    out.theta_col.assign(p, 0.0);
    out.theta_col[j] = 1.0 / out.tau_sq;
    for (std::size_t k = 0; k < p - 1; ++k) {
        const std::size_t row = k < j ? k : k + 1;
        out.theta_col[row] = -out.gamma[k] / out.tau_sq;
    }
    return out;
}

} // namespace

NodewiseColumn nodewise_column(const Matrix& x, std::size_t j, double lambda_j,
                               const SolverOptions& opts, bool scale_predictors) {
    const std::size_t p = x.cols();
    if (j >= p) throw std::invalid_argument("nodewise_column: column index out of range");
    if (!(lambda_j >= 0.0)) throw std::domain_error("nodewise_column: lambda must be >= 0");
    ColumnProblem cp = split_column(x, j);

    if (!scale_predictors) {
        LassoProblem prob{std::move(cp.design), std::move(cp.response), lambda_j};
        const LassoSolution sol = solve_lasso(prob, opts);
        double l1 = 0.0;
        for (double g : sol.coefficients) l1 += std::fabs(g);
        return assemble_column(x, j, lambda_j, sol.coefficients, l1, sol.converged);
    }

    if (x.rows() < 2)
        throw std::invalid_argument("nodewise_column: scaled fits need at least two rows");
    std::vector<double> sd = column_sd(cp.design);
    // Zero-variance predictors pass through unscaled; the solver returns a
    // zero coefficient for them anyway.
    for (double& s : sd)
        if (!(s > 0.0)) s = 1.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        double* row = cp.design.row_ptr(r);
        for (std::size_t k = 0; k < p - 1; ++k) row[k] /= sd[k];
    }
    LassoProblem prob{std::move(cp.design), std::move(cp.response), lambda_j};
    const LassoSolution sol = solve_lasso(prob, opts);
    double l1 = 0.0;
    for (double g : sol.coefficients) l1 += std::fabs(g);
    std::vector<double> gamma(p - 1);
    for (std::size_t k = 0; k < p - 1; ++k) gamma[k] = sol.coefficients[k] / sd[k];
    return assemble_column(x, j, lambda_j, std::move(gamma), l1, sol.converged);
}

PrecisionEstimate nodewise_lasso(const Matrix& x, const std::vector<double>& lambdas,
                                 const SolverOptions& opts, std::size_t threads,
                                 bool scale_predictors) {
    return assemble_estimate(x, lambdas, opts, threads, PrecisionEstimate::Variant::lasso,
                             scale_predictors ? &solve_column_scaled : &solve_column_raw);
}

PrecisionEstimate nodewise_lasso(const Matrix& x, double lambda, const SolverOptions& opts,
                                 std::size_t threads, bool scale_predictors) {
    return nodewise_lasso(x, std::vector<double>(x.cols(), lambda), opts, threads,
                          scale_predictors);
}

SymMatrix symmetrized_theta(const PrecisionEstimate& est) {
    const std::size_t p = est.dim();
    SymMatrix out(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) out.set(i, j, 0.5 * (est.theta(i, j) + est.theta(j, i)));
    return out;
}

PrecisionEstimate nodewise_sqrt_lasso(const Matrix& x, double lambda0, const SolverOptions& opts,
                                      std::size_t threads) {
    return assemble_estimate(x, std::vector<double>(x.cols(), lambda0), opts, threads,
                             PrecisionEstimate::Variant::sqrt_lasso, &solve_column_sqrt);
}

KktReport verify_kkt(const SymMatrix& sigma_hat, const PrecisionEstimate& est) {
    const std::size_t p = est.dim();
    if (sigma_hat.dim() != p) throw std::invalid_argument("verify_kkt: dimension mismatch");

    const Matrix prod = matmul(sigma_hat.as_matrix(), est.theta);
    KktReport report;
    report.per_column_violation.resize(p);
    report.per_column_bound.resize(p);
    double worst = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        double viol = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            const double target = i == j ? 1.0 : 0.0;
            viol = std::max(viol, std::fabs(prod(i, j) - target));
        }
        const double bound = est.lambdas[j] / est.tau_sq[j];
        report.per_column_violation[j] = viol;
        report.per_column_bound[j] = bound;
        double ratio;
        if (bound > 0.0)
            ratio = viol / bound;
        else
            ratio = viol == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        worst = std::max(worst, ratio);
    }
    report.worst_ratio = worst;
    return report;
}

} // namespace precis
