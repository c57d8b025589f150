#include "precis/lasso.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "precis/errors.hpp"

namespace precis {

double soft_threshold(double z, double t) {
    if (t < 0.0) throw std::domain_error("soft_threshold: threshold must be nonnegative");
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

namespace {

void validate_problem(const LassoProblem& prob, const SolverOptions& opts) {
    const std::size_t n = prob.design.rows(), q = prob.design.cols();
    if (prob.response.size() != n)
        throw std::invalid_argument("lasso: response length does not match design rows");
    if (!(prob.penalty >= 0.0) || !std::isfinite(prob.penalty))
        throw std::domain_error("lasso: penalty must be finite and nonnegative");
    for (double y : prob.response)
        if (!std::isfinite(y)) throw std::domain_error("lasso: non-finite response entry");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("lasso: tol must be positive");
    if (opts.max_iters < 1) throw std::invalid_argument("lasso: max_iters must be >= 1");
    if (opts.warm_start && opts.warm_start->size() != q)
        throw std::invalid_argument("lasso: warm start length does not match design columns");
}

double l1_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

// Column-major copy of the design plus cached ||X_k||^2 / n; the transpose
// pass doubles as the finiteness check.
struct ColumnCache {
    std::size_t n = 0, q = 0;
    std::vector<double> cols;    // column k lives at cols.data() + k*n
    std::vector<double> sq_mean; // ||X_k||^2 / n
};

ColumnCache build_columns(const Matrix& x) {
    ColumnCache cc;
    cc.n = x.rows();
    cc.q = x.cols();
    cc.cols.assign(cc.q * cc.n, 0.0);
    cc.sq_mean.assign(cc.q, 0.0);
    for (std::size_t r = 0; r < cc.n; ++r) {
        const double* row = x.row_ptr(r);
        for (std::size_t k = 0; k < cc.q; ++k) {
            const double v = row[k];
            if (!std::isfinite(v)) throw std::domain_error("lasso: non-finite design entry");
            cc.cols[k * cc.n + r] = v;
        }
    }
    const double n_d = static_cast<double>(cc.n);
    for (std::size_t k = 0; k < cc.q; ++k) {
        const double* xk = cc.cols.data() + k * cc.n;
        double s = 0.0;
        for (std::size_t r = 0; r < cc.n; ++r) s += xk[r] * xk[r];
        cc.sq_mean[k] = s / n_d;
    }
    return cc;
}

// Max stationarity violation given the current residual.
double kkt_from_residual(const ColumnCache& cc, const std::vector<double>& res,
                         const std::vector<double>& gamma, double lambda) {
    const double n_d = static_cast<double>(cc.n);
    double worst = 0.0;
    for (std::size_t k = 0; k < cc.q; ++k) {
        const double* xk = cc.cols.data() + k * cc.n;
        double dot = 0.0;
        for (std::size_t r = 0; r < cc.n; ++r) dot += xk[r] * res[r];
        const double g = dot / n_d;
        const double viol = gamma[k] == 0.0
                                ? std::max(0.0, std::fabs(g) - lambda)
                                : std::fabs(g - lambda * (gamma[k] > 0.0 ? 1.0 : -1.0));
        worst = std::max(worst, viol);
    }
    return worst;
}

LassoSolution run_coordinate_descent(const ColumnCache& cc, const std::vector<double>& y,
                                     double lambda, const SolverOptions& opts) {
    const std::size_t n = cc.n, q = cc.q;
    const double n_d = static_cast<double>(n);
    const double kkt_tol = 1e-6 * std::max(1.0, lambda);

    if (lambda == 0.0)
        for (std::size_t k = 0; k < q; ++k)
            if (cc.sq_mean[k] == 0.0)
                throw std::domain_error("lasso: all-zero design column " + std::to_string(k) +
                                        " with zero penalty");

    std::vector<double> gamma(q, 0.0);
    std::vector<double> res = y;
    if (opts.warm_start) {
        gamma = *opts.warm_start;
        for (std::size_t k = 0; k < q; ++k) {
            if (!std::isfinite(gamma[k]))
                throw std::domain_error("lasso: non-finite warm start entry");
            if (gamma[k] == 0.0) continue;
            const double* xk = cc.cols.data() + k * n;
            const double gk = gamma[k];
            for (std::size_t r = 0; r < n; ++r) res[r] -= gk * xk[r];
        }
    }

    LassoSolution sol;
    sol.coefficients = std::move(gamma);

#ifndef NDEBUG
    auto objective_of = [&](const std::vector<double>& g) {
        double sse = 0.0;
        for (double r : res) sse += r * r;
        (void)g;
        return sse / n_d + 2.0 * lambda * l1_norm(sol.coefficients);
    };
    double prev_obj = objective_of(sol.coefficients);
#endif

    bool converged = false;
    double max_delta = 0.0;
    std::size_t sweep = 0;
    for (; sweep < opts.max_iters; ++sweep) {
        max_delta = 0.0;
        for (std::size_t k = 0; k < q; ++k) {
            const double ck = cc.sq_mean[k];
            if (ck == 0.0) {
                sol.coefficients[k] = 0.0; // zero column: penalty keeps it at zero
                continue;
            }
            const double* xk = cc.cols.data() + k * n;
            double dot = 0.0;
            for (std::size_t r = 0; r < n; ++r) dot += xk[r] * res[r];
            const double old = sol.coefficients[k];
            const double z = dot / n_d + ck * old;
            const double next = soft_threshold(z, lambda) / ck;
            const double diff = next - old;
            if (diff != 0.0) {
                for (std::size_t r = 0; r < n; ++r) res[r] -= diff * xk[r];
                sol.coefficients[k] = next;
                const double ad = std::fabs(diff);
                if (ad > max_delta) max_delta = ad;
            }
        }
#ifndef NDEBUG
        {
            const double obj = objective_of(sol.coefficients);
            assert(obj <= prev_obj + 1e-12 * std::max(1.0, std::fabs(prev_obj)) &&
                   "coordinate descent objective increased");
            prev_obj = obj;
        }
#endif
        if (max_delta <= opts.tol &&
            kkt_from_residual(cc, res, sol.coefficients, lambda) <= kkt_tol) {
            converged = true;
            ++sweep;
            break;
        }
    }

    sol.iterations = sweep;
    sol.final_max_delta = max_delta;
    sol.converged = converged;
    double sse = 0.0;
    for (double r : res) sse += r * r;
    sol.objective = sse / n_d + 2.0 * lambda * l1_norm(sol.coefficients);
    return sol;
}

double residual_sse(const Matrix& x, const std::vector<double>& y,
                    const std::vector<double>& gamma, std::vector<double>* res_out) {
    const std::size_t n = x.rows(), q = x.cols();
    double sse = 0.0;
    if (res_out) res_out->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = x.row_ptr(i);
        double fit = 0.0;
        for (std::size_t k = 0; k < q; ++k) fit += row[k] * gamma[k];
        const double r = y[i] - fit;
        if (res_out) (*res_out)[i] = r;
        sse += r * r;
    }
    return sse;
}

} // namespace

LassoSolution solve_lasso(const LassoProblem& problem, const SolverOptions& opts) {
    validate_problem(problem, opts);
    const ColumnCache cc = build_columns(problem.design);
    return run_coordinate_descent(cc, problem.response, problem.penalty, opts);
}

LassoSolution solve_sqrt_lasso(const LassoProblem& problem, const SolverOptions& opts) {
    validate_problem(problem, opts);
    const double lambda0 = problem.penalty;
    const std::size_t n = problem.design.rows();
    const double n_d = static_cast<double>(n);
    const ColumnCache cc = build_columns(problem.design);

    if (lambda0 == 0.0) {
        LassoSolution sol = run_coordinate_descent(cc, problem.response, 0.0, opts);
        sol.objective = std::sqrt(sol.objective); // sse/n -> ||r||_2/sqrt(n)
        return sol;
    }

    std::vector<double> gamma(problem.design.cols(), 0.0);
    if (opts.warm_start) gamma = *opts.warm_start;
    double sigma = std::sqrt(residual_sse(problem.design, problem.response, gamma, nullptr) / n_d);

    constexpr int kMaxOuter = 50;
    LassoSolution inner;
    std::size_t total_sweeps = 0;
    bool fixed_point = false;
    double lambda_eff = 0.0;
    for (int outer = 0; outer < kMaxOuter; ++outer) {
        if (sigma * std::sqrt(n_d) < 1e-10)
            throw NumericError("solve_sqrt_lasso: residual norm collapsed (degenerate fit)");
        lambda_eff = lambda0 * sigma;
        SolverOptions inner_opts = opts;
        inner_opts.warm_start = gamma;
        inner = run_coordinate_descent(cc, problem.response, lambda_eff, inner_opts);
        total_sweeps += inner.iterations;
        gamma = inner.coefficients;
        const double sigma_next =
            std::sqrt(residual_sse(problem.design, problem.response, gamma, nullptr) / n_d);
        const bool sigma_settled =
            std::fabs(sigma_next - sigma) <= 1e-12 * std::max(1.0, sigma_next);
        sigma = sigma_next;
        if (sigma_settled && inner.converged) {
            fixed_point = true;
            break;
        }
    }

    LassoSolution sol;
    sol.coefficients = std::move(gamma);
    sol.iterations = total_sweeps;
    sol.final_max_delta = inner.final_max_delta;
    sol.converged = fixed_point;
    sol.objective = sigma + lambda0 * l1_norm(sol.coefficients);
    return sol;
}

double kkt_residual(const LassoProblem& problem, const std::vector<double>& coefficients) {
    const std::size_t n = problem.design.rows(), q = problem.design.cols();
    if (coefficients.size() != q)
        throw std::invalid_argument("kkt_residual: coefficient length does not match design");
    if (problem.response.size() != n)
        throw std::invalid_argument("kkt_residual: response length does not match design rows");
    const double n_d = static_cast<double>(n);
    const double lambda = problem.penalty;

    std::vector<double> res;
    residual_sse(problem.design, problem.response, coefficients, &res);
    std::vector<double> grad(q, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = problem.design.row_ptr(i);
        const double ri = res[i];
        for (std::size_t k = 0; k < q; ++k) grad[k] += row[k] * ri;
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
        const double g = grad[k] / n_d;
        const double viol = coefficients[k] == 0.0
                                ? std::max(0.0, std::fabs(g) - lambda)
                                : std::fabs(g - lambda * (coefficients[k] > 0.0 ? 1.0 : -1.0));
        worst = std::max(worst, viol);
    }
    return worst;
}

} // namespace precis
