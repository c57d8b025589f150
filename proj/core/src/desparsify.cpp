#include "precis/desparsify.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "precis/errors.hpp"
#include "precis/numerics.hpp"

namespace precis {

DesparsifiedEstimate desparsify(const PrecisionEstimate& est, const SymMatrix& sigma_hat) {
    const std::size_t p = est.dim();
    if (sigma_hat.dim() != p) throw std::invalid_argument("desparsify: dimension mismatch");

    const Matrix prod = matmul(sigma_hat.as_matrix(), est.theta); // Sigma_hat * theta
    const Matrix correction = matmul(transpose(est.theta), prod); // theta^T Sigma_hat theta
    Matrix raw(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            const double v = est.theta(i, j) + est.theta(j, i) - correction(i, j);
            if (!std::isfinite(v))
                throw NumericError("desparsify: non-finite entry at (" + std::to_string(i) +
                                   "," + std::to_string(j) + ")");
            raw(i, j) = v;
        }

    // The closed form is symmetric in exact arithmetic; anything beyond
    // rounding noise indicates a broken input.
    const double scale = std::max(1.0, max_abs(raw));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
            if (std::fabs(raw(i, j) - raw(j, i)) > 1e-10 * scale)
                throw NumericError("desparsify: raw asymmetry at (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") exceeds 1e-10 relative");

    SymMatrix t_hat(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) t_hat.set(i, j, 0.5 * (raw(i, j) + raw(j, i)));

    return DesparsifiedEstimate{std::move(t_hat), std::make_shared<const PrecisionEstimate>(est),
                                std::make_shared<const SymMatrix>(sigma_hat)};
}

VarianceEstimate variance_gaussian(const PrecisionEstimate& est) {
    const std::size_t p = est.dim();
    for (std::size_t j = 0; j < p; ++j)
        if (!(est.theta(j, j) > 0.0))
            throw NumericError("variance_gaussian: nonpositive diagonal at " + std::to_string(j));

    VarianceEstimate out{SymMatrix(p), VarianceEstimate::Kind::gaussian_plugin, 0};
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            const double a = 0.5 * (est.theta(i, j) + est.theta(j, i));
            const double var = est.theta(i, i) * est.theta(j, j) + a * a;
            out.sigma.set(i, j, std::sqrt(var));
        }
    return out;
}

VarianceEstimate variance_empirical(const PrecisionEstimate& est, const Matrix& x) {
    const std::size_t p = est.dim(), n = x.rows();
    if (x.cols() != p) throw std::invalid_argument("variance_empirical: dimension mismatch");
    if (n < 1) throw std::invalid_argument("variance_empirical: empty sample");

    const Matrix w = matmul(x, est.theta); // w(k,i) = theta_i^T x_k
    VarianceEstimate out{SymMatrix(p), VarianceEstimate::Kind::empirical, 0};
    const double n_d = static_cast<double>(n);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double t = w(k, i) * w(k, j);
                s += t * t;
            }
            const double a = 0.5 * (est.theta(i, j) + est.theta(j, i));
            double var = s / n_d - a * a;
            if (var < 0.0) {
                var = 1e-12;
                ++out.floored_count;
            }
            out.sigma.set(i, j, std::sqrt(var));
        }
    return out;
}

ConfidenceRegion confidence_intervals(const DesparsifiedEstimate& t, const VarianceEstimate& v,
                                      std::size_t n, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("confidence_intervals: alpha must lie in (0,1)");
    const std::size_t p = t.t_hat.dim();
    if (v.sigma.dim() != p)
        throw std::invalid_argument("confidence_intervals: dimension mismatch");
    if (n < 1) throw std::invalid_argument("confidence_intervals: n must be >= 1");

    const double z = std_normal_quantile(1.0 - 0.5 * alpha);
    const double root_n = std::sqrt(static_cast<double>(n));
    ConfidenceRegion region{Matrix(p, p), Matrix(p, p), alpha, n};
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            const double hw = z * v.sigma(i, j) / root_n;
            region.lower(i, j) = t.t_hat(i, j) - hw;
            region.upper(i, j) = t.t_hat(i, j) + hw;
        }
    return region;
}

namespace {

// Shared selection core: keep (i,j) iff |values_ij| strictly exceeds thr(i,j).
EdgeSelection select_above(const SymMatrix& values, Matrix thresholds, std::string kind,
                           double parameter) {
    const std::size_t p = values.dim();
    EdgeSelection sel;
    sel.rule = ThresholdRule{std::move(kind), parameter, std::move(thresholds)};
    sel.diagonal.assign(p, 0);
    for (std::size_t i = 0; i < p; ++i) {
        if (std::fabs(values(i, i)) > sel.rule.per_entry(i, i)) sel.diagonal[i] = 1;
        for (std::size_t j = i + 1; j < p; ++j)
            if (std::fabs(values(i, j)) > sel.rule.per_entry(i, j)) sel.selected.emplace_back(i, j);
    }
    return sel;
}

void check_selection_args(const SymMatrix& values, const VarianceEstimate& v, std::size_t n,
                          std::size_t p) {
    if (v.sigma.dim() != values.dim()) throw std::invalid_argument("select: dimension mismatch");
    if (p != values.dim())
        throw std::invalid_argument("select: p does not match the estimate dimension");
    if (n < 1) throw std::invalid_argument("select: n must be >= 1");
    if (p < 2) throw std::invalid_argument("select: p must be >= 2");
}

} // namespace

EdgeSelection threshold_select(const SymMatrix& values, const VarianceEstimate& v, std::size_t n,
                               std::size_t p, double nu) {
    check_selection_args(values, v, n, p);
    if (!(nu > 0.0)) throw std::domain_error("threshold_select: nu must be positive");
    const double factor =
        std::sqrt(2.0 * nu * std::log(static_cast<double>(p)) / static_cast<double>(n));
    Matrix thr(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) thr(i, j) = v.sigma(i, j) * factor;
    return select_above(values, std::move(thr), "nu", nu);
}

EdgeSelection threshold_select(const DesparsifiedEstimate& t, const VarianceEstimate& v,
                               std::size_t n, std::size_t p, double nu) {
    return threshold_select(t.t_hat, v, n, p, nu);
}

EdgeSelection bonferroni_select(const DesparsifiedEstimate& t, const VarianceEstimate& v,
                                std::size_t n, std::size_t p, double alpha) {
    check_selection_args(t.t_hat, v, n, p);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("bonferroni_select: alpha must lie in (0,1)");
    const double p_d = static_cast<double>(p);
    const double z = std_normal_quantile(1.0 - alpha / (2.0 * p_d * p_d));
    const double root_n = std::sqrt(static_cast<double>(n));
    Matrix thr(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) thr(i, j) = z * v.sigma(i, j) / root_n;
    return select_above(t.t_hat, std::move(thr), "bonferroni", alpha);
}

Matrix remainder_decomposition(const DesparsifiedEstimate& t, const SymMatrix& theta0,
                               const SymMatrix& sigma_hat, const SymMatrix& sigma0,
                               std::size_t n) {
    const std::size_t p = t.t_hat.dim();
    if (theta0.dim() != p || sigma_hat.dim() != p || sigma0.dim() != p)
        throw std::invalid_argument("remainder_decomposition: dimension mismatch");
    if (n < 1) throw std::invalid_argument("remainder_decomposition: n must be >= 1");

    Matrix diff(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) diff(i, j) = sigma_hat(i, j) - sigma0(i, j);
    const Matrix pivot = matmul(theta0.as_matrix(), matmul(diff, theta0.as_matrix()));

    const double root_n = std::sqrt(static_cast<double>(n));
    Matrix delta(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            delta(i, j) = root_n * (t.t_hat(i, j) - theta0(i, j)) + root_n * pivot(i, j);
    return delta;
}

} // namespace precis
