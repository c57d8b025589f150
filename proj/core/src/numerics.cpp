#include "precis/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "precis/errors.hpp"

namespace precis {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;

} // namespace

double std_normal_cdf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("std_normal_cdf: non-finite input");
    return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double std_normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("std_normal_quantile: q must lie in (0,1)");
    if (q == 0.5) return 0.0;

    // Acklam's rational approximation (|relative error| < 1.2e-9), then two
    // Halley steps against the erfc-based CDF.
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (q < plow) {
        double u = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    } else if (q <= 1.0 - plow) {
        double u = q - 0.5, r = u * u;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double u = std::sqrt(-2.0 * std::log1p(-q));
        x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    for (int it = 0; it < 2; ++it) {
        double e = std_normal_cdf(x) - q;
        double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
        x = x - u / (1.0 + 0.5 * x * u);
    }
    return x;
}

namespace {

// Continued-fraction kernel for the regularized incomplete beta (modified
// Lentz method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 2000;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw NumericError("regularized_incomplete_beta: continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("regularized_incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("regularized_incomplete_beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double x, std::size_t df) {
    if (!std::isfinite(x)) throw std::domain_error("student_t_cdf: non-finite input");
    if (df < 1) throw std::domain_error("student_t_cdf: df must be >= 1");
    const double nu = static_cast<double>(df);
    const double ib = regularized_incomplete_beta(0.5 * nu, 0.5, nu / (nu + x * x));
    return x >= 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

namespace {

double student_t_pdf(double x, double nu) {
    const double lg = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(nu * 3.14159265358979323846);
    return std::exp(lg - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

} // namespace

double student_t_quantile(double q, std::size_t df) {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("student_t_quantile: q must lie in (0,1)");
    if (df < 1) throw std::domain_error("student_t_quantile: df must be >= 1");
    if (q == 0.5) return 0.0;

    // Work in the upper tail and mirror at the end.
    const bool flip = q < 0.5;
    const double qq = flip ? 1.0 - q : q;
    const double nu = static_cast<double>(df);

    // Cornish-Fisher expansion about the normal quantile as the start value.
    const double z = std_normal_quantile(qq);
    const double z2 = z * z, z3 = z2 * z, z5 = z3 * z2, z7 = z5 * z2, z9 = z7 * z2;
    const double g1 = (z3 + z) / 4.0;
    const double g2 = (5.0 * z5 + 16.0 * z3 + 3.0 * z) / 96.0;
    const double g3 = (3.0 * z7 + 19.0 * z5 + 17.0 * z3 - 15.0 * z) / 384.0;
    const double g4 = (79.0 * z9 + 776.0 * z7 + 1482.0 * z5 - 1920.0 * z3 - 945.0 * z) / 92160.0;
    double t = z + g1 / nu + g2 / (nu * nu) + g3 / (nu * nu * nu) + g4 / (nu * nu * nu * nu);
    if (!(t > 0.0)) t = z > 0.0 ? z : 1e-8;

    // Bracket the root, then Newton with bisection fallback.
    double lo = 0.0;
    double hi = std::max(t, 1.0);
    for (int k = 0; k < 200 && student_t_cdf(hi, df) < qq; ++k) hi *= 2.0;
    if (t <= lo || t >= hi) t = 0.5 * (lo + hi);

    constexpr double kTol = 1e-12;
    for (int it = 0; it < 100; ++it) {
        const double resid = student_t_cdf(t, df) - qq;
        if (std::fabs(resid) <= kTol) return flip ? -t : t;
        if (resid > 0.0)
            hi = t;
        else
            lo = t;
        const double step = resid / student_t_pdf(t, nu);
        double next = t - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    throw NumericError("student_t_quantile: Newton iteration did not converge");
}

SpdFactor cholesky(const SymMatrix& a) {
    const std::size_t p = a.dim();
    double max_diag = a(0, 0);
    for (std::size_t i = 1; i < p; ++i) max_diag = std::max(max_diag, a(i, i));
    const double pivot_floor = 1e-12 * max_diag;

    Matrix l(p, p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        // Written as !(d > floor) so a NaN pivot also fails.
        if (!(d > pivot_floor))
            throw NotPositiveDefiniteError(
                j, "cholesky: pivot " + std::to_string(j) + " is not positive (" +
                       std::to_string(d) + ")");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < p; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return SpdFactor{std::move(l), p};
}

void cholesky_solve_in_place(const SpdFactor& f, std::vector<double>& b) {
    const std::size_t p = f.source_dim;
    if (b.size() != p) throw std::invalid_argument("cholesky_solve_in_place: size mismatch");
    const Matrix& l = f.lower;
    for (std::size_t i = 0; i < p; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
        b[i] = s / l(i, i);
    }
    for (std::size_t ii = p; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < p; ++k) s -= l(k, ii) * b[k];
        b[ii] = s / l(ii, ii);
    }
}

SymMatrix spd_inverse(const SymMatrix& a) {
    const std::size_t p = a.dim();
    const SpdFactor f = cholesky(a);
    Matrix raw(p, p, 0.0);
    std::vector<double> col(p);
    for (std::size_t j = 0; j < p; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        cholesky_solve_in_place(f, col);
        for (std::size_t i = 0; i < p; ++i) raw(i, j) = col[i];
    }
    // The exact inverse is symmetric; average out floating-point asymmetry.
    SymMatrix out(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) out.set(i, j, 0.5 * (raw(i, j) + raw(j, i)));
    return out;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a.data()[k] * a.data()[k];
    return std::sqrt(s);
}

} // namespace

EigenDecomposition sym_eigen(const SymMatrix& sym) {
    const std::size_t p = sym.dim();
    for (std::size_t k = 0; k < sym.as_matrix().size(); ++k)
        if (!std::isfinite(sym.as_matrix().data()[k]))
            throw std::domain_error("sym_eigen: non-finite entry");

    Matrix a = sym.as_matrix();
    Matrix v = identity(p);
    const double scale = frobenius_norm(a);
    const double tol = 1e-13 * std::max(1.0, scale);

    // Cyclic Jacobi sweeps; each rotation zeroes one off-diagonal pair.
    constexpr int kMaxSweeps = 60;
    int sweep = 0;
    for (; sweep < kMaxSweeps && off_diagonal_norm(a) > tol; ++sweep) {
        for (std::size_t i = 0; i + 1 < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j) {
                const double aij = a(i, j);
                if (std::fabs(aij) <= 1e-300) continue;
                const double tau = (a(j, j) - a(i, i)) / (2.0 * aij);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < p; ++k) {
                    if (k == i || k == j) continue;
                    const double aki = a(k, i), akj = a(k, j);
                    a(k, i) = a(i, k) = c * aki - s * akj;
                    a(k, j) = a(j, k) = s * aki + c * akj;
                }
                const double aii = a(i, i), ajj = a(j, j);
                a(i, i) = aii - t * aij;
                a(j, j) = ajj + t * aij;
                a(i, j) = a(j, i) = 0.0;
                for (std::size_t k = 0; k < p; ++k) {
                    const double vki = v(k, i), vkj = v(k, j);
                    v(k, i) = c * vki - s * vkj;
                    v(k, j) = s * vki + c * vkj;
                }
            }
        }
    }
    if (sweep == kMaxSweeps && off_diagonal_norm(a) > tol)
        throw NumericError("sym_eigen: Jacobi iteration did not converge");

    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    EigenDecomposition out;
    out.values.resize(p);
    out.vectors = Matrix(p, p, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < p; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

SymMatrix sym_sqrt(const SymMatrix& a) {
    const std::size_t p = a.dim();
    EigenDecomposition eig = sym_eigen(a);
    double norm = 0.0;
    for (double w : eig.values) norm = std::max(norm, std::fabs(w));
    const double clamp_floor = -1e-10 * norm;
    std::vector<double> roots(p);
    for (std::size_t k = 0; k < p; ++k) {
        double w = eig.values[k];
        if (w < clamp_floor)
            throw std::domain_error("sym_sqrt: matrix has eigenvalue " + std::to_string(w) +
                                    ", not positive semi-definite");
        roots[k] = std::sqrt(std::max(w, 0.0));
    }
    // B = V diag(sqrt(w)) V^T, then exact symmetrization of rounding noise.
    Matrix scaled = eig.vectors;
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t k = 0; k < p; ++k) scaled(r, k) *= roots[k];
    Matrix raw = matmul(scaled, transpose(eig.vectors));
    SymMatrix out(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) out.set(i, j, 0.5 * (raw(i, j) + raw(j, i)));
    return out;
}

SymMatrix sample_covariance(const Matrix& x) {
    const std::size_t n = x.rows(), p = x.cols();
    if (n < 1 || p < 1) throw std::domain_error("sample_covariance: empty matrix");
    Matrix acc(p, p, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = x.row_ptr(r);
        for (std::size_t i = 0; i < p; ++i) {
            const double xi = row[i];
            double* ai = acc.row_ptr(i);
            for (std::size_t j = i; j < p; ++j) ai[j] += xi * row[j];
        }
    }
    SymMatrix s(p);
    const double n_d = static_cast<double>(n);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) s.set(i, j, acc(i, j) / n_d);
    return s;
}

} // namespace precis
