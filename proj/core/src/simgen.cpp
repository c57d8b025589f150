#include "precis/simgen.hpp"

#include <cmath>
#include <sstream>

#include "precis/errors.hpp"
#include "precis/format.hpp"
#include "precis/numerics.hpp"

namespace precis {

SymMatrix five_diag(std::size_t p, double rho0, double rho1, double rho2) {
    if (p < 1) throw ConfigError("five_diag: p must be at least 1");
    if (!(rho0 > 0.0)) throw ConfigError("five_diag: diagonal value must be positive");
    SymMatrix m(p);
    for (std::size_t i = 0; i < p; ++i) {
        m.set(i, i, rho0);
        if (i + 1 < p) m.set(i, i + 1, rho1);
        if (i + 2 < p) m.set(i, i + 2, rho2);
    }
    return m;
}

SymMatrix perturb_offdiag(const SymMatrix& theta, double delta, SeededRng& rng) {
    if (!(delta >= 0.0)) throw ConfigError("perturb_offdiag: delta must be nonnegative");
    const std::size_t p = theta.dim();
    SymMatrix out = theta;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            if (theta(i, j) == 0.0) continue;
            out.set(i, j, theta(i, j) + rng.next_uniform(-delta, delta));
        }
    }
    return out;
}

namespace {

constexpr double kMinEigenvalue = 0.01;
constexpr int kMaxRedraws = 50;

double smallest_eigenvalue(const SymMatrix& m) {
    return sym_eigen(m).values.front();
}

std::vector<std::pair<std::size_t, std::size_t>> exact_support(const SymMatrix& theta) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t p = theta.dim();
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            if (theta(i, j) != 0.0) pairs.emplace_back(i, j);
    return pairs;
}

std::size_t max_row_nonzeros(const SymMatrix& theta) {
    const std::size_t p = theta.dim();
    std::size_t best = 0;
    for (std::size_t i = 0; i < p; ++i) {
        std::size_t count = 0;
        for (std::size_t j = 0; j < p; ++j)
            if (theta(i, j) != 0.0) ++count;
        if (count > best) best = count;
    }
    return best;
}

} // namespace

GroundTruth build_ground_truth(const ModelSpec& spec) {
    SymMatrix base = five_diag(spec.p, spec.rho0, spec.rho1, spec.rho2);

    SymMatrix theta0 = base;
    if (spec.perturb && spec.perturb->delta > 0.0) {
        SeededRng rng(spec.perturb->seed);
        bool accepted = false;
        for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
            theta0 = perturb_offdiag(base, spec.perturb->delta, rng);
            if (smallest_eigenvalue(theta0) > kMinEigenvalue) {
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw NumericError("build_ground_truth: no positive definite perturbation after " +
                               std::to_string(kMaxRedraws) + " draws; reduce delta");
    } else {
        if (!(smallest_eigenvalue(theta0) > kMinEigenvalue))
            throw NumericError("build_ground_truth: smallest eigenvalue of the target is below 0.01");
    }

    GroundTruth gt{theta0,
                   spd_inverse(theta0),
                   SymMatrix(spec.p),
                   exact_support(theta0),
                   max_row_nonzeros(theta0),
                   SpdFactor{}};
    gt.sigma0_sqrt = sym_sqrt(gt.sigma0);
    gt.sigma0_chol = cholesky(gt.sigma0);
    return gt;
}

Matrix sample_gaussian(const GroundTruth& gt, std::size_t n, SeededRng& rng) {
    if (n < 1) throw ConfigError("sample_gaussian: n must be at least 1");
    const std::size_t p = gt.sigma0.dim();
    const Matrix& lower = gt.sigma0_chol.lower;
    Matrix x(n, p);
    std::vector<double> z(p);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < p; ++k) z[k] = rng.next_normal();
        double* row = x.row_ptr(r);
        for (std::size_t k = 0; k < p; ++k) {
            double acc = 0.0;
            for (std::size_t m = 0; m <= k; ++m) acc += lower(k, m) * z[m];
            row[k] = acc;
        }
    }
    return x;
}

Matrix sample_subgaussian_uniform(const GroundTruth& gt, std::size_t n, SeededRng& rng) {
    if (n < 1) throw ConfigError("sample_subgaussian_uniform: n must be at least 1");
    const std::size_t p = gt.sigma0.dim();
    const double half_width = std::sqrt(3.0);
    Matrix root = gt.sigma0_sqrt.as_matrix();
    Matrix x(n, p);
    std::vector<double> u(p);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < p; ++k)
            u[k] = rng.next_uniform(-half_width, half_width);
        double* row = x.row_ptr(r);
        for (std::size_t k = 0; k < p; ++k) {
            double acc = 0.0;
            const double* rk = root.row_ptr(k);
            for (std::size_t m = 0; m < p; ++m) acc += rk[m] * u[m];
            row[k] = acc;
        }
    }
    return x;
}

std::size_t sample_size_rule(std::size_t s, std::size_t p) {
    if (s < 1) throw ConfigError("sample_size_rule: s must be at least 1");
    if (p < 2) throw ConfigError("sample_size_rule: p must be at least 2");
    const double target = static_cast<double>(s) * std::log(static_cast<double>(p));
    return static_cast<std::size_t>(std::ceil(target * target));
}

std::string format_model_spec(const ModelSpec& spec) {
    std::string out = "p=" + std::to_string(spec.p);
    out += " rho0=" + format_double(spec.rho0);
    out += " rho1=" + format_double(spec.rho1);
    out += " rho2=" + format_double(spec.rho2);
    out += std::string(" kind=") +
           (spec.kind == ModelSpec::Kind::gaussian ? "gaussian" : "subgaussian_uniform");
    if (spec.perturb)
        out += " perturb=" + format_double(spec.perturb->delta) + "," +
               std::to_string(spec.perturb->seed);
    return out;
}

ModelSpec parse_model_spec(const std::string& text) {
    ModelSpec spec;
    bool saw_p = false, saw_rho0 = false;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw ConfigError("parse_model_spec: expected key=value, got '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "p") {
            spec.p = parse_size(value, "parse_model_spec: p");
            saw_p = true;
        } else if (key == "rho0") {
            spec.rho0 = parse_double(value, "parse_model_spec: rho0");
            saw_rho0 = true;
        } else if (key == "rho1") {
            spec.rho1 = parse_double(value, "parse_model_spec: rho1");
        } else if (key == "rho2") {
            spec.rho2 = parse_double(value, "parse_model_spec: rho2");
        } else if (key == "kind") {
            if (value == "gaussian") spec.kind = ModelSpec::Kind::gaussian;
            else if (value == "subgaussian_uniform") spec.kind = ModelSpec::Kind::subgaussian_uniform;
            else throw ConfigError("parse_model_spec: unknown kind '" + value + "'");
        } else if (key == "perturb") {
            const auto comma = value.find(',');
            if (comma == std::string::npos)
                throw ConfigError("parse_model_spec: perturb expects delta,seed");
            ModelSpec::Perturb pt;
            pt.delta = parse_double(value.substr(0, comma), "parse_model_spec: perturb delta");
            pt.seed = parse_u64(value.substr(comma + 1), "parse_model_spec: perturb seed");
            spec.perturb = pt;
        } else {
            throw ConfigError("parse_model_spec: unknown key '" + key + "'");
        }
    }
    if (!saw_p || !saw_rho0)
        throw ConfigError("parse_model_spec: p and rho0 are required");
    return spec;
}

} // namespace precis
