#include "precis/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "precis/errors.hpp"
#include "precis/numerics.hpp"
#include "precis/parallel.hpp"
#include "precis/rng.hpp"

namespace precis {

namespace {

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.model.p < 2) throw ConfigError("experiment: model dimension must be at least 2");
    if (cfg.n < 2) throw ConfigError("experiment: n must be at least 2");
    if (cfg.replications < 1) throw ConfigError("experiment: need at least one replication");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("experiment: alpha must lie in (0,1)");
    if (cfg.fixed_lambda && !(*cfg.fixed_lambda >= 0.0))
        throw ConfigError("experiment: lambda must be nonnegative");
}

double resolve_lambda(const ExperimentConfig& cfg) {
    return cfg.fixed_lambda ? *cfg.fixed_lambda : tuning_lambda(cfg.n, cfg.model.p);
}

Matrix draw_sample(const ExperimentConfig& cfg, const GroundTruth& gt, std::uint64_t rep) {
    SeededRng rng = SeededRng::for_stream(cfg.master_seed, rep);
    return cfg.model.kind == ModelSpec::Kind::gaussian
               ? sample_gaussian(gt, cfg.n, rng)
               : sample_subgaussian_uniform(gt, cfg.n, rng);
}

struct RepArtifacts {
    DesparsifiedEstimate desparsified;
    VarianceEstimate variance;
};

RepArtifacts run_replication(const ExperimentConfig& cfg, const GroundTruth& gt, double lambda,
                             std::uint64_t rep, VarianceEstimate::Kind kind) {
    const Matrix x = draw_sample(cfg, gt, rep);
    const SymMatrix sigma_hat = sample_covariance(x);
    const PrecisionEstimate est = nodewise_lasso(x, lambda, {}, 1, cfg.scale_predictors);
    if (!est.all_converged())
        throw NumericError("replication " + std::to_string(rep) +
                           ": nodewise solver did not converge");
    RepArtifacts out{desparsify(est, sigma_hat),
                     kind == VarianceEstimate::Kind::gaussian_plugin ? variance_gaussian(est)
                                                                     : variance_empirical(est, x)};
    return out;
}

// Computes compute(r) for every replication with bounded parallelism, then
// hands results to reduce(r, value) strictly in ascending r. Slots are
// recycled per block so memory stays proportional to the thread count.
template <typename T, typename Compute, typename Reduce>
void for_each_replication(std::size_t total, std::size_t threads, Compute compute, Reduce reduce) {
    const std::size_t workers = std::max<std::size_t>(1, threads);
    const std::size_t block = std::min(total, workers * 4);
    std::vector<std::optional<T>> slots(block);
    for (std::size_t start = 0; start < total; start += block) {
        const std::size_t end = std::min(total, start + block);
        parallel_for_index(0, end - start, workers,
                           [&](std::size_t k) { slots[k] = compute(start + k); });
        for (std::size_t k = 0; start + k < end; ++k) {
            reduce(start + k, std::move(*slots[k]));
            slots[k].reset();
        }
    }
}

// Mask of the ordered support pairs; s0 lists both (i,j) and (j,i).
std::vector<std::uint8_t> support_mask(const GroundTruth& gt) {
    const std::size_t p = gt.theta0.dim();
    std::vector<std::uint8_t> mask(p * p, 0);
    for (const auto& [i, j] : gt.s0) mask[i * p + j] = 1;
    return mask;
}

// Exact mean of m over the masked (or unmasked) entries, row-major order.
double mean_where(const Matrix& m, const std::vector<std::uint8_t>& mask, bool in_mask,
                  std::size_t count) {
    double acc = 0.0;
    const std::size_t p = m.rows();
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            if (static_cast<bool>(mask[i * p + j]) == in_mask) acc += m(i, j);
    return acc / static_cast<double>(count);
}

} // namespace

CoverageReport run_coverage(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const GroundTruth gt = build_ground_truth(cfg.model);
    const double lambda = resolve_lambda(cfg);
    const std::size_t p = cfg.model.p;

    Matrix cover_sum(p, p), length_sum(p, p);
    struct RepResult {
        Matrix covered, length;
    };

    for_each_replication<RepResult>(
        cfg.replications, cfg.threads,
        [&](std::size_t r) {
            const RepArtifacts art = run_replication(cfg, gt, lambda, r, cfg.variance_kind);
            const ConfidenceRegion region =
                confidence_intervals(art.desparsified, art.variance, cfg.n, cfg.alpha);
            RepResult res{Matrix(p, p), Matrix(p, p)};
            for (std::size_t i = 0; i < p; ++i) {
                for (std::size_t j = 0; j < p; ++j) {
                    const double truth = gt.theta0(i, j);
                    const bool hit = region.lower(i, j) <= truth && truth <= region.upper(i, j);
                    res.covered(i, j) = hit ? 1.0 : 0.0;
                    res.length(i, j) = region.upper(i, j) - region.lower(i, j);
                }
            }
            return res;
        },
        [&](std::size_t, RepResult res) {
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < p; ++j) {
                    cover_sum(i, j) += res.covered(i, j);
                    length_sum(i, j) += res.length(i, j);
                }
        });

    const double n_reps = static_cast<double>(cfg.replications);
    CoverageReport report;
    report.coverage = Matrix(p, p);
    report.length = Matrix(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            report.coverage(i, j) = cover_sum(i, j) / n_reps;
            report.length(i, j) = length_sum(i, j) / n_reps;
        }

    const auto mask = support_mask(gt);
    const std::size_t s0_size = gt.s0.size();
    const std::size_t s0c_size = p * p - s0_size;
    report.avgcov_s0 = mean_where(report.coverage, mask, true, s0_size);
    report.avglen_s0 = mean_where(report.length, mask, true, s0_size);
    report.avgcov_s0c = mean_where(report.coverage, mask, false, s0c_size);
    report.avglen_s0c = mean_where(report.length, mask, false, s0c_size);
    report.s0_size = s0_size;
    report.lambda_used = lambda;
    report.config = cfg;
    return report;
}

SelectionReport run_selection(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (!(cfg.selection_nu > 0.0)) throw ConfigError("experiment: nu must be positive");
    const GroundTruth gt = build_ground_truth(cfg.model);
    const double lambda = resolve_lambda(cfg);
    const std::size_t p = cfg.model.p;
    const auto mask = support_mask(gt);

    SelectionReport report;
    report.per_rep_tp.reserve(cfg.replications);
    report.per_rep_fp.reserve(cfg.replications);

    struct RepResult {
        std::size_t tp = 0, fp = 0;
    };

    for_each_replication<RepResult>(
        cfg.replications, cfg.threads,
        [&](std::size_t r) {
            // Selection always scores against the Gaussian plug-in variance,
            // and thresholds the sparse estimate rather than the de-biased
            // one; see the header note on the noise floor.
            const RepArtifacts art =
                run_replication(cfg, gt, lambda, r, VarianceEstimate::Kind::gaussian_plugin);
            const EdgeSelection sel = threshold_select(
                symmetrized_theta(*art.desparsified.source), art.variance, cfg.n, p,
                cfg.selection_nu);
            std::vector<std::uint8_t> picked(p * p, 0);
            for (std::size_t i = 0; i < p; ++i)
                if (sel.diagonal[i]) picked[i * p + i] = 1;
            for (const auto& [i, j] : sel.selected) {
                picked[i * p + j] = 1;
                picked[j * p + i] = 1;
            }
            RepResult res;
            for (std::size_t k = 0; k < p * p; ++k) {
                if (!picked[k]) continue;
                if (mask[k]) ++res.tp;
                else ++res.fp;
            }
            return res;
        },
        [&](std::size_t, RepResult res) {
            report.per_rep_tp.push_back(res.tp);
            report.per_rep_fp.push_back(res.fp);
        });

    const double n_reps = static_cast<double>(cfg.replications);
    double tp_sum = 0.0, fp_sum = 0.0;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
        tp_sum += static_cast<double>(report.per_rep_tp[r]);
        fp_sum += static_cast<double>(report.per_rep_fp[r]);
    }
    report.mean_tp = tp_sum / n_reps;
    report.mean_fp = fp_sum / n_reps;
    report.s0_size = gt.s0.size();
    report.tp_rate = 100.0 * report.mean_tp / static_cast<double>(report.s0_size);
    report.fp_rate = 100.0 * report.mean_fp / static_cast<double>(p * p - report.s0_size);
    report.lambda_used = lambda;
    report.config = cfg;
    return report;
}

std::vector<std::vector<double>> collect_standardized_stats(
    const ExperimentConfig& cfg, const std::vector<std::pair<std::size_t, std::size_t>>& entries) {
    validate_config(cfg);
    if (entries.empty()) throw ConfigError("experiment: no entries requested");
    for (const auto& [i, j] : entries)
        if (i >= cfg.model.p || j >= cfg.model.p)
            throw ConfigError("experiment: entry index out of range");

    const GroundTruth gt = build_ground_truth(cfg.model);
    const double lambda = resolve_lambda(cfg);
    const double root_n = std::sqrt(static_cast<double>(cfg.n));

    std::vector<std::vector<double>> stats(entries.size());
    for (auto& s : stats) s.reserve(cfg.replications);

    for_each_replication<std::vector<double>>(
        cfg.replications, cfg.threads,
        [&](std::size_t r) {
            const RepArtifacts art = run_replication(cfg, gt, lambda, r, cfg.variance_kind);
            std::vector<double> values(entries.size());
            for (std::size_t e = 0; e < entries.size(); ++e) {
                const auto [i, j] = entries[e];
                const double sd = art.variance.sigma(i, j);
                if (!(sd > 0.0))
                    throw NumericError("replication " + std::to_string(r) +
                                       ": zero variance at requested entry");
                values[e] = root_n * (art.desparsified.t_hat(i, j) - gt.theta0(i, j)) / sd;
            }
            return values;
        },
        [&](std::size_t, std::vector<double> values) {
            for (std::size_t e = 0; e < entries.size(); ++e) stats[e].push_back(values[e]);
        });

    return stats;
}

double ks_distance(std::vector<double> draws) {
    if (draws.empty()) throw std::domain_error("ks_distance: no draws");
    std::sort(draws.begin(), draws.end());
    const double m = static_cast<double>(draws.size());
    double dist = 0.0;
    for (std::size_t k = 0; k < draws.size(); ++k) {
        const double cdf = std_normal_cdf(draws[k]);
        const double upper = (static_cast<double>(k) + 1.0) / m - cdf;
        const double lower = cdf - static_cast<double>(k) / m;
        dist = std::max(dist, std::max(std::abs(upper), std::abs(lower)));
    }
    return dist;
}

} // namespace precis
