#include "precis/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "precis/errors.hpp"
#include "precis/nodewise.hpp"
#include "precis/numerics.hpp"

namespace precis {

namespace {

std::string column_label(const CsvTable& table, std::size_t original_index) {
    if (original_index < table.column_names.size()) return table.column_names[original_index];
    return "col" + std::to_string(original_index + 1);
}

// Full-sample variance of each column, denominator n-1.
std::vector<double> column_variances(const Matrix& x) {
    const std::size_t n = x.rows(), p = x.cols();
    std::vector<double> mean(p, 0.0), var(p, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = x.row_ptr(r);
        for (std::size_t c = 0; c < p; ++c) mean[c] += row[c];
    }
    for (std::size_t c = 0; c < p; ++c) mean[c] /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = x.row_ptr(r);
        for (std::size_t c = 0; c < p; ++c) {
            const double d = row[c] - mean[c];
            var[c] += d * d;
        }
    }
    for (std::size_t c = 0; c < p; ++c) var[c] /= static_cast<double>(n - 1);
    return var;
}

// Indices of the top_k largest variances, ties broken by lower index, result
// sorted ascending so kept columns stay in their original order.
std::vector<std::size_t> top_k_columns(const std::vector<double>& var, std::size_t top_k) {
    std::vector<std::size_t> order(var.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (var[a] != var[b]) return var[a] > var[b];
        return a < b;
    });
    order.resize(top_k);
    std::sort(order.begin(), order.end());
    return order;
}

} // namespace

PipelineResult realdata_pipeline(const CsvTable& table, const DatasetOptions& opts, double alpha,
                                 SeededRng& rng, std::size_t threads) {
    const std::size_t n = table.values.rows();
    const std::size_t m = opts.variance_split_count;
    if (m >= n)
        throw DataError("pipeline: variance split of " + std::to_string(m) +
                        " rows needs more than " + std::to_string(m) + " rows of data");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (n - i));
        std::swap(order[i], order[j]);
    }
    order.resize(m);
    return realdata_pipeline_with_split(table, opts, alpha, std::move(order), threads);
}

PipelineResult realdata_pipeline_with_split(const CsvTable& table, const DatasetOptions& opts,
                                            double alpha, std::vector<std::size_t> split_rows,
                                            std::size_t threads) {
    const Matrix& x = table.values;
    const std::size_t n = x.rows(), p = x.cols();
    if (n < 4) throw DataError("pipeline: need at least 4 rows");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("pipeline: alpha must lie in (0,1)");
    if (opts.top_k_by_variance < 2) throw ConfigError("pipeline: top_k must be at least 2");
    if (opts.top_k_by_variance > p)
        throw ConfigError("pipeline: top_k " + std::to_string(opts.top_k_by_variance) +
                          " exceeds the " + std::to_string(p) + " available columns");

    std::sort(split_rows.begin(), split_rows.end());
    const std::size_t m = split_rows.size();
    if (m < 2) throw ConfigError("pipeline: variance split needs at least 2 rows");
    for (std::size_t i = 0; i < m; ++i) {
        if (split_rows[i] >= n) throw ConfigError("pipeline: split row index out of range");
        if (i > 0 && split_rows[i] == split_rows[i - 1])
            throw ConfigError("pipeline: duplicate split row index");
    }
    const std::size_t n_used = n - m;
    if (n_used < 3)
        throw DataError("pipeline: only " + std::to_string(n_used) +
                        " rows remain after the variance split; need at least 3");

    const std::vector<std::size_t> kept = top_k_columns(column_variances(x), opts.top_k_by_variance);
    const std::size_t k = kept.size();

    // Split-sample standard deviation per kept column, denominator m-1.
    std::vector<double> scale(k);
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t col = kept[c];
        double mean = 0.0;
        for (std::size_t r : split_rows) mean += x(r, col);
        mean /= static_cast<double>(m);
        double sse = 0.0;
        for (std::size_t r : split_rows) {
            const double d = x(r, col) - mean;
            sse += d * d;
        }
        const double sd = std::sqrt(sse / static_cast<double>(m - 1));
        if (!(sd > 0.0))
            throw DataError("pipeline: zero variance in the split sample for column " +
                            column_label(table, col));
        scale[c] = sd;
    }

    std::vector<std::uint8_t> in_split(n, 0);
    for (std::size_t r : split_rows) in_split[r] = 1;

    Matrix design(n_used, k);
    std::size_t out_row = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (in_split[r]) continue;
        for (std::size_t c = 0; c < k; ++c) design(out_row, c) = x(r, kept[c]) / scale[c];
        ++out_row;
    }

    if (opts.center) {
        for (std::size_t c = 0; c < k; ++c) {
            double mean = 0.0;
            for (std::size_t r = 0; r < n_used; ++r) mean += design(r, c);
            mean /= static_cast<double>(n_used);
            for (std::size_t r = 0; r < n_used; ++r) design(r, c) -= mean;
        }
    }

    PipelineResult result;
    result.lambda = tuning_lambda(n_used, k);
    const PrecisionEstimate est = nodewise_lasso(design, result.lambda, {}, threads);
    if (!est.all_converged()) throw NumericError("pipeline: nodewise solver did not converge");
    const SymMatrix sigma_hat = sample_covariance(design);
    result.estimate = desparsify(est, sigma_hat);
    result.variance = variance_gaussian(est);
    result.edges = bonferroni_select(result.estimate, result.variance, n_used, k, alpha);

    result.kept_columns = kept;
    result.kept_names.reserve(k);
    for (std::size_t c = 0; c < k; ++c) result.kept_names.push_back(column_label(table, kept[c]));
    result.split_rows = std::move(split_rows);
    result.n_used = n_used;
    result.alpha = alpha;
    return result;
}

} // namespace precis
