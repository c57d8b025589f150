#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "precis/matrix.hpp"
#include "precis/nodewise.hpp"

namespace precis {

// De-biased estimate t_hat = theta + theta^T - theta^T Sigma_hat theta,
// symmetrized after an asymmetry check. Keeps provenance of its inputs.
struct DesparsifiedEstimate {
    SymMatrix t_hat;
    std::shared_ptr<const PrecisionEstimate> source;
    std::shared_ptr<const SymMatrix> sigma_hat_used;
};

struct VarianceEstimate {
    enum class Kind { gaussian_plugin, empirical };

    SymMatrix sigma; // per-entry standard deviations sigma_ij >= 0
    Kind kind = Kind::gaussian_plugin;
    std::size_t floored_count = 0; // negative plug-in variances clipped to 1e-12
};

struct ConfidenceRegion {
    Matrix lower, upper;
    double alpha = 0.0;
    std::size_t n = 0;
};

struct ThresholdRule {
    std::string kind = "nu"; // "nu" or "bonferroni"
    double parameter = 0.0;  // nu, or alpha for the Bonferroni rule
    Matrix per_entry;        // threshold each |t_hat_ij| was compared against
};

// Selected edges as unordered pairs i<j plus per-index diagonal flags.
// Membership criterion: |t_hat_ij| strictly greater than its threshold.
struct EdgeSelection {
    std::vector<std::pair<std::size_t, std::size_t>> selected;
    std::vector<std::uint8_t> diagonal;
    ThresholdRule rule;
};

DesparsifiedEstimate desparsify(const PrecisionEstimate& est, const SymMatrix& sigma_hat);

// Plug-in variance for Gaussian data: sigma_ij^2 = theta_ii * theta_jj + a_ij^2
// with a_ij the symmetrized (theta_ij + theta_ji)/2 entry; sigma stores the
// square root.
VarianceEstimate variance_gaussian(const PrecisionEstimate& est);

// Moment-based variance: sigma_ij^2 = (1/n) sum_k (theta_i^T x_k x_k^T theta_j)^2
// - a_ij^2; negative values are floored at 1e-12 and counted.
VarianceEstimate variance_empirical(const PrecisionEstimate& est, const Matrix& x);

// Entrywise t_hat_ij +/- z_{1-alpha/2} * sigma_ij / sqrt(n).
ConfidenceRegion confidence_intervals(const DesparsifiedEstimate& t, const VarianceEstimate& v,
                                      std::size_t n, double alpha);

// Keeps entries with |t_hat_ij| > sigma_ij * sqrt(2 * nu * log(p) / n).
EdgeSelection threshold_select(const DesparsifiedEstimate& t, const VarianceEstimate& v,
                               std::size_t n, std::size_t p, double nu);

// Same rule applied to an arbitrary symmetric value matrix, e.g. the
// symmetrized nodewise estimate whose exact zeros make the cut sharp.
EdgeSelection threshold_select(const SymMatrix& values, const VarianceEstimate& v, std::size_t n,
                               std::size_t p, double nu);

// Keeps entries with |t_hat_ij| > z_{1 - alpha/(2 p^2)} * sigma_ij / sqrt(n).
EdgeSelection bonferroni_select(const DesparsifiedEstimate& t, const VarianceEstimate& v,
                                std::size_t n, std::size_t p, double alpha);

// Simulation-only diagnostic: the leftover term after removing the pivot,
// delta_ij = sqrt(n) * (t_hat_ij - theta0_ij) + sqrt(n) * theta0_i^T
// (sigma_hat - sigma0) theta0_j.
Matrix remainder_decomposition(const DesparsifiedEstimate& t, const SymMatrix& theta0,
                               const SymMatrix& sigma_hat, const SymMatrix& sigma0,
                               std::size_t n);

} // namespace precis
