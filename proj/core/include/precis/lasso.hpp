#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "precis/matrix.hpp"

namespace precis {

// One penalized regression: minimize ||y - X g||^2 / n + 2*lambda*||g||_1
// over g (solve_lasso), or ||y - X g||_2 / sqrt(n) + lambda*||g||_1
// (solve_sqrt_lasso, where `penalty` plays the role of lambda0).
struct LassoProblem {
    Matrix design;                // n x q
    std::vector<double> response; // length n
    double penalty = 0.0;         // lambda >= 0
};

struct SolverOptions {
    double tol = 1e-8;             // max |coefficient change| per sweep
    std::size_t max_iters = 10000; // sweep cap
    std::optional<std::vector<double>> warm_start;
};

struct LassoSolution {
    std::vector<double> coefficients;
    std::size_t iterations = 0;  // completed sweeps
    double final_max_delta = 0.0;
    double objective = 0.0;
    bool converged = false; // false only when the sweep cap was hit
};

// sign(z) * max(|z| - t, 0).
double soft_threshold(double z, double t);

// Cyclic coordinate descent with cached column norms and residual updates.
// Convergence: per-sweep max coefficient change <= opts.tol, then a KKT
// stationarity check at tolerance 1e-6 * max(1, lambda). Coordinates are
// visited in fixed index order, so results are bit-reproducible.
LassoSolution solve_lasso(const LassoProblem& problem, const SolverOptions& opts = {});

// Square-root Lasso by alternating minimization: a Lasso step at effective
// penalty lambda0 * sigma, then sigma = ||y - X g||_2 / sqrt(n); at most 50
// outer rounds. The fixed point satisfies the solve_lasso stationarity
// conditions at penalty lambda0 * sigma.
LassoSolution solve_sqrt_lasso(const LassoProblem& problem, const SolverOptions& opts = {});

// Max stationarity violation of `coefficients` for the given problem:
// at zero coordinates max(0, |g_k| - lambda), at active ones
// |g_k - lambda*sign(g_k)| with g_k = X_k^T (y - X g) / n.
double kkt_residual(const LassoProblem& problem, const std::vector<double>& coefficients);

} // namespace precis
