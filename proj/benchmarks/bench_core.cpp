// Microbenchmarks for the estimation hot paths. Sizes mirror the simulation
// studies (p around 100, n a few hundred), so regressions here translate
// directly into slower experiment runs.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "precis/desparsify.hpp"
#include "precis/lasso.hpp"
#include "precis/matrix.hpp"
#include "precis/nodewise.hpp"
#include "precis/numerics.hpp"
#include "precis/rng.hpp"
#include "precis/simgen.hpp"

using namespace precis;

namespace {

Matrix banded_sample(std::size_t p, std::size_t n, std::uint64_t stream) {
    ModelSpec m;
    m.p = p;
    m.rho0 = 1.0;
    m.rho1 = 0.5;
    m.rho2 = 0.4;
    const GroundTruth gt = build_ground_truth(m);
    SeededRng rng = SeededRng::for_stream(77, stream);
    return sample_gaussian(gt, n, rng);
}

void bm_solve_lasso(benchmark::State& state) {
    const std::size_t p = static_cast<std::size_t>(state.range(0));
    const Matrix x = banded_sample(p, 200, 0);
    LassoProblem problem;
    problem.design = Matrix(200, p - 1);
    problem.response.resize(200);
    for (std::size_t r = 0; r < 200; ++r) {
        problem.response[r] = x(r, 0);
        for (std::size_t c = 1; c < p; ++c) problem.design(r, c - 1) = x(r, c);
    }
    problem.penalty = tuning_lambda(200, p);
    for (auto _ : state) {
        const LassoSolution sol = solve_lasso(problem, {});
        benchmark::DoNotOptimize(sol.coefficients.data());
    }
}
BENCHMARK(bm_solve_lasso)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void bm_nodewise(benchmark::State& state) {
    const std::size_t p = static_cast<std::size_t>(state.range(0));
    const Matrix x = banded_sample(p, 200, 1);
    const double lambda = tuning_lambda(200, p);
    for (auto _ : state) {
        const PrecisionEstimate est = nodewise_lasso(x, lambda, {}, 1);
        benchmark::DoNotOptimize(est.theta.data());
    }
}
BENCHMARK(bm_nodewise)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void bm_nodewise_scaled(benchmark::State& state) {
    const std::size_t p = static_cast<std::size_t>(state.range(0));
    const Matrix x = banded_sample(p, 200, 2);
    const double lambda = tuning_lambda(200, p);
    for (auto _ : state) {
        const PrecisionEstimate est = nodewise_lasso(x, lambda, {}, 1, true);
        benchmark::DoNotOptimize(est.theta.data());
    }
}
BENCHMARK(bm_nodewise_scaled)->Arg(100)->Unit(benchmark::kMillisecond);

void bm_desparsify(benchmark::State& state) {
    const std::size_t p = static_cast<std::size_t>(state.range(0));
    const Matrix x = banded_sample(p, 200, 3);
    const SymMatrix sigma_hat = sample_covariance(x);
    const PrecisionEstimate est = nodewise_lasso(x, tuning_lambda(200, p), {}, 1);
    for (auto _ : state) {
        const DesparsifiedEstimate de = desparsify(est, sigma_hat);
        benchmark::DoNotOptimize(de.t_hat.as_matrix().data());
    }
}
BENCHMARK(bm_desparsify)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void bm_sample_covariance(benchmark::State& state) {
    const Matrix x = banded_sample(200, 500, 4);
    for (auto _ : state) {
        const SymMatrix s = sample_covariance(x);
        benchmark::DoNotOptimize(s.as_matrix().data());
    }
}
BENCHMARK(bm_sample_covariance)->Unit(benchmark::kMillisecond);

void bm_spd_inverse(benchmark::State& state) {
    const std::size_t p = static_cast<std::size_t>(state.range(0));
    const Matrix x = banded_sample(p, 4 * p, 5);
    const SymMatrix sigma_hat = sample_covariance(x);
    for (auto _ : state) {
        const SymMatrix inv = spd_inverse(sigma_hat);
        benchmark::DoNotOptimize(inv.as_matrix().data());
    }
}
BENCHMARK(bm_spd_inverse)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void bm_tuning_lambda(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(tuning_lambda(191, 100));
}
BENCHMARK(bm_tuning_lambda);

void bm_rng_normal(benchmark::State& state) {
    SeededRng rng(42);
    for (auto _ : state) {
        double acc = 0.0;
        for (int i = 0; i < 1000; ++i) acc += rng.next_normal();
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(bm_rng_normal);

} // namespace

BENCHMARK_MAIN();
