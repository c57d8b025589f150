// Acceptance suite: end-to-end statistical checks of the estimator against
// its published operating characteristics, plus exact-math and determinism
// gates. Prints one PASS/FAIL line per criterion and exits nonzero if any
// fail. Every run is fully seeded (master seed 1 throughout), so reruns
// reproduce these numbers bit for bit on any machine.
//
// Usage: precis_acceptance [criterion ...]   e.g. `precis_acceptance 5 6 10`
// runs a subset; no arguments runs everything.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>
#include <vector>

#include "precis/csv.hpp"
#include "precis/desparsify.hpp"
#include "precis/experiments.hpp"
#include "precis/manifest.hpp"
#include "precis/matrix.hpp"
#include "precis/nodewise.hpp"
#include "precis/numerics.hpp"
#include "precis/pipeline.hpp"
#include "precis/rng.hpp"
#include "precis/simgen.hpp"

using namespace precis;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMasterSeed = 1;

std::size_t hw_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

bool within(double value, double center, double half_width) {
    return std::abs(value - center) <= half_width;
}

ModelSpec banded_model(std::size_t p, double rho0, double rho1, double rho2) {
    ModelSpec m;
    m.p = p;
    m.rho0 = rho0;
    m.rho1 = rho1;
    m.rho2 = rho2;
    return m;
}

// The coverage and normality designs run on the tridiagonal model (1,0.3,0);
// the selection design uses the five-diagonal (1,0.5,0.4).
ExperimentConfig tridiag_config(std::size_t n, std::size_t replications) {
    ExperimentConfig cfg;
    cfg.model = banded_model(100, 1.0, 0.3, 0.0);
    cfg.n = n;
    cfg.replications = replications;
    cfg.alpha = 0.05;
    cfg.master_seed = kMasterSeed;
    cfg.threads = hw_threads();
    return cfg;
}

struct Tally {
    int failures = 0;
    void report(int id, bool pass, const std::string& detail) {
        std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fmt_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

// ---- 1-3: interval coverage against the published tables ----------------

void criterion_1(Tally& t) {
    const auto start = std::chrono::steady_clock::now();
    const CoverageReport r = run_coverage(tridiag_config(191, 300));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = within(r.avgcov_s0, 0.945, 0.02) && within(r.avglen_s0, 0.302, 0.02) &&
                      within(r.avgcov_s0c, 0.963, 0.015) && within(r.avglen_s0c, 0.262, 0.02) &&
                      secs <= 600.0;
    t.report(1, pass,
             "coverage, tridiagonal (1,0.3,0), p=100 n=191: avgcov_s0=" + fmt(r.avgcov_s0) +
                 " (0.945+-0.02), avglen_s0=" + fmt(r.avglen_s0) +
                 " (0.302+-0.02), avgcov_s0c=" + fmt(r.avgcov_s0c) +
                 " (0.963+-0.015), avglen_s0c=" + fmt(r.avglen_s0c) + " (0.262+-0.02), " +
                 fmt(secs) + "s (<=600)");
}

void criterion_2(Tally& t) {
    ExperimentConfig cfg = tridiag_config(531, 300);
    cfg.model = banded_model(100, 1.0, 0.5, 0.3);
    cfg.model.perturb = ModelSpec::Perturb{0.05, 7};
    const CoverageReport r = run_coverage(cfg);
    const bool pass = within(r.avgcov_s0, 0.896, 0.03) && within(r.avgcov_s0c, 0.975, 0.015);
    t.report(2, pass,
             "coverage, perturbed (1,0.5,0.3), p=100 n=531: avgcov_s0=" + fmt(r.avgcov_s0) +
                 " (0.896+-0.03), avgcov_s0c=" + fmt(r.avgcov_s0c) + " (0.975+-0.015)");
}

void criterion_3(Tally& t) {
    ExperimentConfig cfg = tridiag_config(191, 300);
    cfg.model.kind = ModelSpec::Kind::subgaussian_uniform;
    cfg.variance_kind = VarianceEstimate::Kind::empirical;
    const CoverageReport r = run_coverage(cfg);
    const bool pass = within(r.avgcov_s0, 0.906, 0.03) && within(r.avglen_s0, 0.234, 0.02) &&
                      within(r.avgcov_s0c, 0.949, 0.02);
    t.report(3, pass,
             "coverage, bounded design + empirical variance, p=100 n=191: avgcov_s0=" +
                 fmt(r.avgcov_s0) + " (0.906+-0.03), avglen_s0=" + fmt(r.avglen_s0) +
                 " (0.234+-0.02), avgcov_s0c=" + fmt(r.avgcov_s0c) + " (0.949+-0.02)");
}

// ---- 4: exact support recovery -------------------------------------------

void criterion_4(Tally& t) {
    ExperimentConfig cfg = tridiag_config(400, 100);
    cfg.model = banded_model(100, 1.0, 0.5, 0.4);
    cfg.selection_nu = 1.0;
    const SelectionReport r = run_selection(cfg);
    std::size_t exact = 0;
    for (const std::size_t tp : r.per_rep_tp)
        if (tp == 494) ++exact;
    const bool pass = r.s0_size == 494 && exact >= 95 && r.mean_fp == 0.0;
    t.report(4, pass,
             "selection, p=100 n=400 nu=1: |S0|=" + std::to_string(r.s0_size) +
                 " (=494), TP==494 in " + std::to_string(exact) + "/100 (>=95), mean FP=" +
                 fmt(r.mean_fp) + " (==0)");
}

// ---- 5: lambda = 0 collapses to the exact inverse -------------------------

void criterion_5(Tally& t) {
    SolverOptions tight;
    tight.tol = 1e-12;
    tight.max_iters = 200000;
    double worst_theta = 0.0, worst_t = 0.0;
    for (std::uint64_t inst = 0; inst < 50; ++inst) {
        const std::size_t p = 3 + inst % 8;
        const GroundTruth gt = build_ground_truth(banded_model(p, 1.0, 0.3, 0.1));
        SeededRng rng = SeededRng::for_stream(500, inst);
        const Matrix x = sample_gaussian(gt, 10 * p, rng);
        const SymMatrix sigma_hat = sample_covariance(x);
        const Matrix inv = spd_inverse(sigma_hat).as_matrix();
        const PrecisionEstimate est = nodewise_lasso(x, 0.0, tight, 1);
        const DesparsifiedEstimate de = desparsify(est, sigma_hat);
        worst_theta = std::max(worst_theta, max_abs_diff(est.theta, inv));
        worst_t = std::max(worst_t, max_abs_diff(de.t_hat.as_matrix(), inv));
    }
    const bool pass = worst_theta <= 1e-8 && worst_t <= 1e-8;
    t.report(5, pass,
             "lambda=0 oracle, 50 instances p in 3..10: max|theta - inv|=" + fmt_sci(worst_theta) +
                 ", max|t_hat - inv|=" + fmt_sci(worst_t) + " (<=1e-8)");
}

// ---- 6: stationarity bound of every nodewise fit --------------------------

void criterion_6(Tally& t) {
    const GroundTruth gt = build_ground_truth(banded_model(30, 1.0, 0.3, 0.0));
    const double lambda = tuning_lambda(200, 30);
    bool all_ok = true;
    double worst_excess = 0.0;
    for (std::uint64_t inst = 0; inst < 100; ++inst) {
        SeededRng rng = SeededRng::for_stream(600, inst);
        const Matrix x = sample_gaussian(gt, 200, rng);
        const PrecisionEstimate est = nodewise_lasso(x, lambda, {}, 1);
        if (!est.all_converged()) {
            all_ok = false;
            break;
        }
        const KktReport rep = verify_kkt(sample_covariance(x), est);
        for (std::size_t j = 0; j < 30; ++j) {
            const double excess = rep.per_column_violation[j] - rep.per_column_bound[j];
            worst_excess = std::max(worst_excess, excess);
            if (excess > 1e-6) all_ok = false;
        }
    }
    t.report(6, all_ok,
             "stationarity bound, 100 instances p=30 n=200: worst excess over lambda_j/tau_sq_j=" +
                 fmt_sci(worst_excess) + " (<=1e-6)");
}

// ---- 7: normality of the standardized statistic ---------------------------

void criterion_7(Tally& t) {
    const ExperimentConfig cfg = tridiag_config(500, 300);
    const std::vector<std::pair<std::size_t, std::size_t>> entries = {{0, 0}, {0, 1}, {0, 2}};
    const auto stats = collect_standardized_stats(cfg, entries);
    const double ks11 = ks_distance(stats[0]);
    const double ks12 = ks_distance(stats[1]);
    const double ks13 = ks_distance(stats[2]);
    const bool pass = ks11 <= 0.09 && ks12 <= 0.09 && ks13 <= 0.09;
    std::string detail = "normality, p=100 n=500 N=300: KS(1,1)=" + fmt(ks11) + ", KS(1,2)=" +
                         fmt(ks12) + ", KS(1,3)=" + fmt(ks13) + " (each <=0.09)";
    if (!pass)
        detail += "; known gap: the statistic at the corner entry (1,3) carries a finite-sample"
                  " location bias of about -0.2 sd (both its regressions shrink the shared"
                  " neighbor column 2), which alone forces KS >= 0.09 at N=300";
    t.report(7, pass, detail);
}

// ---- 8: the two variance estimators and the true pivot --------------------

void criterion_8(Tally& t) {
    const GroundTruth gt = build_ground_truth(banded_model(5, 1.0, 0.3, 0.1));
    SeededRng rng = SeededRng::for_stream(800, 0);
    const Matrix x = sample_gaussian(gt, 5000, rng);
    const double lambda = std::sqrt(std::log(5.0) / 5000.0);
    const PrecisionEstimate est = nodewise_lasso(x, lambda, {}, 1);
    const VarianceEstimate vg = variance_gaussian(est);
    const VarianceEstimate ve = variance_empirical(est, x);
    double worst_gap = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            worst_gap = std::max(worst_gap, std::abs(vg.sigma(i, j) - ve.sigma(i, j)));

    // Monte Carlo check of the plug-in formula on the true precision matrix:
    // with w = theta0 x, Var(w_i w_j) = theta_ii theta_jj + theta_ij^2.
    SeededRng mc_rng = SeededRng::for_stream(801, 0);
    const std::size_t draws = 100000;
    const Matrix xs = sample_gaussian(gt, draws, mc_rng);
    const Matrix w = matmul(xs, gt.theta0.as_matrix()); // theta0 symmetric
    double worst_dev_in_se = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i; j < 5; ++j) {
            double mean = 0.0;
            for (std::size_t k = 0; k < draws; ++k) mean += w(k, i) * w(k, j);
            mean /= static_cast<double>(draws);
            double m2 = 0.0, m4 = 0.0;
            for (std::size_t k = 0; k < draws; ++k) {
                const double d = w(k, i) * w(k, j) - mean;
                m2 += d * d;
                m4 += d * d * d * d;
            }
            m2 /= static_cast<double>(draws);
            m4 /= static_cast<double>(draws);
            const double target = gt.theta0(i, i) * gt.theta0(j, j) +
                                  gt.theta0(i, j) * gt.theta0(i, j);
            const double se = std::sqrt((m4 - m2 * m2) / static_cast<double>(draws));
            worst_dev_in_se = std::max(worst_dev_in_se, std::abs(m2 - target) / se);
        }
    const bool pass = worst_gap <= 0.05 && worst_dev_in_se <= 3.0;
    t.report(8, pass,
             "variance cross-check, p=5 n=5000: max|sigma_gauss - sigma_emp|=" + fmt(worst_gap) +
                 " (<=0.05); pivot variance vs theta_ii*theta_jj+theta_ij^2 off by " +
                 fmt(worst_dev_in_se) + " SE (<=3) over 100000 draws");
}

// ---- 9: error shrinks at the root-n rate ----------------------------------

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

void criterion_9(Tally& t) {
    const GroundTruth gt = build_ground_truth(banded_model(100, 1.0, 0.3, 0.0));
    std::vector<double> sup_400, sup_800, rem_400, rem_800;
    for (const std::size_t n : {std::size_t{400}, std::size_t{800}}) {
        const double lambda = tuning_lambda(n, 100);
        std::vector<double>& sup = n == 400 ? sup_400 : sup_800;
        std::vector<double>& rem = n == 400 ? rem_400 : rem_800;
        for (std::uint64_t r = 0; r < 50; ++r) {
            SeededRng rng = SeededRng::for_stream(kMasterSeed, r);
            const Matrix x = sample_gaussian(gt, n, rng);
            const SymMatrix sigma_hat = sample_covariance(x);
            const PrecisionEstimate est = nodewise_lasso(x, lambda, {}, 1, true);
            const DesparsifiedEstimate de = desparsify(est, sigma_hat);
            sup.push_back(max_abs_diff(de.t_hat.as_matrix(), gt.theta0.as_matrix()));
            rem.push_back(max_abs(
                remainder_decomposition(de, gt.theta0, sigma_hat, gt.sigma0, n)));
        }
    }
    const double ratio = median(sup_400) / median(sup_800);
    const double rem4 = median(rem_400), rem8 = median(rem_800);
    const bool pass = ratio >= 1.3 && rem8 < rem4;
    t.report(9, pass,
             "rate trend, p=100, 50 reps: median sup-error " + fmt(median(sup_400)) + " -> " +
                 fmt(median(sup_800)) + " (ratio " + fmt(ratio) +
                 " >=1.3); median remainder " + fmt(rem4) + " -> " + fmt(rem8) + " (decreasing)");
}

// ---- 10: byte-identical CLI reruns from the manifest -----------------------

struct CliScratch {
    fs::path dir;
    std::string cli;
    CliScratch() {
        const char* env = std::getenv("PRECIS_CLI_PATH");
        if (env) cli = env;
        dir = fs::temp_directory_path() /
              ("precis_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~CliScratch() { std::error_code ec; fs::remove_all(dir, ec); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

int run_command(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return rc == -1 ? -1 : (WIFEXITED(rc) ? WEXITSTATUS(rc) : -2);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return "<missing " + path + ">";
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// Re-assembles a shell command from manifest argv tokens, overriding
// --out-prefix and --threads.
std::string replay_command(const std::string& cli, const RunManifest& m,
                           const std::string& out_prefix, const std::string& threads) {
    std::vector<std::string> tokens = m.argv;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] == "--out-prefix") tokens[i + 1] = out_prefix;
        if (tokens[i] == "--threads") tokens[i + 1] = threads;
    }
    std::string cmd = "'" + cli + "'";
    for (const std::string& tok : tokens) cmd += " '" + tok + "'";
    return cmd;
}

void criterion_10(Tally& t) {
    CliScratch scratch;
    if (scratch.cli.empty()) {
        t.report(10, false, "determinism: PRECIS_CLI_PATH is not set");
        return;
    }

    bool pass = true;
    std::string detail = "determinism:";

    // simulate-coverage, rerun from its own manifest at threads 1 and 8
    const std::string cov = scratch.file("cov");
    pass &= run_command("'" + scratch.cli + "' simulate-coverage --p 15 --model 1,0.3,0.1"
                        " --n 60 --N 4 --seed 12 --threads 1 --out-prefix '" + cov + "'") == 0;
    if (pass) {
        const RunManifest m = load_manifest(cov + ".manifest.txt");
        const std::string c1 = scratch.file("cov_t1"), c8 = scratch.file("cov_t8");
        pass &= run_command(replay_command(scratch.cli, m, c1, "1")) == 0;
        pass &= run_command(replay_command(scratch.cli, m, c8, "8")) == 0;
        for (const char* suffix : {".report.json", ".coverage.csv", ".length.csv"}) {
            const bool same = slurp(cov + suffix) == slurp(c1 + suffix) &&
                              slurp(cov + suffix) == slurp(c8 + suffix);
            pass &= same;
        }
        detail += " simulate-coverage replay at threads {1,8} " +
                  std::string(pass ? "byte-identical" : "DIFFERS");
    } else {
        detail += " simulate-coverage run failed";
    }

    // estimate on a CSV, same comparison
    if (pass) {
        const GroundTruth gt = build_ground_truth(banded_model(8, 1.0, 0.4, 0.2));
        SeededRng rng = SeededRng::for_stream(1000, 0);
        const std::string csv = scratch.file("data.csv");
        write_csv_matrix(csv, sample_gaussian(gt, 80, rng));
        const std::string est = scratch.file("est");
        bool ok = run_command("'" + scratch.cli + "' estimate --input '" + csv +
                              "' --threads 1 --out-prefix '" + est + "'") == 0;
        if (ok) {
            const RunManifest m = load_manifest(est + ".manifest.txt");
            const std::string e1 = scratch.file("est_t1"), e8 = scratch.file("est_t8");
            ok &= run_command(replay_command(scratch.cli, m, e1, "1")) == 0;
            ok &= run_command(replay_command(scratch.cli, m, e8, "8")) == 0;
            for (const char* suffix : {".theta.csv", ".that.csv"})
                ok &= slurp(est + suffix) == slurp(e1 + suffix) &&
                      slurp(est + suffix) == slurp(e8 + suffix);
        }
        pass &= ok;
        detail += ", estimate replay " + std::string(ok ? "byte-identical" : "DIFFERS");
    }
    t.report(10, pass, detail);
}

// ---- 11: specificity of the real-data pipeline on a known band ------------

void criterion_11(Tally& t) {
    const GroundTruth gt = build_ground_truth(banded_model(60, 1.0, 0.3, 0.0));
    std::size_t bad_streams = 0, total_out = 0;
    std::size_t streams_with_full_band = 0;
    for (std::uint64_t s = 1; s <= 100; ++s) {
        SeededRng rng = SeededRng::for_stream(9100, s);
        CsvTable table;
        table.values = sample_gaussian(gt, 600, rng);
        DatasetOptions opts;
        opts.top_k_by_variance = 60;
        opts.variance_split_count = 10;
        const PipelineResult res = realdata_pipeline(table, opts, 0.05, rng, 1);
        std::size_t out = 0, band = 0;
        for (const auto& [i, j] : res.edges.selected) {
            const std::size_t a = res.kept_columns[i], b = res.kept_columns[j];
            const std::size_t dist = a > b ? a - b : b - a;
            if (dist > 1) ++out;
            else ++band;
        }
        if (out > 0) {
            ++bad_streams;
            total_out += out;
        }
        if (band == 59) ++streams_with_full_band;
    }
    const bool pass = bad_streams <= 5;
    t.report(11, pass,
             "pipeline specificity, banded (1,0.3,0) p=60 n=600, 100 streams: " +
                 std::to_string(bad_streams) + " with an out-of-band edge (<=5, " +
                 std::to_string(total_out) + " such edges total); all 59 band edges found in " +
                 std::to_string(streams_with_full_band) + "/100");
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    const auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };

    Tally tally;
    if (wanted(1)) criterion_1(tally);
    if (wanted(2)) criterion_2(tally);
    if (wanted(3)) criterion_3(tally);
    if (wanted(4)) criterion_4(tally);
    if (wanted(5)) criterion_5(tally);
    if (wanted(6)) criterion_6(tally);
    if (wanted(7)) criterion_7(tally);
    if (wanted(8)) criterion_8(tally);
    if (wanted(9)) criterion_9(tally);
    if (wanted(10)) criterion_10(tally);
    if (wanted(11)) criterion_11(tally);

    if (tally.failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", tally.failures);
    return 1;
}
