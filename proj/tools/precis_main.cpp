// precis: nodewise-regression precision matrix estimation with de-biased
// confidence intervals and thresholded edge selection.
//
// User-facing indices (CLI flags, CSV output, entry lists) are 1-based;
// everything inside the library is 0-based.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "precis/csv.hpp"
#include "precis/desparsify.hpp"
#include "precis/errors.hpp"
#include "precis/experiments.hpp"
#include "precis/format.hpp"
#include "precis/manifest.hpp"
#include "precis/matrix.hpp"
#include "precis/nodewise.hpp"
#include "precis/numerics.hpp"
#include "precis/pipeline.hpp"
#include "precis/rng.hpp"
#include "precis/simgen.hpp"
#include "precis/version.hpp"

using json = nlohmann::json;

namespace {

std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::size_t default_threads() {
    if (const char* env = std::getenv("PRECIS_THREADS"))
        return precis::parse_size(env, "PRECIS_THREADS");
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw precis::DataError(path + ": cannot open file for writing");
    out << content;
    if (!out) throw precis::DataError(path + ": write failed");
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// ---- flag bundles ------------------------------------------------------

struct SimFlags {
    std::size_t p = 0;
    std::string model;   // "rho0,rho1,rho2"
    std::string kind = "gaussian";
    std::string perturb; // "delta,seed"
    std::size_t n = 0;
    std::size_t s = 0;
    std::size_t replications = 0;
    double alpha = 0.05;
    std::string variance = "gaussian";
    std::string lambda = "auto";
    std::uint64_t seed = 0;
    std::size_t threads = 0; // 0: resolve from env/hardware
    bool raw_fits = false;
    std::string out_prefix;
};

struct DataFlags {
    std::string input;
    bool header = false;
    std::string delimiter = ",";
    bool center = false;
    std::string lambda = "auto";
    std::size_t threads = 0;
    std::string out_prefix;
};

void add_sim_options(CLI::App* cmd, SimFlags& f, bool with_variance) {
    cmd->add_option("--p", f.p, "Model dimension")->required();
    cmd->add_option("--model", f.model, "Diagonal and first two bands: rho0,rho1,rho2")->required();
    cmd->add_option("--kind", f.kind, "Row distribution: gaussian or subgaussian_uniform")
        ->check(CLI::IsMember({"gaussian", "subgaussian_uniform"}));
    cmd->add_option("--perturb", f.perturb, "Off-diagonal perturbation: delta,seed");
    cmd->add_option("--n", f.n, "Sample size per replication");
    cmd->add_option("--s", f.s, "Row sparsity; sets n = ceil((s log p)^2)");
    cmd->add_option("--N", f.replications, "Number of replications")->required();
    cmd->add_option("--alpha", f.alpha, "Two-sided miscoverage level");
    if (with_variance)
        cmd->add_option("--variance", f.variance, "Variance estimator: gaussian or empirical")
            ->check(CLI::IsMember({"gaussian", "empirical"}));
    cmd->add_option("--lambda", f.lambda, "Penalty: 'auto' or a nonnegative number");
    cmd->add_option("--seed", f.seed, "Master seed; replication r uses stream (seed, r)");
    cmd->add_option("--threads", f.threads, "Worker cap (default: PRECIS_THREADS or hardware)");
    cmd->add_flag("--raw-fits", f.raw_fits,
                  "Regress on unscaled predictors (default: unit-variance scaling)");
    cmd->add_option("--out-prefix", f.out_prefix, "Output path prefix")->required();
}

void add_data_options(CLI::App* cmd, DataFlags& f) {
    cmd->add_option("--input", f.input, "CSV file of observations, one row each")->required();
    cmd->add_flag("--header", f.header, "First CSV line holds column names");
    cmd->add_option("--delimiter", f.delimiter, "Field separator (one character)");
    cmd->add_flag("--center", f.center, "Subtract column means before estimation");
    cmd->add_option("--lambda", f.lambda, "Penalty: 'auto' or a nonnegative number");
    cmd->add_option("--threads", f.threads, "Worker cap (default: PRECIS_THREADS or hardware)");
    cmd->add_option("--out-prefix", f.out_prefix, "Output path prefix")->required();
}

// ---- shared plumbing ---------------------------------------------------

precis::ModelSpec make_model(const SimFlags& f) {
    precis::ModelSpec spec;
    spec.p = f.p;
    const auto parts = split_on(f.model, ',');
    if (parts.size() != 3)
        throw precis::ConfigError("--model expects rho0,rho1,rho2");
    spec.rho0 = precis::parse_double(parts[0], "--model rho0");
    spec.rho1 = precis::parse_double(parts[1], "--model rho1");
    spec.rho2 = precis::parse_double(parts[2], "--model rho2");
    spec.kind = f.kind == "gaussian" ? precis::ModelSpec::Kind::gaussian
                                     : precis::ModelSpec::Kind::subgaussian_uniform;
    if (!f.perturb.empty()) {
        const auto pp = split_on(f.perturb, ',');
        if (pp.size() != 2) throw precis::ConfigError("--perturb expects delta,seed");
        precis::ModelSpec::Perturb pt;
        pt.delta = precis::parse_double(pp[0], "--perturb delta");
        pt.seed = precis::parse_u64(pp[1], "--perturb seed");
        spec.perturb = pt;
    }
    return spec;
}

std::optional<double> parse_lambda_flag(const std::string& text) {
    if (text == "auto") return std::nullopt;
    const double value = precis::parse_double(text, "--lambda");
    if (!(value >= 0.0)) throw precis::ConfigError("--lambda must be nonnegative");
    return value;
}

std::size_t resolve_threads(std::size_t flag) { return flag == 0 ? default_threads() : flag; }

precis::ExperimentConfig make_config(const SimFlags& f) {
    precis::ExperimentConfig cfg;
    cfg.model = make_model(f);
    if ((f.n == 0) == (f.s == 0))
        throw precis::ConfigError("exactly one of --n and --s is required");
    cfg.n = f.n != 0 ? f.n : precis::sample_size_rule(f.s, f.p);
    cfg.replications = f.replications;
    cfg.alpha = f.alpha;
    cfg.variance_kind = f.variance == "empirical" ? precis::VarianceEstimate::Kind::empirical
                                                  : precis::VarianceEstimate::Kind::gaussian_plugin;
    cfg.fixed_lambda = parse_lambda_flag(f.lambda);
    cfg.master_seed = f.seed;
    cfg.threads = resolve_threads(f.threads);
    cfg.scale_predictors = !f.raw_fits;
    return cfg;
}

void echo_sim_args(precis::RunManifest& m, const SimFlags& f, const precis::ExperimentConfig& cfg,
                   bool with_variance) {
    m.args.emplace_back("p", std::to_string(cfg.model.p));
    m.args.emplace_back("model", precis::format_model_spec(cfg.model));
    m.args.emplace_back("n", std::to_string(cfg.n));
    m.args.emplace_back("replications", std::to_string(cfg.replications));
    m.args.emplace_back("alpha", precis::format_double(cfg.alpha));
    if (with_variance)
        m.args.emplace_back("variance", f.variance);
    m.args.emplace_back("lambda", f.lambda);
    m.args.emplace_back("scale-predictors", cfg.scale_predictors ? "1" : "0");
    m.args.emplace_back("threads", std::to_string(cfg.threads));
    m.args.emplace_back("out-prefix", f.out_prefix);
}

precis::RunManifest start_manifest(const std::string& command,
                                   const std::vector<std::string>& argv_tokens,
                                   std::uint64_t seed) {
    precis::RunManifest m;
    m.command = command;
    m.argv = argv_tokens;
    m.master_seed = seed;
    m.version = precis::kVersion;
    m.wall_clock_utc = now_utc();
    return m;
}

void finish_manifest(precis::RunManifest& m, const std::string& out_prefix) {
    const std::string path = out_prefix + ".manifest.txt";
    precis::save_manifest(path, m);
    std::cout << "wrote " << path << "\n";
}

void record_output(precis::RunManifest& m, const std::string& path) {
    m.outputs.push_back(path);
    std::cout << "wrote " << path << "\n";
}

json model_json(const precis::ExperimentConfig& cfg) {
    json j;
    j["model"] = precis::format_model_spec(cfg.model);
    j["p"] = cfg.model.p;
    j["n"] = cfg.n;
    j["replications"] = cfg.replications;
    j["seed"] = cfg.master_seed;
    j["scale_predictors"] = cfg.scale_predictors;
    return j;
}

// ---- estimate/ci/select on CSV data ------------------------------------

struct EstimateArtifacts {
    precis::CsvTable table;
    precis::PrecisionEstimate est;
    precis::DesparsifiedEstimate desparsified;
    double lambda = 0.0;
    std::size_t n = 0;
};

EstimateArtifacts run_estimate(const DataFlags& f) {
    if (f.delimiter.size() != 1)
        throw precis::ConfigError("--delimiter must be a single character");
    precis::DatasetOptions opts;
    opts.path = f.input;
    opts.delimiter = f.delimiter[0];
    opts.has_header = f.header;

    EstimateArtifacts art;
    art.table = precis::load_csv(opts);
    precis::Matrix& x = art.table.values;
    if (f.center) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            double mean = 0.0;
            for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
            mean /= static_cast<double>(x.rows());
            for (std::size_t r = 0; r < x.rows(); ++r) x(r, c) -= mean;
        }
    }
    art.n = x.rows();
    const auto fixed = parse_lambda_flag(f.lambda);
    art.lambda = fixed ? *fixed : precis::tuning_lambda(x.rows(), x.cols());
    art.est = precis::nodewise_lasso(x, art.lambda, {}, resolve_threads(f.threads));
    if (!art.est.all_converged())
        throw precis::NumericError("nodewise solver did not converge; raise --lambda or check data");
    art.desparsified = precis::desparsify(art.est, precis::sample_covariance(x));
    return art;
}

void echo_data_args(precis::RunManifest& m, const DataFlags& f, double lambda_used) {
    m.args.emplace_back("input", f.input);
    m.args.emplace_back("header", f.header ? "1" : "0");
    m.args.emplace_back("delimiter", f.delimiter);
    m.args.emplace_back("center", f.center ? "1" : "0");
    m.args.emplace_back("lambda", f.lambda);
    m.args.emplace_back("lambda_used", precis::format_double(lambda_used));
    m.args.emplace_back("out-prefix", f.out_prefix);
}

std::string edge_csv(const precis::EdgeSelection& sel, const precis::Matrix& t_hat,
                     const std::vector<std::string>& names) {
    std::string out = "i,j,name_i,name_j,t_hat,threshold\n";
    for (const auto& [i, j] : sel.selected) {
        out += std::to_string(i + 1) + "," + std::to_string(j + 1) + ",";
        out += (i < names.size() ? names[i] : "col" + std::to_string(i + 1)) + ",";
        out += (j < names.size() ? names[j] : "col" + std::to_string(j + 1)) + ",";
        out += precis::format_double(t_hat(i, j)) + ",";
        out += precis::format_double(sel.rule.per_entry(i, j)) + "\n";
    }
    return out;
}

// ---- subcommand runners -------------------------------------------------

int run_estimate_cmd(const DataFlags& f, const std::vector<std::string>& argv_tokens) {
    EstimateArtifacts art = run_estimate(f);
    precis::RunManifest m = start_manifest("estimate", argv_tokens, 0);
    echo_data_args(m, f, art.lambda);

    const std::string theta_path = f.out_prefix + ".theta.csv";
    precis::write_csv_matrix(theta_path, art.est.theta, art.table.column_names);
    record_output(m, theta_path);

    const std::string that_path = f.out_prefix + ".that.csv";
    precis::write_csv_matrix(that_path, art.desparsified.t_hat.as_matrix(), art.table.column_names);
    record_output(m, that_path);

    finish_manifest(m, f.out_prefix);
    std::cout << "n=" << art.n << " p=" << art.table.values.cols()
              << " lambda=" << precis::format_double(art.lambda) << "\n";
    return 0;
}

int run_ci_cmd(const DataFlags& f, double alpha, const std::vector<std::string>& argv_tokens) {
    EstimateArtifacts art = run_estimate(f);
    const precis::VarianceEstimate var = precis::variance_gaussian(art.est);
    const precis::ConfidenceRegion region =
        precis::confidence_intervals(art.desparsified, var, art.n, alpha);

    precis::RunManifest m = start_manifest("ci", argv_tokens, 0);
    echo_data_args(m, f, art.lambda);
    m.args.emplace_back("alpha", precis::format_double(alpha));

    const auto& names = art.table.column_names;
    const std::string that_path = f.out_prefix + ".that.csv";
    precis::write_csv_matrix(that_path, art.desparsified.t_hat.as_matrix(), names);
    record_output(m, that_path);
    const std::string sigma_path = f.out_prefix + ".sigma.csv";
    precis::write_csv_matrix(sigma_path, var.sigma.as_matrix(), names);
    record_output(m, sigma_path);
    const std::string lower_path = f.out_prefix + ".lower.csv";
    precis::write_csv_matrix(lower_path, region.lower, names);
    record_output(m, lower_path);
    const std::string upper_path = f.out_prefix + ".upper.csv";
    precis::write_csv_matrix(upper_path, region.upper, names);
    record_output(m, upper_path);

    finish_manifest(m, f.out_prefix);
    return 0;
}

int run_select_cmd(const DataFlags& f, const std::optional<double>& nu,
                   const std::optional<double>& bonferroni_alpha,
                   const std::vector<std::string>& argv_tokens) {
    if (nu.has_value() == bonferroni_alpha.has_value())
        throw precis::ConfigError("exactly one of --nu and --bonferroni is required");
    EstimateArtifacts art = run_estimate(f);
    const precis::VarianceEstimate var = precis::variance_gaussian(art.est);
    const std::size_t p = art.table.values.cols();
    const precis::EdgeSelection sel =
        nu ? precis::threshold_select(art.desparsified, var, art.n, p, *nu)
           : precis::bonferroni_select(art.desparsified, var, art.n, p, *bonferroni_alpha);

    precis::RunManifest m = start_manifest("select", argv_tokens, 0);
    echo_data_args(m, f, art.lambda);
    if (nu) m.args.emplace_back("nu", precis::format_double(*nu));
    else m.args.emplace_back("bonferroni", precis::format_double(*bonferroni_alpha));

    const std::string edges_path = f.out_prefix + ".edges.csv";
    write_text(edges_path, edge_csv(sel, art.desparsified.t_hat.as_matrix(),
                                    art.table.column_names));
    record_output(m, edges_path);

    finish_manifest(m, f.out_prefix);
    std::cout << "edges=" << sel.selected.size() << "\n";
    return 0;
}

int run_coverage_cmd(const SimFlags& f, const std::vector<std::string>& argv_tokens) {
    const precis::ExperimentConfig cfg = make_config(f);
    const precis::CoverageReport report = precis::run_coverage(cfg);

    precis::RunManifest m = start_manifest("simulate-coverage", argv_tokens, cfg.master_seed);
    echo_sim_args(m, f, cfg, true);

    json j = model_json(cfg);
    j["alpha"] = cfg.alpha;
    j["variance"] = f.variance;
    j["lambda"] = report.lambda_used;
    j["s0_size"] = report.s0_size;
    j["avgcov_s0"] = report.avgcov_s0;
    j["avglen_s0"] = report.avglen_s0;
    j["avgcov_s0c"] = report.avgcov_s0c;
    j["avglen_s0c"] = report.avglen_s0c;
    const std::string report_path = f.out_prefix + ".report.json";
    write_json(report_path, j);
    record_output(m, report_path);

    const std::string cov_path = f.out_prefix + ".coverage.csv";
    precis::write_csv_matrix(cov_path, report.coverage);
    record_output(m, cov_path);
    const std::string len_path = f.out_prefix + ".length.csv";
    precis::write_csv_matrix(len_path, report.length);
    record_output(m, len_path);

    finish_manifest(m, f.out_prefix);
    std::cout << "avgcov_s0=" << report.avgcov_s0 << " avglen_s0=" << report.avglen_s0
              << " avgcov_s0c=" << report.avgcov_s0c << " avglen_s0c=" << report.avglen_s0c
              << "\n";
    return 0;
}

int run_selection_cmd(const SimFlags& f, double nu, const std::vector<std::string>& argv_tokens) {
    precis::ExperimentConfig cfg = make_config(f);
    cfg.selection_nu = nu;
    const precis::SelectionReport report = precis::run_selection(cfg);

    precis::RunManifest m = start_manifest("simulate-selection", argv_tokens, cfg.master_seed);
    echo_sim_args(m, f, cfg, false);
    m.args.emplace_back("nu", precis::format_double(nu));

    json j = model_json(cfg);
    j["nu"] = nu;
    j["lambda"] = report.lambda_used;
    j["s0_size"] = report.s0_size;
    j["mean_tp"] = report.mean_tp;
    j["mean_fp"] = report.mean_fp;
    j["tp_rate"] = report.tp_rate;
    j["fp_rate"] = report.fp_rate;
    const std::string report_path = f.out_prefix + ".report.json";
    write_json(report_path, j);
    record_output(m, report_path);

    std::string reps = "rep,tp,fp\n";
    for (std::size_t r = 0; r < report.per_rep_tp.size(); ++r)
        reps += std::to_string(r + 1) + "," + std::to_string(report.per_rep_tp[r]) + "," +
                std::to_string(report.per_rep_fp[r]) + "\n";
    const std::string reps_path = f.out_prefix + ".reps.csv";
    write_text(reps_path, reps);
    record_output(m, reps_path);

    finish_manifest(m, f.out_prefix);
    std::cout << "mean_tp=" << report.mean_tp << " mean_fp=" << report.mean_fp << "\n";
    return 0;
}

int run_histogram_cmd(const SimFlags& f, const std::string& entries_flag,
                      const std::vector<std::string>& argv_tokens) {
    const precis::ExperimentConfig cfg = make_config(f);

    std::vector<std::pair<std::size_t, std::size_t>> entries;
    for (const auto& part : split_on(entries_flag, ';')) {
        const auto ij = split_on(part, ',');
        if (ij.size() != 2) throw precis::ConfigError("--entries expects pairs like 1,2;1,3");
        const std::size_t i = precis::parse_size(ij[0], "--entries");
        const std::size_t j = precis::parse_size(ij[1], "--entries");
        if (i < 1 || j < 1) throw precis::ConfigError("--entries indices are 1-based");
        entries.emplace_back(i - 1, j - 1);
    }

    const auto stats = precis::collect_standardized_stats(cfg, entries);

    precis::RunManifest m = start_manifest("histogram", argv_tokens, cfg.master_seed);
    echo_sim_args(m, f, cfg, true);
    m.args.emplace_back("entries", entries_flag);

    std::string csv;
    for (std::size_t e = 0; e < entries.size(); ++e) {
        if (e) csv += ',';
        csv += "stat_" + std::to_string(entries[e].first + 1) + "_" +
               std::to_string(entries[e].second + 1);
    }
    csv += '\n';
    for (std::size_t r = 0; r < cfg.replications; ++r) {
        for (std::size_t e = 0; e < entries.size(); ++e) {
            if (e) csv += ',';
            csv += precis::format_double(stats[e][r]);
        }
        csv += '\n';
    }
    const std::string samples_path = f.out_prefix + ".samples.csv";
    write_text(samples_path, csv);
    record_output(m, samples_path);

    json j = model_json(cfg);
    json ks_list = json::array();
    for (std::size_t e = 0; e < entries.size(); ++e) {
        json item;
        item["i"] = entries[e].first + 1;
        item["j"] = entries[e].second + 1;
        item["ks"] = precis::ks_distance(stats[e]);
        ks_list.push_back(item);
    }
    j["ks"] = ks_list;
    const std::string ks_path = f.out_prefix + ".ks.json";
    write_json(ks_path, j);
    record_output(m, ks_path);

    finish_manifest(m, f.out_prefix);
    return 0;
}

int run_edges_cmd(const DataFlags& f, double alpha, std::size_t top_k, std::size_t split_count,
                  bool no_center, std::uint64_t seed,
                  const std::vector<std::string>& argv_tokens) {
    if (f.delimiter.size() != 1)
        throw precis::ConfigError("--delimiter must be a single character");
    precis::DatasetOptions opts;
    opts.path = f.input;
    opts.delimiter = f.delimiter[0];
    opts.has_header = f.header;
    opts.top_k_by_variance = top_k;
    opts.variance_split_count = split_count;
    opts.center = !no_center;

    const precis::CsvTable table = precis::load_csv(opts);
    precis::SeededRng rng(seed);
    const precis::PipelineResult result =
        precis::realdata_pipeline(table, opts, alpha, rng, resolve_threads(f.threads));

    precis::RunManifest m = start_manifest("edges", argv_tokens, seed);
    m.args.emplace_back("input", f.input);
    m.args.emplace_back("header", f.header ? "1" : "0");
    m.args.emplace_back("delimiter", f.delimiter);
    m.args.emplace_back("top-k", std::to_string(top_k));
    m.args.emplace_back("split-count", std::to_string(split_count));
    m.args.emplace_back("center", opts.center ? "1" : "0");
    m.args.emplace_back("alpha", precis::format_double(alpha));
    m.args.emplace_back("lambda_used", precis::format_double(result.lambda));
    m.args.emplace_back("out-prefix", f.out_prefix);

    const std::string edges_path = f.out_prefix + ".edges.csv";
    write_text(edges_path, edge_csv(result.edges, result.estimate.t_hat.as_matrix(),
                                    result.kept_names));
    record_output(m, edges_path);

    finish_manifest(m, f.out_prefix);
    std::cout << "kept=" << result.kept_columns.size() << " n_used=" << result.n_used
              << " edges=" << result.edges.selected.size() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Precision matrix estimation via nodewise regressions"};
    app.set_version_flag("--version", precis::kVersion);
    app.require_subcommand(1);

    std::vector<std::string> argv_tokens(argv + 1, argv + argc);

    SimFlags sim;
    DataFlags data;
    double ci_alpha = 0.05;
    std::optional<double> select_nu, select_bonferroni;
    std::string entries_flag = "1,1;1,2;1,3";
    double sel_nu = 1.0;
    double edges_alpha = 0.05;
    std::size_t edges_top_k = 500, edges_split = 10;
    bool edges_no_center = false;
    std::uint64_t edges_seed = 0;

    CLI::App* estimate = app.add_subcommand("estimate", "Estimate the precision matrix from CSV data");
    add_data_options(estimate, data);

    CLI::App* ci = app.add_subcommand("ci", "Entrywise confidence intervals from CSV data");
    add_data_options(ci, data);
    ci->add_option("--alpha", ci_alpha, "Two-sided miscoverage level");

    CLI::App* select = app.add_subcommand("select", "Threshold the de-biased estimate into edges");
    add_data_options(select, data);
    select->add_option("--nu", select_nu, "Threshold level nu");
    select->add_option("--bonferroni", select_bonferroni, "Bonferroni alpha");

    CLI::App* cov = app.add_subcommand("simulate-coverage", "Monte Carlo interval coverage study");
    add_sim_options(cov, sim, true);

    CLI::App* sel = app.add_subcommand("simulate-selection", "Monte Carlo edge recovery study");
    add_sim_options(sel, sim, false);
    sel->add_option("--nu", sel_nu, "Threshold level nu");

    CLI::App* hist = app.add_subcommand("histogram", "Standardized statistics for chosen entries");
    add_sim_options(hist, sim, true);
    hist->add_option("--entries", entries_flag, "1-based entry list, e.g. 1,1;1,2;1,3");

    CLI::App* edges = app.add_subcommand("edges", "Real-data edge selection pipeline");
    add_data_options(edges, data);
    edges->add_option("--alpha", edges_alpha, "Bonferroni alpha");
    edges->add_option("--top-k", edges_top_k, "Keep this many highest-variance columns");
    edges->add_option("--split-count", edges_split, "Rows reserved for scale estimation");
    edges->add_flag("--no-center", edges_no_center, "Skip column centering");
    edges->add_option("--seed", edges_seed, "Seed for the row split");

    try {
        app.parse(argc, argv);
        if (estimate->parsed()) return run_estimate_cmd(data, argv_tokens);
        if (ci->parsed()) return run_ci_cmd(data, ci_alpha, argv_tokens);
        if (select->parsed()) return run_select_cmd(data, select_nu, select_bonferroni, argv_tokens);
        if (cov->parsed()) return run_coverage_cmd(sim, argv_tokens);
        if (sel->parsed()) return run_selection_cmd(sim, sel_nu, argv_tokens);
        if (hist->parsed()) return run_histogram_cmd(sim, entries_flag, argv_tokens);
        if (edges->parsed())
            return run_edges_cmd(data, edges_alpha, edges_top_k, edges_split, edges_no_center,
                                 edges_seed, argv_tokens);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const precis::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const precis::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
