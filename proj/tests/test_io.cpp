#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "doctest.h"
#include "precis/csv.hpp"
#include "precis/errors.hpp"
#include "precis/manifest.hpp"
#include "precis/pipeline.hpp"
#include "precis/rng.hpp"

using namespace precis;
namespace fs = std::filesystem;

namespace {

// Per-process scratch directory, removed when the suite object dies.
struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() /
              ("precis_io_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { std::error_code ec; fs::remove_all(dir, ec); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

const Scratch& scratch() {
    static Scratch s;
    return s;
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("csv numeric parse with and without header") {
    const std::string path = scratch().file("basic.csv");
    write_text_file(path, "a,b,c\n1,2.5,-3\n4,5e-1,6\n");

    DatasetOptions opts;
    opts.path = path;
    opts.has_header = true;
    const CsvTable t = load_csv(opts);
    REQUIRE(t.values.rows() == 2);
    REQUIRE(t.values.cols() == 3);
    CHECK(t.column_names == std::vector<std::string>{"a", "b", "c"});
    CHECK(t.values(0, 1) == 2.5);
    CHECK(t.values(1, 1) == 0.5);
    CHECK(t.values(0, 2) == -3.0);

    opts.has_header = false;
    const std::string path2 = scratch().file("noheader.csv");
    write_text_file(path2, "1,2\n3,4\n");
    opts.path = path2;
    const CsvTable t2 = load_csv(opts);
    CHECK(t2.column_names.empty());
    CHECK(t2.values(1, 0) == 3.0);
}

TEST_CASE("csv tolerates crlf endings and a missing final newline") {
    const std::string path = scratch().file("crlf.csv");
    write_text_file(path, "1,2\r\n3,4\r\n5,6");
    DatasetOptions opts;
    opts.path = path;
    const CsvTable t = load_csv(opts);
    REQUIRE(t.values.rows() == 3);
    CHECK(t.values(2, 1) == 6.0);
}

TEST_CASE("csv custom delimiter") {
    const std::string path = scratch().file("semi.csv");
    write_text_file(path, "1;2\n3;4\n");
    DatasetOptions opts;
    opts.path = path;
    opts.delimiter = ';';
    const CsvTable t = load_csv(opts);
    CHECK(t.values(1, 1) == 4.0);
}

TEST_CASE("csv errors carry 1-based positions") {
    DatasetOptions opts;

    const std::string ragged = scratch().file("ragged.csv");
    write_text_file(ragged, "1,2\n3,4\n5\n");
    opts.path = ragged;
    try {
        (void)load_csv(opts);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }

    const std::string bad_cell = scratch().file("badcell.csv");
    write_text_file(bad_cell, "1,2\n3,oops\n");
    opts.path = bad_cell;
    CHECK_THROWS_AS((void)load_csv(opts), DataError);

    const std::string empty = scratch().file("empty.csv");
    write_text_file(empty, "");
    opts.path = empty;
    CHECK_THROWS_AS((void)load_csv(opts), DataError);

    opts.path = scratch().file("does_not_exist.csv");
    CHECK_THROWS_AS((void)load_csv(opts), DataError);
}

TEST_CASE("matrix csv write round-trips bitwise") {
    Matrix m(2, 3);
    m(0, 0) = 1.0 / 3.0;
    m(0, 1) = -2.5e-17;
    m(0, 2) = 3.0;
    m(1, 0) = 0.1 + 0.2;  // 0.30000000000000004 round-trips exactly
    m(1, 1) = 1e300;
    m(1, 2) = -0.0;

    const std::string path = scratch().file("roundtrip.csv");
    write_csv_matrix(path, m, {"x", "y", "z"});

    DatasetOptions opts;
    opts.path = path;
    opts.has_header = true;
    const CsvTable back = load_csv(opts);
    CHECK(back.column_names == std::vector<std::string>{"x", "y", "z"});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(back.values(i, j) == m(i, j));

    // same write twice gives identical bytes
    const std::string path2 = scratch().file("roundtrip2.csv");
    write_csv_matrix(path2, m, {"x", "y", "z"});
    CHECK(read_text_file(path) == read_text_file(path2));
    const std::string body = read_text_file(path);
    CHECK(body.back() == '\n');
    CHECK(body.find("\r") == std::string::npos);
}

TEST_CASE("manifest format round-trips every field") {
    RunManifest m;
    m.command = "simulate-coverage";
    m.argv = {"simulate-coverage", "--p", "100", "--model", "1,0.5,0.4",
              "--out-prefix", "runs/t1 v2"};
    m.args = {{"p", "100"}, {"model", "1,0.5,0.4"}, {"out-prefix", "runs/t1 v2"}};
    m.master_seed = 12345;
    m.version = "0.1.0";
    m.wall_clock_utc = "2026-08-17T12:00:00Z";
    m.outputs = {"runs/t1 v2.report.json", "runs/t1 v2.coverage.csv"};

    const std::string text = format_manifest(m);
    CHECK(text.rfind("precis-manifest-v1\n", 0) == 0);
    const RunManifest back = parse_manifest(text);
    CHECK(back.command == m.command);
    CHECK(back.argv == m.argv);
    CHECK(back.args == m.args);
    CHECK(back.master_seed == m.master_seed);
    CHECK(back.version == m.version);
    CHECK(back.wall_clock_utc == m.wall_clock_utc);
    CHECK(back.outputs == m.outputs);
}

TEST_CASE("manifest save and load through a file") {
    RunManifest m;
    m.command = "estimate";
    m.argv = {"estimate", "--input", "x.csv", "--out-prefix", "out"};
    m.master_seed = 0;
    m.version = "0.1.0";
    m.wall_clock_utc = "2026-08-17T00:00:00Z";
    const std::string path = scratch().file("run.manifest.txt");
    save_manifest(path, m);
    const RunManifest back = load_manifest(path);
    CHECK(back.command == "estimate");
    CHECK(back.argv == m.argv);
}

TEST_CASE("malformed manifests are rejected") {
    CHECK_THROWS_AS((void)parse_manifest("not-a-manifest\ncommand = x\n"), DataError);
    CHECK_THROWS_AS((void)parse_manifest("precis-manifest-v1\nbogus line without equals\n"),
                    DataError);
    CHECK_THROWS_AS((void)load_manifest(scratch().file("missing.manifest.txt")), DataError);
}

namespace {

// Deterministic synthetic table: 60 rows, 8 columns whose scales quadruple
// in variance per column, so the ranking survives the 10-row scale split.
CsvTable pipeline_table() {
    CsvTable t;
    t.values = Matrix(60, 8);
    SeededRng rng(2024);
    for (std::size_t i = 0; i < 60; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            t.values(i, j) = std::pow(2.0, static_cast<double>(j)) * rng.next_normal();
    t.column_names = {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"};
    return t;
}

DatasetOptions pipeline_opts() {
    DatasetOptions opts;
    opts.top_k_by_variance = 5;
    opts.variance_split_count = 10;
    return opts;
}

} // namespace

TEST_CASE("realdata pipeline keeps the top variance columns") {
    const CsvTable t = pipeline_table();
    const DatasetOptions opts = pipeline_opts();
    SeededRng rng(7);
    const PipelineResult res = realdata_pipeline(t, opts, 0.05, rng, 1);

    REQUIRE(res.kept_columns.size() == 5);
    // scales rise with the column index, so the last five columns win
    CHECK(res.kept_columns == std::vector<std::size_t>{3, 4, 5, 6, 7});
    CHECK(res.kept_names == std::vector<std::string>{"c4", "c5", "c6", "c7", "c8"});
    CHECK(res.split_rows.size() == 10);
    CHECK(res.n_used == 50);
    CHECK(res.alpha == 0.05);
    CHECK(res.lambda > 0.0);
    CHECK(res.estimate.t_hat.dim() == 5);
    CHECK(res.variance.sigma.dim() == 5);
    for (const auto& [i, j] : res.edges.selected) {
        CHECK(i < 5);
        CHECK(j < 5);
        CHECK(i < j);
    }
    CHECK(res.edges.rule.kind == "bonferroni");
}

TEST_CASE("pipeline split rows are unique and reproducible per seed") {
    const CsvTable t = pipeline_table();
    const DatasetOptions opts = pipeline_opts();
    SeededRng a(7), b(7), c(8);
    const PipelineResult ra = realdata_pipeline(t, opts, 0.05, a, 1);
    const PipelineResult rb = realdata_pipeline(t, opts, 0.05, b, 1);
    const PipelineResult rc = realdata_pipeline(t, opts, 0.05, c, 1);

    CHECK(ra.split_rows == rb.split_rows);
    CHECK(ra.estimate.t_hat == rb.estimate.t_hat);
    CHECK(ra.edges.selected == rb.edges.selected);
    CHECK(ra.split_rows != rc.split_rows);

    std::vector<std::size_t> sorted = ra.split_rows;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    for (std::size_t r : sorted) CHECK(r < 60);
}

TEST_CASE("pipeline with explicit split is deterministic and thread-invariant") {
    const CsvTable t = pipeline_table();
    const DatasetOptions opts = pipeline_opts();
    const std::vector<std::size_t> split{0, 7, 14, 21, 28, 35, 42, 49, 56, 59};
    const PipelineResult seq = realdata_pipeline_with_split(t, opts, 0.05, split, 1);
    const PipelineResult par = realdata_pipeline_with_split(t, opts, 0.05, split, 4);
    CHECK(seq.estimate.t_hat == par.estimate.t_hat);
    CHECK(seq.variance.sigma == par.variance.sigma);
    CHECK(seq.edges.selected == par.edges.selected);
    CHECK(seq.split_rows == split);
}

TEST_CASE("pipeline rejects bad split indices") {
    const CsvTable t = pipeline_table();
    const DatasetOptions opts = pipeline_opts();
    CHECK_THROWS((void)realdata_pipeline_with_split(t, opts, 0.05, {0, 0, 1}, 1));
    CHECK_THROWS((void)realdata_pipeline_with_split(t, opts, 0.05, {60}, 1));
}
