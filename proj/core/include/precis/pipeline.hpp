#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "precis/csv.hpp"
#include "precis/desparsify.hpp"
#include "precis/rng.hpp"

namespace precis {

// Real-data edge selection: keep the top_k highest-variance columns, estimate
// per-column scale on a random subset of rows, scale and center the remaining
// rows, then run the nodewise pipeline with the Bonferroni threshold.
struct PipelineResult {
    EdgeSelection edges;
    std::vector<std::string> kept_names;   // per kept column, original order
    std::vector<std::size_t> kept_columns; // original column indices, ascending
    std::vector<std::size_t> split_rows;   // rows used only for scale estimation
    DesparsifiedEstimate estimate;
    VarianceEstimate variance;
    std::size_t n_used = 0; // rows that entered the regressions
    double lambda = 0.0;
    double alpha = 0.0;
};

// Draws the split rows from rng (a partial Fisher-Yates over row indices).
PipelineResult realdata_pipeline(const CsvTable& table, const DatasetOptions& opts, double alpha,
                                 SeededRng& rng, std::size_t threads = 1);

// Deterministic core with the split rows supplied by the caller; indices must
// be unique and in range. Used by the wrapper above and by replay paths.
PipelineResult realdata_pipeline_with_split(const CsvTable& table, const DatasetOptions& opts,
                                            double alpha, std::vector<std::size_t> split_rows,
                                            std::size_t threads = 1);

} // namespace precis
