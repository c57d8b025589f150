#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "precis/matrix.hpp"

namespace precis {

// Numeric table plus optional header names (empty when the file had none).
struct CsvTable {
    Matrix values;
    std::vector<std::string> column_names;
};

struct DatasetOptions {
    std::string path;
    char delimiter = ',';
    bool has_header = false;
    std::size_t top_k_by_variance = 500; // pipeline keeps this many columns
    std::size_t variance_split_count = 10;
    bool center = true;
};

// Parses a rectangular numeric CSV. Ragged rows, non-numeric cells, and an
// empty file raise DataError with 1-based line (and column) positions.
// Handles trailing \r and a missing final newline.
CsvTable load_csv(const DatasetOptions& opts);

// Writes one row per line, fields in shortest round-trip decimal form,
// comma-separated, '\n' line endings, trailing newline. A nonempty
// column_names vector becomes the header row.
void write_csv_matrix(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& column_names = {});

} // namespace precis
