#include "precis/csv.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "precis/errors.hpp"
#include "precis/format.hpp"

namespace precis {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t line,
                  std::size_t column) {
    try {
        return parse_double(cell, "cell");
    } catch (const ConfigError&) {
        throw DataError(path + ":" + std::to_string(line) + ": column " + std::to_string(column) +
                        ": cannot parse '" + cell + "' as a number");
    }
}

} // namespace

CsvTable load_csv(const DatasetOptions& opts) {
    std::ifstream in(opts.path);
    if (!in) throw DataError(opts.path + ": cannot open file");

    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && rows.empty() && names.empty()) continue; // leading blank lines
        auto fields = split_fields(line, opts.delimiter);

        if (opts.has_header && names.empty() && rows.empty()) {
            names = std::move(fields);
            width = names.size();
            continue;
        }

        if (width == 0) width = fields.size();
        if (fields.size() != width)
            throw DataError(opts.path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(width) + " fields, found " +
                            std::to_string(fields.size()));

        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c)
            row[c] = parse_cell(fields[c], opts.path, line_no, c + 1);
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw DataError(opts.path + ": no data rows");

    CsvTable table;
    table.values = Matrix(rows.size(), width);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c) table.values(r, c) = rows[r][c];
    table.column_names = std::move(names);
    return table;
}

void write_csv_matrix(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& column_names) {
    if (!column_names.empty() && column_names.size() != m.cols())
        throw ConfigError("write_csv_matrix: header width does not match matrix");
    std::ofstream out(path, std::ios::binary); // binary: keep \n endings everywhere
    if (!out) throw DataError(path + ": cannot open file for writing");

    std::string buffer;
    if (!column_names.empty()) {
        for (std::size_t c = 0; c < column_names.size(); ++c) {
            if (c) buffer += ',';
            buffer += column_names[c];
        }
        buffer += '\n';
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) buffer += ',';
            buffer += format_double(m(r, c));
        }
        buffer += '\n';
    }
    out << buffer;
    if (!out) throw DataError(path + ": write failed");
}

} // namespace precis
