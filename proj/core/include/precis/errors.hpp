#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace precis {

// Invalid configuration supplied by the caller (bad tuning setup, infeasible
// options). Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed or unusable input data (CSV parse failures, degenerate columns in
// real data). Maps to CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure during computation. Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Cholesky pivot failure; carries the index of the offending pivot.
class NotPositiveDefiniteError : public NumericError {
public:
    NotPositiveDefiniteError(std::size_t pivot_index, const std::string& msg)
        : NumericError(msg), pivot_index_(pivot_index) {}
    std::size_t pivot_index() const { return pivot_index_; }

private:
    std::size_t pivot_index_;
};

// A nodewise regression whose residual variance collapsed; carries the column.
class DegenerateColumnError : public NumericError {
public:
    DegenerateColumnError(std::size_t column, const std::string& msg)
        : NumericError(msg), column_(column) {}
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

} // namespace precis
