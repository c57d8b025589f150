#pragma once

#include <cstddef>
#include <vector>

namespace precis {

// Dense row-major matrix of doubles. Row-major keeps observation rows
// contiguous, which is the dominant access pattern in the samplers and
// covariance accumulation.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
    const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

// Symmetric matrix wrapper. Construction from a full matrix verifies exact
// (bitwise) symmetry; mutation goes through set() which writes both triangles.
class SymMatrix {
public:
    // Empty placeholder (dim 0); useful as a not-yet-computed slot.
    SymMatrix() = default;

    explicit SymMatrix(std::size_t dim);

    // Throws std::invalid_argument unless m is square, dim >= 1 and
    // m(i,j) == m(j,i) exactly for all i, j.
    static SymMatrix from_matrix(const Matrix& m);

    std::size_t dim() const { return m_.rows(); }

    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    void set(std::size_t i, std::size_t j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    const Matrix& as_matrix() const { return m_; }

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    Matrix m_;
};

// Lower-triangular Cholesky factor; lower * lower^T reconstructs the source.
struct SpdFactor {
    Matrix lower;
    std::size_t source_dim = 0;
};

// C = A * B.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

// y = A * x.
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

// Largest absolute entry; 0 for an empty matrix.
double max_abs(const Matrix& m);

// Largest absolute entrywise difference; matrices must share a shape.
double max_abs_diff(const Matrix& a, const Matrix& b);

Matrix identity(std::size_t p);

} // namespace precis
