#include "precis/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace precis {

SymMatrix::SymMatrix(std::size_t dim) {
    if (dim < 1) throw std::invalid_argument("SymMatrix: dim must be >= 1");
    m_ = Matrix(dim, dim, 0.0);
}

SymMatrix SymMatrix::from_matrix(const Matrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("SymMatrix: matrix is not square");
    if (m.rows() < 1) throw std::invalid_argument("SymMatrix: dim must be >= 1");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i))
                throw std::invalid_argument("SymMatrix: entries (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") and transpose differ");
    SymMatrix s;
    s.m_ = m;
    return s;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols(), 0.0);
    // i-k-j loop order: both B and C are walked along contiguous rows.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row_ptr(i);
        const double* ai = a.row_ptr(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = ai[k];
            const double* bk = b.row_ptr(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimensions differ");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row_ptr(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += ai[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double max_abs(const Matrix& m) {
    double v = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) v = std::max(v, std::fabs(m.data()[k]));
    return v;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shapes differ");
    double v = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        v = std::max(v, std::fabs(a.data()[k] - b.data()[k]));
    return v;
}

Matrix identity(std::size_t p) {
    Matrix m(p, p, 0.0);
    for (std::size_t i = 0; i < p; ++i) m(i, i) = 1.0;
    return m;
}

} // namespace precis
