#pragma once

#include <cstddef>
#include <vector>

#include "precis/matrix.hpp"

namespace precis {

// Standard normal CDF, absolute error below 1e-12. Throws std::domain_error
// on non-finite input.
double std_normal_cdf(double x);

double std_normal_pdf(double x);

// Inverse of std_normal_cdf for q in (0,1); the CDF at the result matches q
// within 1e-10 (rational initial guess plus Halley refinement).
double std_normal_quantile(double q);

// Regularized incomplete beta function I_x(a,b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Student-t CDF with df degrees of freedom, via the incomplete beta function.
double student_t_cdf(double x, std::size_t df);

// Student-t quantile: Cornish-Fisher start, then Newton on the CDF residual
// to 1e-12 (bisection fallback keeps the iterate inside a bracket).
double student_t_quantile(double q, std::size_t df);

// Cholesky factorization of a symmetric positive definite matrix. A pivot
// at or below 1e-12 * (max diagonal) raises NotPositiveDefiniteError naming
// the pivot index.
SpdFactor cholesky(const SymMatrix& a);

// Solves (L L^T) x = b in place given the factor from cholesky().
void cholesky_solve_in_place(const SpdFactor& f, std::vector<double>& b);

// Inverse of an SPD matrix by Cholesky solves against identity columns;
// the result is symmetrized exactly.
SymMatrix spd_inverse(const SymMatrix& a);

struct EigenDecomposition {
    std::vector<double> values; // ascending
    Matrix vectors;             // orthonormal columns, vectors.col(k) <-> values[k]
};

// Full symmetric eigendecomposition (cyclic Jacobi). Eigenvalues ascending,
// eigenvectors orthonormal within 1e-10.
EigenDecomposition sym_eigen(const SymMatrix& a);

// Symmetric PSD square root via eigendecomposition. Eigenvalues below
// -1e-10 * ||a|| raise std::domain_error; tiny negatives are clamped to 0.
SymMatrix sym_sqrt(const SymMatrix& a);

// X^T X / n with no mean-centering (rows are modeled as mean zero).
SymMatrix sample_covariance(const Matrix& x);

} // namespace precis
