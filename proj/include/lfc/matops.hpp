#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "lfc/matrix.hpp"

namespace lfc {

/// Eigenvalues of a real matrix together with the threshold used to
/// classify an eigenvalue as zero.
struct Spectrum {
    std::vector<std::complex<double>> values;  // one per dimension, unordered
    double tolerance = 0.0;

    /// Number of eigenvalues with |lambda| <= tolerance.
    std::size_t zero_multiplicity() const;
};

/// Solve a x = b by LU with partial pivoting. Throws SingularMatrixError
/// when a pivot underflows 1e-12 relative to the matrix scale.
Vector solve_linear(const Matrix& a, const Vector& b);

/// Columnwise solve a X = b (shares one factorization).
Matrix solve_matrix(const Matrix& a, const Matrix& b);

/// Inverse via solves against identity columns. When pivot_ratio is given
/// it receives min|pivot| / max|pivot| as a cheap conditioning indicator.
Matrix invert(const Matrix& a, double* pivot_ratio = nullptr);

/// All eigenvalues of a general real square matrix (dimension <= 50) via
/// Householder reduction to Hessenberg form followed by Francis
/// double-shift QR iteration. Throws ConvergenceError if the iteration
/// cap (100 * n sweeps) is exceeded.
Spectrum eigenvalues(const Matrix& a);

/// Eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi
/// rotation sweeps. Rejects input that is not symmetric within 1e-10
/// relative to its scale.
std::vector<double> symmetric_eigenvalues(const Matrix& a);

/// Cholesky test: true iff the factorization completes with every pivot
/// above 1e-12. Rejects asymmetric input.
bool is_positive_definite(const Matrix& a);

/// Largest singular value, computed as sqrt of the top eigenvalue of
/// A^T A (or A A^T, whichever is smaller).
double spectral_norm(const Matrix& a);

/// Kronecker product, dimensions (ra*rb) x (ca*cb).
Matrix kron(const Matrix& a, const Matrix& b);

/// Solve P H + H^T P = I for symmetric positive definite P by Kronecker
/// vectorization: (H^T (x) I + I (x) H^T) vec(P) = vec(I), then
/// symmetrize P <- (P + P^T)/2. Requires H positive stable (every
/// eigenvalue real part > 1e-10); throws NotPositiveStableError
/// otherwise.
Matrix solve_lyapunov(const Matrix& h);

} // namespace lfc
