#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace tracelasso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Eigendecomposition of a symmetric matrix, eigenvalues in descending order.
struct SymEigen {
    Vector values;
    Matrix vectors;  // columns are orthonormal eigenvectors
};

/// Thin SVD: left is n x r, right is p x r with r = min(n, p). Zero singular
/// values are kept so the rank-deficient parts stay addressable.
struct Svd {
    Matrix left;
    Vector singular;
    Matrix right;
};

/// SVD with completed orthonormal bases (left n x n, right p x p).
struct FullSvd {
    Matrix left;
    Vector singular;  // min(n, p) values, descending
    Matrix right;
};

/// y = A x for a symmetric positive-definite A. `out` is presized by the caller.
using LinearOperator = std::function<void(const Vector& in, Vector& out)>;

struct CgResult {
    Vector x;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Throws InvalidInput on empty or non-finite matrices.
void require_finite(const Matrix& m, const char* what);

SymEigen sym_eigen(const Matrix& a);

Svd svd(const Matrix& m);
FullSvd full_svd(const Matrix& m);

/// Conjugate gradient for apply(x) = b, warm-started at x0.
///
/// Stops once ||apply(x) - b|| <= tol * ||b||. max_iter == 0 means b.size().
/// Throws ConvergenceError carrying the final relative residual when the cap
/// is reached first.
CgResult cg_solve(const LinearOperator& apply, const Vector& b, const Vector& x0,
                  double tol = 1e-10, std::size_t max_iter = 0);

/// U Diag(1 / sqrt(s_k + mu)) U^T for the eigendecomposition U Diag(s) U^T of A.
Matrix psd_inverse_sqrt(const Matrix& a, double mu);

/// Same, reusing an eigendecomposition the caller already holds.
Matrix psd_inverse_sqrt(const SymEigen& eig, double mu);

/// Symmetric square root of a PSD matrix. Eigenvalues in [-clip_tol, 0) are
/// treated as roundoff and clipped; anything more negative is rejected.
/// Eigenvalues at or below rank_tol times the largest one are set to zero.
Matrix psd_sqrt(const Matrix& a, double clip_tol = 1e-10, double rank_tol = 0.0);

double operator_norm(const Matrix& m);
double trace_norm(const Matrix& m);

}  // namespace linalg
}  // namespace tracelasso
