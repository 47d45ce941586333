#include "tracelasso/linalg.hpp"

#include <cmath>
#include <string>

#include "tracelasso/errors.hpp"

namespace tracelasso::linalg {

void require_finite(const Matrix& m, const char* what) {
    if (m.rows() < 1 || m.cols() < 1) {
        throw InvalidInput(std::string(what) + ": empty matrix");
    }
    if (!m.allFinite()) {
        throw InvalidInput(std::string(what) + ": non-finite entries");
    }
}

SymEigen sym_eigen(const Matrix& a) {
    require_finite(a, "sym_eigen");
    if (a.rows() != a.cols()) {
        throw InvalidInput("sym_eigen: matrix is not square");
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InvalidInput("sym_eigen: matrix is not symmetric");
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw InvalidInput("sym_eigen: eigensolver failed");
    }
    // Eigen sorts ascending.
    return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

Svd svd(const Matrix& m) {
    require_finite(m, "svd");
    Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

FullSvd full_svd(const Matrix& m) {
    require_finite(m, "full_svd");
    Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

CgResult cg_solve(const LinearOperator& apply, const Vector& b, const Vector& x0,
                  double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) {
        throw InvalidInput("cg_solve: tolerance must be positive");
    }
    if (x0.size() != b.size()) {
        throw InvalidInput("cg_solve: initial guess has the wrong length");
    }
    if (max_iter == 0) {
        max_iter = static_cast<std::size_t>(b.size());
    }

    CgResult out;
    const double b_norm = b.norm();
    if (b_norm == 0.0) {
        out.x = Vector::Zero(b.size());
        return out;
    }

    out.x = x0;
    Vector q(b.size());
    apply(out.x, q);
    Vector r = b - q;
    double rr = r.squaredNorm();
    const double target = tol * b_norm;
    if (std::sqrt(rr) <= target) {
        out.relative_residual = std::sqrt(rr) / b_norm;
        return out;
    }

    Vector d = r;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        apply(d, q);
        const double curvature = d.dot(q);
        if (!(curvature > 0.0)) {
            throw ConvergenceError("cg_solve: operator is not positive definite", it,
                                   std::sqrt(rr) / b_norm);
        }
        const double alpha = rr / curvature;
        out.x.noalias() += alpha * d;
        r.noalias() -= alpha * q;
        const double rr_next = r.squaredNorm();
        out.iterations = it;
        if (std::sqrt(rr_next) <= target) {
            out.relative_residual = std::sqrt(rr_next) / b_norm;
            return out;
        }
        d = r + (rr_next / rr) * d;
        rr = rr_next;
    }
    throw ConvergenceError("cg_solve: no convergence after " + std::to_string(max_iter) +
                               " iterations (relative residual " +
                               std::to_string(std::sqrt(rr) / b_norm) + ")",
                           max_iter, std::sqrt(rr) / b_norm);
}

Matrix psd_inverse_sqrt(const Matrix& a, double mu) {
    if (!(mu > 0.0)) {
        throw InvalidInput("psd_inverse_sqrt: mu must be positive");
    }
    return psd_inverse_sqrt(sym_eigen(a), mu);
}

Matrix psd_inverse_sqrt(const SymEigen& eig, double mu) {
    if (!(mu > 0.0)) {
        throw InvalidInput("psd_inverse_sqrt: mu must be positive");
    }
    const double op = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
    if (eig.values.minCoeff() < -1e-8 * op) {
        throw InvalidInput("psd_inverse_sqrt: matrix is not positive semidefinite");
    }
    const Vector scale =
        (eig.values.cwiseMax(0.0).array() + mu).sqrt().inverse().matrix();
    return eig.vectors * scale.asDiagonal() * eig.vectors.transpose();
}

Matrix psd_sqrt(const Matrix& a, double clip_tol, double rank_tol) {
    const SymEigen eig = sym_eigen(a);
    const double floor = -clip_tol * std::max(1.0, std::abs(eig.values(0)));
    if (eig.values.minCoeff() < floor) {
        throw InvalidInput("psd_sqrt: matrix has a negative eigenvalue " +
                           std::to_string(eig.values.minCoeff()));
    }
    const double cutoff = rank_tol * std::max(eig.values(0), 0.0);
    const Vector root =
        (eig.values.array() > cutoff).select(eig.values.cwiseMax(0.0).cwiseSqrt(), 0.0);
    return eig.vectors * root.asDiagonal() * eig.vectors.transpose();
}

double operator_norm(const Matrix& m) { return svd(m).singular(0); }

double trace_norm(const Matrix& m) { return svd(m).singular.sum(); }

}  // namespace tracelasso::linalg
