#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tracelasso/linalg.hpp"

namespace tracelasso {

/// The matrix P defining the norm w -> ||P Diag(w)||_*.
///
/// Held either explicitly (k x p, unit-norm columns) or through its Gram
/// matrix G = P^T P (p x p, PSD, unit diagonal). In Gram form the symmetric
/// root G^{1/2} is computed once at construction and reused by every
/// evaluation.
class PenaltyMatrix {
public:
    enum class Form { explicit_matrix, gram };

    static PenaltyMatrix from_explicit(Matrix p);
    static PenaltyMatrix from_gram(Matrix g);

    Form form() const noexcept { return form_; }
    bool is_gram() const noexcept { return form_ == Form::gram; }

    /// Number of columns of P (the dimension of w).
    Eigen::Index dim() const noexcept { return matrix_.cols(); }

    /// P in explicit form, G in Gram form.
    const Matrix& matrix() const noexcept { return matrix_; }

    /// A matrix F with F^T F = P^T P: P itself, or G^{1/2}.
    const Matrix& factor() const noexcept { return factor_; }

    PenaltyMatrix to_gram() const;

private:
    PenaltyMatrix(Form form, Matrix matrix, Matrix factor)
        : form_(form), matrix_(std::move(matrix)), factor_(std::move(factor)) {}

    Form form_;
    Matrix matrix_;
    Matrix factor_;
};

/// Disjoint groups of 0-based indices covering {0, ..., p-1}.
class GroupPartition {
public:
    GroupPartition(std::vector<std::vector<Eigen::Index>> groups, Eigen::Index p);

    /// Contiguous groups of the given sizes.
    static GroupPartition contiguous(const std::vector<Eigen::Index>& sizes);

    const std::vector<std::vector<Eigen::Index>>& groups() const noexcept { return groups_; }
    Eigen::Index dim() const noexcept { return p_; }

private:
    std::vector<std::vector<Eigen::Index>> groups_;
    Eigen::Index p_;
};

double omega(const PenaltyMatrix& p, const Vector& w);

/// Evaluates through the Gram matrix P^T P instead of P itself.
double omega_gram_equivalent(const PenaltyMatrix& p, const Vector& w);

/// ||X' Diag(w)||_* where X' is X with unit-norm columns if `normalize`,
/// else X unchanged.
double trace_lasso(const Matrix& x, const Vector& w, bool normalize = false);

/// Rescales every column to unit l2 norm; a zero column is an error.
Matrix normalize_columns(const Matrix& x);

/// ||P Diag(u)||_op, an upper bound on the dual norm at u.
double dual_norm_upper(const PenaltyMatrix& p, const Vector& u);

/// Lower bound on the dual norm: the best ratio u^T v / omega(v) over the
/// signed canonical directions, u itself, and `trials` Gaussian directions.
double dual_norm_lower_estimate(const PenaltyMatrix& p, const Vector& u, std::size_t trials,
                                std::uint64_t seed = 0);

/// P^GL with entries 1/sqrt(|S_k|) when i and j share group S_k.
PenaltyMatrix group_lasso_matrix(const GroupPartition& partition);

/// Sum over groups of ||w_S||_2.
double group_lasso_norm(const GroupPartition& partition, const Vector& w);

/// Gram matrices whose unit balls illustrate the family in three dimensions.
namespace gram_presets {
Matrix correlated_pair();     // strong 1-2 coupling, weak coupling to 3
Matrix chain();               // Toeplitz-like 0.7 / 0.49 decay
Matrix perfect_block();       // 1 and 2 identical, 3 orthogonal
}  // namespace gram_presets

using BallPoint = std::array<double, 3>;

/// Points w / omega(w) for directions on a latitude-longitude sphere grid
/// with `resolution` latitudes (including both poles, which sit on the w1
/// axis) and 2 * resolution longitudes.
std::vector<BallPoint> unit_ball_slice(const PenaltyMatrix& gram, std::size_t resolution);

/// CSV with header `w1,w2,w3`.
void write_ball_csv(std::ostream& out, const std::vector<BallPoint>& points);

}  // namespace tracelasso
