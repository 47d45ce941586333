#pragma once

#include <iosfwd>
#include <vector>

#include "tracelasso/linalg.hpp"

namespace tracelasso {

/// Second-order expansion of ||M + Delta||_* split into its terms.
struct ExpansionResult {
    double zeroth = 0.0;  // ||M||_*
    double first = 0.0;   // tr(V U^T Delta)
    double second = 0.0;  // the two quadratic double sums
    double q_term = 0.0;  // ||Q||_*, the split of the zero singular values
    double total = 0.0;
};

/// Expansion of ||M + Delta||_* around M, accurate to o(||Delta||^2).
///
/// Singular values at or below rank_tol * s_1 count as zero; their left and
/// right singular vectors span the null-space bases U0 and V0. The term Q
/// is the Schur complement U0^T D V0 - U0^T D V Diag(s)^{-1} U^T D V0.
/// Throws DomainError unless ||Delta||_op < s_r / 4, with s_r the smallest
/// positive singular value.
ExpansionResult trace_norm_expansion(const Matrix& m, const Matrix& delta, double rank_tol = 1e-10);

/// ||(I + Delta) Diag(w)||_* to second order in a symmetric Delta:
/// ||w||_1 + diag(Delta)^T |w| + sum_ij Delta_ij^2 (|w_i| - |w_j|)^2 / (4 (|w_i| + |w_j|)),
/// where pairs with w_i = w_j = 0 contribute nothing.
double lasso_neighborhood_expansion(const Vector& w, const Matrix& delta);

struct ResidualRow {
    double t = 0.0;
    double residual = 0.0;
    double residual_over_t2 = 0.0;  // 0 at t = 0
};

/// |trace_norm(M + t Delta) - expansion(M, t Delta)| for each t.
std::vector<ResidualRow> expansion_residual_report(const Matrix& m, const Matrix& delta,
                                                   const std::vector<double>& t_grid);

/// |trace_norm((I + t Delta) Diag(w)) - lasso_neighborhood_expansion(w, t Delta)| for each t.
std::vector<ResidualRow> lasso_expansion_residual_report(const Vector& w, const Matrix& delta,
                                                         const std::vector<double>& t_grid);

/// CSV with header `t,residual,residual_over_t2`.
void write_residual_csv(std::ostream& out, const std::vector<ResidualRow>& rows);

}  // namespace tracelasso
