#pragma once

#include <cstddef>

#include "tracelasso/problem.hpp"

namespace tracelasso {

struct ProximalConfig {
    std::size_t max_iter = 100000;
    /// Stop when the duality gap falls below gap_tol * max(primal, 0.5 ‖y‖²).
    double gap_tol = 1e-10;
};

/// (X^T X + lambda I)^{-1} X^T y, solved through whichever of the p x p or
/// n x n systems is smaller.
SolveResult ridge_solve(const Problem& problem, double lambda);

/// 0.5 ||y - Xw||^2 + lambda ||w||_1 by monotone accelerated proximal
/// gradient with step 1 / ||X||_op^2. The trace holds the objective after
/// each iteration and never increases.
SolveResult lasso_solve(const Problem& problem, double lambda, const ProximalConfig& config = {},
                        const Vector* warm_start = nullptr);

/// 0.5 ||y - Xw||^2 + lambda1 ||w||_1 + (lambda2 / 2) ||w||^2.
SolveResult elastic_net_solve(const Problem& problem, double lambda1, double lambda2,
                              const ProximalConfig& config = {},
                              const Vector* warm_start = nullptr);

double elastic_net_objective(const Problem& problem, const Vector& w, double lambda1,
                             double lambda2);

}  // namespace tracelasso
