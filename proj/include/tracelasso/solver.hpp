#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "tracelasso/problem.hpp"

namespace tracelasso {

enum class InitPolicy {
    ridge,  // ridge solution at the same lambda
    given,  // SolverConfig::initial_w
};

struct SolverConfig {
    double lambda = 1.0;
    /// Number of outer reweighting iterations (upper bound).
    std::size_t max_outer = 500;
    /// Smoothing sequence. Empty means geometric decay from mu_start to
    /// mu_final over max_outer steps.
    std::vector<double> mu_schedule;
    double mu_start = 1.0;
    double mu_final = 10.0 * std::numeric_limits<double>::epsilon();
    double cg_tol = 1e-10;
    /// 0 means 10 p. Conjugate gradient needs at most p steps in exact
    /// arithmetic, but the reweighted systems at small lambda are ill
    /// conditioned enough that roundoff pushes it past p.
    std::size_t cg_max_iter = 0;
    /// Stop once ||w_i - w_{i-1}|| / max(||w_{i-1}||, 1e-12) <= w_tol.
    double w_tol = 1e-8;
    InitPolicy init = InitPolicy::ridge;
    Vector initial_w;

    /// The schedule actually used; throws InvalidInput if the configuration
    /// is inconsistent.
    std::vector<double> resolved_mu_schedule() const;
};

/// 0.5 ||y - Xw||^2 + lambda ||X Diag(w)||_*
double objective(const Problem& problem, const Vector& w, double lambda);

/// 0.5 ||y - Xw||^2 + lambda tr((X Diag(w)^2 X^T + mu I)^{1/2}): the
/// alternating objective after its exact minimization over S.
double smoothed_objective(const Problem& problem, const Vector& w, double lambda, double mu);

/// 0.5 (tr(M^T S^{-1} M) + tr(S)); an upper bound on ||M||_* for any
/// positive-definite S, tight at S = (M M^T)^{1/2}.
double eta_bound(const Matrix& m, const Matrix& s);

struct IrlsStep {
    Vector w;
    /// Smoothed objective of the incoming w at this step's mu.
    double smoothed_objective = 0.0;
    std::size_t cg_iterations = 0;
};

/// One reweighting sweep at smoothing level mu: eigendecompose
/// X Diag(w)^2 X^T, form D = Diag(diag(X^T S^{-1} X)) and solve
/// (X^T X + lambda D) w = X^T y by conjugate gradient warm-started at w.
/// cg_max_iter == 0 means 10 p.
IrlsStep irls_step(const Problem& problem, const Vector& w, double lambda, double mu,
                   double cg_tol = 1e-10, std::size_t cg_max_iter = 0);

/// Minimizes 0.5 ||y - Xw||^2 + lambda ||X Diag(w)||_* by iteratively
/// reweighted least squares. objective_trace holds the smoothed objective
/// at each step's mu. Returns w = 0 if that is at least as good as the
/// final iterate.
SolveResult irls_solve(const Problem& problem, const SolverConfig& config);

/// ||X||_op ||X^T y||_inf, an upper bound on the smallest lambda whose
/// solution is zero.
double lambda_max(const Matrix& x, const Vector& y);

struct RegPath {
    std::vector<double> lambdas;  // strictly descending
    std::vector<SolveResult> solutions;
    double lambda_max = 0.0;
};

/// Log-spaced grid from lambda_max down `decades` orders of magnitude.
std::vector<double> lambda_grid(double lambda_max, std::size_t n_lambdas, double decades);

/// Solves along lambda_grid, warm-starting each point from the previous
/// solution. config.lambda and config.init apply only to the first point's
/// initial guess policy; the lambda values come from the grid.
RegPath reg_path(const Problem& problem, std::size_t n_lambdas, double decades,
                 const SolverConfig& config);

struct UniquenessReport {
    std::vector<Vector> solutions;
    double max_coefficient_spread = 0.0;  // max pairwise ||w_a - w_b||_inf
    double max_objective_spread = 0.0;
};

/// Solves from `restarts` random initial points and measures disagreement.
UniquenessReport uniqueness_probe(const Problem& problem, double lambda, std::size_t restarts,
                                  std::uint64_t seed, const SolverConfig& base = {});

}  // namespace tracelasso
