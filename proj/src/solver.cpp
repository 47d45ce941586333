#include "tracelasso/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tracelasso/baselines.hpp"
#include "tracelasso/errors.hpp"
#include "tracelasso/norms.hpp"
#include "tracelasso/random.hpp"

namespace tracelasso {

std::vector<double> SolverConfig::resolved_mu_schedule() const {
    if (!(lambda > 0.0)) throw InvalidInput("SolverConfig: lambda must be positive");
    if (!(cg_tol > 0.0)) throw InvalidInput("SolverConfig: cg_tol must be positive");
    if (!(w_tol >= 0.0)) throw InvalidInput("SolverConfig: w_tol must be nonnegative");

    if (!mu_schedule.empty()) {
        if (mu_schedule.size() > max_outer) {
            throw InvalidInput("SolverConfig: mu schedule longer than max_outer");
        }
        for (std::size_t i = 0; i < mu_schedule.size(); ++i) {
            if (!(mu_schedule[i] > 0.0)) throw InvalidInput("SolverConfig: mu must be positive");
            if (i > 0 && mu_schedule[i] > mu_schedule[i - 1]) {
                throw InvalidInput("SolverConfig: mu schedule must be nonincreasing");
            }
        }
        return mu_schedule;
    }

    if (max_outer < 1) throw InvalidInput("SolverConfig: max_outer must be >= 1");
    if (!(mu_final > 0.0) || mu_start < mu_final) {
        throw InvalidInput("SolverConfig: need mu_start >= mu_final > 0");
    }
    std::vector<double> out(max_outer);
    if (max_outer == 1) {
        out[0] = mu_final;
        return out;
    }
    const double log_ratio = std::log(mu_final / mu_start) / static_cast<double>(max_outer - 1);
    for (std::size_t i = 0; i < max_outer; ++i) {
        out[i] = mu_start * std::exp(log_ratio * static_cast<double>(i));
    }
    out.back() = mu_final;
    return out;
}

double objective(const Problem& problem, const Vector& w, double lambda) {
    return problem.loss(w) + lambda * trace_lasso(problem.x(), w, false);
}

namespace {

// X Diag(w)^2 X^T, exactly symmetric.
Matrix weighted_gram(const Matrix& x, const Vector& w) {
    const Matrix b = x * w.asDiagonal();
    Matrix k = Matrix::Zero(x.rows(), x.rows());
    k.selfadjointView<Eigen::Lower>().rankUpdate(b);
    return k.selfadjointView<Eigen::Lower>();
}

}  // namespace

double smoothed_objective(const Problem& problem, const Vector& w, double lambda, double mu) {
    if (!(mu > 0.0)) throw InvalidInput("smoothed_objective: mu must be positive");
    const linalg::SymEigen eig = linalg::sym_eigen(weighted_gram(problem.x(), w));
    return problem.loss(w) + lambda * (eig.values.cwiseMax(0.0).array() + mu).sqrt().sum();
}

double eta_bound(const Matrix& m, const Matrix& s) {
    linalg::require_finite(m, "eta_bound");
    linalg::require_finite(s, "eta_bound");
    if (s.rows() != s.cols() || s.rows() != m.rows()) {
        throw InvalidInput("eta_bound: S must be square with as many rows as M");
    }
    const Eigen::LLT<Matrix> chol(s);
    if (chol.info() != Eigen::Success) {
        throw InvalidInput("eta_bound: S is not positive definite");
    }
    const Matrix half = chol.matrixL().solve(m);
    return 0.5 * (half.squaredNorm() + s.trace());
}

IrlsStep irls_step(const Problem& problem, const Vector& w, double lambda, double mu,
                   double cg_tol, std::size_t cg_max_iter) {
    const Matrix& x = problem.x();
    if (w.size() != problem.p()) throw InvalidInput("irls_step: weight length mismatch");

    const linalg::SymEigen eig = linalg::sym_eigen(weighted_gram(x, w));
    const Matrix s_inv = linalg::psd_inverse_sqrt(eig, mu);

    IrlsStep out;
    out.smoothed_objective =
        problem.loss(w) + lambda * (eig.values.cwiseMax(0.0).array() + mu).sqrt().sum();

    // D = diag(X^T S^{-1} X)
    const Vector d = (x.array() * (s_inv * x).array()).colwise().sum().transpose();

    // Symmetric Jacobi scaling: solve (C A C) z = C X^T y, w = C z, with
    // C = diag(A)^{-1/2}, so the spread of D does not slow CG down.
    const Vector a_diag = x.colwise().squaredNorm().transpose() + lambda * d;
    const Vector c = a_diag.cwiseSqrt().cwiseInverse();
    const Vector rhs = c.cwiseProduct(x.transpose() * problem.y());
    Vector xv(problem.n());
    const linalg::LinearOperator apply = [&](const Vector& in, Vector& res) {
        const Vector v = c.cwiseProduct(in);
        xv.noalias() = x * v;
        res.noalias() = x.transpose() * xv;
        res += lambda * d.cwiseProduct(v);
        res = c.cwiseProduct(res);
    };
    const Vector z0 = w.cwiseQuotient(c);
    const std::size_t cap = cg_max_iter ? cg_max_iter : 10 * static_cast<std::size_t>(problem.p());
    const linalg::CgResult cg = linalg::cg_solve(apply, rhs, z0, cg_tol, cap);
    out.w = c.cwiseProduct(cg.x);
    out.cg_iterations = cg.iterations;
    return out;
}

SolveResult irls_solve(const Problem& problem, const SolverConfig& config) {
    const std::vector<double> schedule = config.resolved_mu_schedule();

    Vector w;
    switch (config.init) {
        case InitPolicy::ridge:
            w = ridge_solve(problem, config.lambda).w;
            break;
        case InitPolicy::given:
            if (config.initial_w.size() != problem.p()) {
                throw InvalidInput("irls_solve: initial_w has the wrong length");
            }
            w = config.initial_w;
            break;
    }

    SolveResult out;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        IrlsStep step;
        try {
            step = irls_step(problem, w, config.lambda, schedule[i], config.cg_tol,
                             config.cg_max_iter);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("irls_solve: outer iteration " + std::to_string(i + 1) +
                                       " (mu = " + std::to_string(schedule[i]) + "): " + e.what(),
                                   i + 1, e.residual());
        }
        out.objective_trace.push_back(step.smoothed_objective);
        out.iterations = i + 1;

        const double change = (step.w - w).norm() / std::max(w.norm(), 1e-12);
        out.final_residual = change;
        w = std::move(step.w);
        if (change <= config.w_tol) {
            out.converged = true;
            break;
        }
    }
    // The smoothed iterates approach an exactly-zero solution only like
    // sqrt(mu), so fall back to w = 0 whenever it scores no worse.
    out.objective = objective(problem, w, config.lambda);
    const double at_zero = 0.5 * problem.y().squaredNorm();
    if (at_zero <= out.objective) {
        w.setZero();
        out.objective = at_zero;
    }
    out.w = std::move(w);
    return out;
}

double lambda_max(const Matrix& x, const Vector& y) {
    if (y.size() != x.rows()) throw InvalidInput("lambda_max: response length mismatch");
    return linalg::operator_norm(x) * (x.transpose() * y).cwiseAbs().maxCoeff();
}

std::vector<double> lambda_grid(double lambda_max, std::size_t n_lambdas, double decades) {
    if (n_lambdas < 2) throw InvalidInput("lambda_grid: need at least two points");
    if (!(lambda_max > 0.0)) throw InvalidInput("lambda_grid: lambda_max must be positive");
    if (!(decades > 0.0)) throw InvalidInput("lambda_grid: decades must be positive");
    std::vector<double> out(n_lambdas);
    for (std::size_t i = 0; i < n_lambdas; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n_lambdas - 1);
        out[i] = lambda_max * std::pow(10.0, -decades * frac);
    }
    return out;
}

RegPath reg_path(const Problem& problem, std::size_t n_lambdas, double decades,
                 const SolverConfig& config) {
    RegPath path;
    path.lambda_max = lambda_max(problem.x(), problem.y());
    path.lambdas = lambda_grid(path.lambda_max, n_lambdas, decades);

    SolverConfig cfg = config;
    for (std::size_t i = 0; i < path.lambdas.size(); ++i) {
        cfg.lambda = path.lambdas[i];
        try {
            path.solutions.push_back(irls_solve(problem, cfg));
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("reg_path: lambda index " + std::to_string(i) + ": " + e.what(),
                                   e.iterations(), e.residual());
        }
        cfg.init = InitPolicy::given;
        cfg.initial_w = path.solutions.back().w;
    }
    return path;
}

UniquenessReport uniqueness_probe(const Problem& problem, double lambda, std::size_t restarts,
                                  std::uint64_t seed, const SolverConfig& base) {
    if (restarts < 2) throw InvalidInput("uniqueness_probe: need at least two restarts");

    UniquenessReport report;
    std::vector<double> objectives;
    SolverConfig cfg = base;
    cfg.lambda = lambda;
    cfg.init = InitPolicy::given;
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng rng(seed, Stream::restarts, r);
        cfg.initial_w = rng.normal_vector(problem.p());
        SolveResult res = irls_solve(problem, cfg);
        objectives.push_back(res.objective);
        report.solutions.push_back(std::move(res.w));
    }
    for (std::size_t a = 0; a < restarts; ++a) {
        for (std::size_t b = a + 1; b < restarts; ++b) {
            report.max_coefficient_spread =
                std::max(report.max_coefficient_spread,
                         (report.solutions[a] - report.solutions[b]).cwiseAbs().maxCoeff());
            report.max_objective_spread =
                std::max(report.max_objective_spread, std::abs(objectives[a] - objectives[b]));
        }
    }
    return report;
}

}  // namespace tracelasso
