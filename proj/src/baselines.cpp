#include "tracelasso/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tracelasso/errors.hpp"

namespace tracelasso {

Problem::Problem(Matrix x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
    linalg::require_finite(x_, "Problem design");
    if (y_.size() != x_.rows()) {
        throw InvalidInput("Problem: response length " + std::to_string(y_.size()) +
                           " does not match " + std::to_string(x_.rows()) + " design rows");
    }
    if (!y_.allFinite()) throw InvalidInput("Problem: non-finite responses");
}

double Problem::loss(const Vector& w) const {
    if (w.size() != p()) throw InvalidInput("Problem::loss: weight length mismatch");
    return 0.5 * (y_ - x_ * w).squaredNorm();
}

SolveResult ridge_solve(const Problem& problem, double lambda) {
    if (!(lambda > 0.0)) throw InvalidInput("ridge_solve: lambda must be positive");
    const Matrix& x = problem.x();
    SolveResult out;
    if (problem.p() <= problem.n()) {
        Matrix a = x.transpose() * x;
        a.diagonal().array() += lambda;
        out.w = a.llt().solve(x.transpose() * problem.y());
    } else {
        Matrix a = x * x.transpose();
        a.diagonal().array() += lambda;
        out.w = x.transpose() * a.llt().solve(problem.y());
    }
    out.converged = true;
    out.objective = problem.loss(out.w) + 0.5 * lambda * out.w.squaredNorm();
    out.objective_trace.push_back(out.objective);
    return out;
}

double elastic_net_objective(const Problem& problem, const Vector& w, double lambda1,
                             double lambda2) {
    return problem.loss(w) + lambda1 * w.lpNorm<1>() + 0.5 * lambda2 * w.squaredNorm();
}

namespace {

Vector soft_threshold(const Vector& v, double threshold) {
    return v.unaryExpr([threshold](double a) {
        return a > threshold ? a - threshold : (a < -threshold ? a + threshold : 0.0);
    });
}

// Duality gap of the elastic net, seen as a lasso on the augmented data
// [X; sqrt(l2) I], [y; 0]. `xw` is X w.
double duality_gap(const Problem& problem, const Vector& w, const Vector& xw, double primal,
                   double lambda1, double lambda2) {
    const Vector r = problem.y() - xw;
    const Vector g = problem.x().transpose() * r - lambda2 * w;
    const double g_max = g.cwiseAbs().maxCoeff();
    const double s = g_max > lambda1 ? lambda1 / g_max : 1.0;
    const double dual = 0.5 * problem.y().squaredNorm() -
                        0.5 * ((problem.y() - s * r).squaredNorm() + s * s * lambda2 * w.squaredNorm());
    return primal - dual;
}

}  // namespace

SolveResult elastic_net_solve(const Problem& problem, double lambda1, double lambda2,
                              const ProximalConfig& config, const Vector* warm_start) {
    if (lambda1 < 0.0 || lambda2 < 0.0 || (lambda1 == 0.0 && lambda2 == 0.0)) {
        throw InvalidInput("elastic_net_solve: need lambda1, lambda2 >= 0, not both zero");
    }
    if (lambda1 == 0.0) {
        return ridge_solve(problem, lambda2);
    }

    const Matrix& x = problem.x();
    const double op = linalg::operator_norm(x);
    const double lipschitz = op * op + lambda2;
    const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

    auto value = [&](const Vector& w, const Vector& xw) {
        return 0.5 * (problem.y() - xw).squaredNorm() + lambda1 * w.lpNorm<1>() +
               0.5 * lambda2 * w.squaredNorm();
    };

    Vector w = warm_start ? *warm_start : Vector::Zero(problem.p());
    if (w.size() != problem.p()) throw InvalidInput("elastic_net_solve: warm start length mismatch");
    Vector xw = x * w;
    double f = value(w, xw);

    // Gap is measured against the larger of f and the objective at w = 0, so
    // near-interpolating fits with tiny objectives still terminate.
    const double gap_scale = std::max({f, 0.5 * problem.y().squaredNorm(), 1e-300});

    SolveResult out;
    out.final_residual = duality_gap(problem, w, xw, f, lambda1, lambda2);
    if (out.final_residual <= config.gap_tol * gap_scale) {
        out.w = std::move(w);
        out.converged = true;
        out.objective = f;
        out.objective_trace.push_back(f);
        return out;
    }

    // Monotone FISTA: the accepted iterate is the better of the prox step
    // and the previous iterate, while the momentum sequence keeps using the
    // prox step.
    Vector w_prev = w, xw_prev = xw;
    Vector v = w, xv = xw;
    double t = 1.0;
    for (std::size_t it = 1; it <= config.max_iter; ++it) {
        const Vector grad = -(x.transpose() * (problem.y() - xv)) + lambda2 * v;
        const Vector z = soft_threshold(v - step * grad, step * lambda1);
        const Vector xz = x * z;
        const double fz = value(z, xz);

        w_prev = w;
        xw_prev = xw;
        if (fz <= f) {
            w = z;
            xw = xz;
            f = fz;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        v = w + (t / t_next) * (z - w) + ((t - 1.0) / t_next) * (w - w_prev);
        xv = xw + (t / t_next) * (xz - xw) + ((t - 1.0) / t_next) * (xw - xw_prev);
        t = t_next;

        out.objective_trace.push_back(f);
        out.iterations = it;
        if (it % 10 == 0 || it == config.max_iter) {
            // Refresh the tracked product to keep roundoff from accumulating.
            xv = x * v;
            out.final_residual = duality_gap(problem, w, xw, f, lambda1, lambda2);
            if (out.final_residual <= config.gap_tol * gap_scale) {
                out.converged = true;
                break;
            }
        }
    }
    if (!out.converged) {
        throw ConvergenceError("elastic_net_solve: duality gap " + std::to_string(out.final_residual) +
                                   " after " + std::to_string(config.max_iter) + " iterations",
                               config.max_iter, out.final_residual);
    }
    out.w = std::move(w);
    out.objective = f;
    return out;
}

SolveResult lasso_solve(const Problem& problem, double lambda, const ProximalConfig& config,
                        const Vector* warm_start) {
    if (!(lambda > 0.0)) throw InvalidInput("lasso_solve: lambda must be positive");
    return elastic_net_solve(problem, lambda, 0.0, config, warm_start);
}

}  // namespace tracelasso
