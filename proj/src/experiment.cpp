#include "tracelasso/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>

#include "tracelasso/baselines.hpp"
#include "tracelasso/csv.hpp"
#include "tracelasso/errors.hpp"
#include "tracelasso/norms.hpp"
#include "tracelasso/solver.hpp"

namespace tracelasso {

std::string method_name(Method m) {
    switch (m) {
        case Method::trace: return "trace";
        case Method::lasso: return "lasso";
        case Method::ridge: return "ridge";
        case Method::enet: return "enet";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "trace") return Method::trace;
    if (name == "lasso") return Method::lasso;
    if (name == "ridge") return Method::ridge;
    if (name == "enet") return Method::enet;
    throw InvalidInput("unknown method '" + name + "' (expected trace, lasso, ridge or enet)");
}

void ExperimentConfig::validate() const {
    if (n < 1 || p < 1) throw InvalidInput("experiment: n and p must be positive");
    if (support_sizes.empty()) throw InvalidInput("experiment: no support sizes");
    if (seeds.empty()) throw InvalidInput("experiment: no seeds");
    if (methods.empty()) throw InvalidInput("experiment: no methods");
    for (Eigen::Index k : support_sizes) {
        if (k < 1 || k > p) throw InvalidInput("experiment: support size out of range");
    }
    if (!(sigma >= 0.0)) throw InvalidInput("experiment: sigma must be nonnegative");
    if (grid_points < 2) throw InvalidInput("experiment: need at least two grid points");
    if (!(decades > 0.0)) throw InvalidInput("experiment: decades must be positive");
    if (irls_max_outer < 1) throw InvalidInput("experiment: irls_max_outer must be positive");
    for (double l2 : enet_l2) {
        if (!(l2 > 0.0)) throw InvalidInput("experiment: enet weights must be positive");
    }
    CovarianceSpec spec;
    spec.kind = design;
    spec.p = p;
    spec.validate();
}

namespace {

struct Best {
    double error = std::numeric_limits<double>::infinity();
    double lambda = 0.0;

    void offer(double err, double lam) {
        if (err < error) {
            error = err;
            lambda = lam;
        }
    }
};

}  // namespace

ExperimentRow run_cell(const ExperimentConfig& config, Method method, Eigen::Index k,
                       std::uint64_t seed) {
    CovarianceSpec spec;
    spec.kind = config.design;
    spec.p = config.p;

    const Matrix x_raw = sample_design(config.n, spec, seed);
    const GroundTruth truth = sample_ground_truth(config.p, k, seed);
    const Vector y = sample_response(x_raw, truth.w_star, config.sigma, seed);

    Vector scale = Vector::Ones(config.p);
    Matrix x = x_raw;
    if (config.normalize_columns) {
        scale = x_raw.colwise().norm().transpose();
        x = normalize_columns(x_raw);
    }
    const Problem problem(x, y);
    auto error_of = [&](const Vector& w) {
        return estimation_error(w.cwiseQuotient(scale), truth.w_star);
    };

    Best best;
    ProximalConfig prox;
    prox.gap_tol = 1e-6;
    prox.max_iter = 50000;
    const double corr_max = (x.transpose() * y).cwiseAbs().maxCoeff();

    switch (method) {
        case Method::trace: {
            SolverConfig cfg;
            cfg.max_outer = config.irls_max_outer;
            cfg.cg_tol = 1e-8;
            const RegPath path = reg_path(problem, config.grid_points, config.decades, cfg);
            for (std::size_t i = 0; i < path.lambdas.size(); ++i) {
                best.offer(error_of(path.solutions[i].w), path.lambdas[i]);
            }
            break;
        }
        case Method::lasso: {
            Vector warm = Vector::Zero(config.p);
            for (double lam : lambda_grid(corr_max, config.grid_points, config.decades)) {
                warm = lasso_solve(problem, lam, prox, &warm).w;
                best.offer(error_of(warm), lam);
            }
            break;
        }
        case Method::ridge: {
            // Ridge has no zero-solution threshold; start well above the
            // largest eigenvalue of X^T X and cover two extra decades.
            const double op = linalg::operator_norm(x);
            for (double lam : lambda_grid(10.0 * op * op, config.grid_points, config.decades + 2.0)) {
                best.offer(error_of(ridge_solve(problem, lam).w), lam);
            }
            break;
        }
        case Method::enet: {
            for (double l2 : config.enet_l2) {
                Vector warm = Vector::Zero(config.p);
                for (double lam : lambda_grid(corr_max, config.grid_points, config.decades)) {
                    warm = elastic_net_solve(problem, lam, l2, prox, &warm).w;
                    best.offer(error_of(warm), lam);
                }
            }
            break;
        }
    }

    ExperimentRow row;
    row.method = method;
    row.design = spec.name();
    row.k = k;
    row.seed = seed;
    row.best_error = best.error;
    row.best_lambda = best.lambda;
    return row;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
    config.validate();

    struct Task {
        Method method;
        Eigen::Index k;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (Method m : config.methods)
        for (Eigen::Index k : config.support_sizes)
            for (std::uint64_t s : config.seeds) tasks.push_back({m, k, s});

    std::vector<std::optional<ExperimentRow>> results(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            try {
                results[i] = run_cell(config, t.method, t.k, t.seed);
            } catch (const std::exception& e) {
                errors[i] = method_name(t.method) + " k=" + std::to_string(t.k) +
                            " seed=" + std::to_string(t.seed) + ": " + e.what();
            }
        }
    };

    const std::size_t n_threads = std::max<std::size_t>(1, std::min(config.threads, tasks.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }

    ExperimentOutcome out;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (results[i]) {
            out.rows.push_back(*results[i]);
        } else {
            out.failures.push_back(errors[i]);
        }
    }
    return out;
}

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << "method,design,k,seed,best_error,best_lambda\n";
    for (const auto& r : rows) {
        out << method_name(r.method) << ',' << r.design << ',' << r.k << ',' << r.seed << ','
            << csv::format_real(r.best_error) << ',' << csv::format_real(r.best_lambda) << '\n';
    }
}

}  // namespace tracelasso
