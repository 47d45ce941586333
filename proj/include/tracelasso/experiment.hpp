#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tracelasso/datagen.hpp"

namespace tracelasso {

enum class Method { trace, lasso, ridge, enet };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// Synthetic estimation-error sweep. For each (method, k, seed) cell the data
/// are generated, every lambda on the method's grid is fitted, and the
/// smallest l2 distance to the true weights is kept.
struct ExperimentConfig {
    CovarianceSpec::Kind design = CovarianceSpec::Kind::identity;
    Eigen::Index n = 256;
    Eigen::Index p = 1024;
    std::vector<Eigen::Index> support_sizes = {8, 16, 32, 64};
    std::vector<std::uint64_t> seeds = {1};
    double sigma = 1.0;
    std::vector<Method> methods = {Method::trace, Method::lasso, Method::ridge, Method::enet};

    /// Lambda grid: grid_points log-spaced values spanning `decades` below
    /// each method's lambda_max.
    std::size_t grid_points = 50;
    double decades = 4.0;
    /// Squared-l2 weights tried by the elastic net.
    std::vector<double> enet_l2 = {0.01, 0.1, 1.0, 10.0};

    /// Outer reweighting steps per trace Lasso fit on the path.
    std::size_t irls_max_outer = 50;
    /// Fit on unit-norm columns and map the coefficients back.
    bool normalize_columns = true;
    std::size_t threads = 1;

    void validate() const;
};

struct ExperimentRow {
    Method method = Method::trace;
    std::string design;
    Eigen::Index k = 0;
    std::uint64_t seed = 0;
    double best_error = 0.0;
    double best_lambda = 0.0;
};

struct ExperimentOutcome {
    std::vector<ExperimentRow> rows;     // successful cells, in (method, k, seed) order
    std::vector<std::string> failures;   // one message per failed cell
};

ExperimentOutcome run_experiment(const ExperimentConfig& config);

/// Fits one cell; throws on solver failure.
ExperimentRow run_cell(const ExperimentConfig& config, Method method, Eigen::Index k,
                       std::uint64_t seed);

/// CSV with header `method,design,k,seed,best_error,best_lambda`.
void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

}  // namespace tracelasso
