#include <doctest.h>

#include <sstream>

#include "tracelasso/errors.hpp"
#include "tracelasso/experiment.hpp"

using namespace tracelasso;

TEST_CASE("experiment: ridge smoke run with k = p") {
    ExperimentConfig cfg;
    cfg.n = 6;
    cfg.p = 8;
    cfg.support_sizes = {8};
    cfg.seeds = {1, 2};
    cfg.methods = {Method::ridge};
    cfg.grid_points = 5;
    const auto out = run_experiment(cfg);
    CHECK(out.failures.empty());
    REQUIRE(out.rows.size() == 2);
    for (const auto& row : out.rows) {
        CHECK(std::isfinite(row.best_error));
        CHECK(row.best_lambda > 0.0);
        CHECK(row.design == "identity");
    }
}

TEST_CASE("experiment: noiseless sparse recovery by the Lasso") {
    ExperimentConfig cfg;
    cfg.n = 40;
    cfg.p = 60;
    cfg.support_sizes = {1};
    cfg.seeds = {1};
    cfg.sigma = 0.0;
    cfg.methods = {Method::lasso};
    cfg.decades = 6;
    const auto row = run_cell(cfg, Method::lasso, 1, 1);
    const double scale = sample_ground_truth(60, 1, 1).w_star.norm();
    CHECK(row.best_error <= 0.05 * scale);
}

TEST_CASE("experiment: duplicate seeds give identical rows, threads do not matter") {
    ExperimentConfig cfg;
    cfg.design = CovarianceSpec::Kind::block_diagonal;
    cfg.n = 12;
    cfg.p = 16;
    cfg.support_sizes = {2, 4};
    cfg.seeds = {3, 3};
    cfg.grid_points = 6;
    cfg.decades = 2;
    cfg.irls_max_outer = 20;
    cfg.enet_l2 = {0.5};
    const auto serial = run_experiment(cfg);
    CHECK(serial.failures.empty());
    REQUIRE(serial.rows.size() == 16);
    for (std::size_t i = 0; i + 1 < serial.rows.size(); i += 2) {
        CHECK(serial.rows[i].best_error == serial.rows[i + 1].best_error);
        CHECK(serial.rows[i].best_lambda == serial.rows[i + 1].best_lambda);
    }

    cfg.threads = 3;
    const auto parallel = run_experiment(cfg);
    std::ostringstream a, b;
    write_experiment_csv(a, serial.rows);
    write_experiment_csv(b, parallel.rows);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("method,design,k,seed,best_error,best_lambda\n", 0) == 0);
}

TEST_CASE("experiment: configuration checks") {
    ExperimentConfig cfg;
    cfg.p = 20;
    cfg.support_sizes = {30};
    CHECK_THROWS_AS(run_experiment(cfg), InvalidInput);
    cfg.support_sizes = {2};
    cfg.seeds = {};
    CHECK_THROWS_AS(run_experiment(cfg), InvalidInput);
    cfg.seeds = {1};
    cfg.design = CovarianceSpec::Kind::block_diagonal;
    CHECK_THROWS_AS(run_experiment(cfg), InvalidInput);  // 8 does not divide 20
    CHECK(parse_method("enet") == Method::enet);
    CHECK_THROWS_AS(parse_method("ols"), InvalidInput);
    CHECK(method_name(Method::trace) == "trace");
}
