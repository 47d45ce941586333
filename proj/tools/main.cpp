#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tracelasso/baselines.hpp"
#include "tracelasso/csv.hpp"
#include "tracelasso/datagen.hpp"
#include "tracelasso/errors.hpp"
#include "tracelasso/experiment.hpp"
#include "tracelasso/norms.hpp"
#include "tracelasso/perturbation.hpp"
#include "tracelasso/random.hpp"
#include "tracelasso/solver.hpp"

namespace fs = std::filesystem;
using namespace tracelasso;

namespace {

constexpr const char* output_dir_env = "TRACELASSO_OUTPUT_DIR";

// --out if given, otherwise `fallback` inside $TRACELASSO_OUTPUT_DIR (or the
// working directory).
fs::path resolve_output(const std::string& out, const std::string& fallback) {
    if (!out.empty()) return out;
    const char* dir = std::getenv(output_dir_env);
    return fs::path(dir && *dir ? dir : ".") / fallback;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

Matrix read_design(const std::string& path, bool normalize) {
    Matrix x = csv::read_matrix_file(path);
    return normalize ? normalize_columns(x) : x;
}

const std::map<std::string, std::function<Matrix()>>& gram_presets_by_name() {
    static const std::map<std::string, std::function<Matrix()>> presets = {
        {"identity", [] { return Matrix(Matrix::Identity(3, 3)); }},
        {"correlated", gram_presets::correlated_pair},
        {"chain", gram_presets::chain},
        {"block", gram_presets::perfect_block},
    };
    return presets;
}

// A preset name or a CSV file holding the Gram matrix.
std::pair<std::string, Matrix> load_gram(const std::string& spec) {
    const auto& presets = gram_presets_by_name();
    if (auto it = presets.find(spec); it != presets.end()) return {spec, it->second()};
    return {fs::path(spec).stem().string(), csv::read_matrix_file(spec)};
}

std::vector<double> parse_values(const std::string& text) {
    std::istringstream in("v\n" + text);
    const Matrix m = csv::read_matrix(in, "--values");
    if (m.rows() != 1) throw InvalidInput("--values expects one comma-separated row");
    return {m.data(), m.data() + m.size()};
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
    std::string x_path, y_path, out;
    std::string method = "trace";
    double lambda = 0.0;
    double lambda2 = 0.0;
    bool normalize = false;
    std::size_t max_outer = 500;
};

int run_solve(const SolveArgs& a) {
    const Problem problem(read_design(a.x_path, a.normalize), csv::read_vector_file(a.y_path));
    SolveResult res;
    switch (parse_method(a.method)) {
        case Method::trace: {
            SolverConfig cfg;
            cfg.lambda = a.lambda;
            cfg.max_outer = a.max_outer;
            res = irls_solve(problem, cfg);
            break;
        }
        case Method::lasso: res = lasso_solve(problem, a.lambda); break;
        case Method::ridge: res = ridge_solve(problem, a.lambda); break;
        case Method::enet: res = elastic_net_solve(problem, a.lambda, a.lambda2); break;
    }
    const fs::path path = resolve_output(a.out, "coefficients.csv");
    std::ofstream out = open_output(path);
    csv::write_coefficients(out, res.w);
    finish(out, path);
    std::cout << "objective " << csv::format_real(res.objective) << '\n'
              << "iterations " << res.iterations << '\n'
              << "converged " << (res.converged ? "yes" : "no") << '\n';
    return 0;
}

// ---- path ------------------------------------------------------------------

struct PathArgs {
    std::string x_path, y_path, out;
    std::string method = "trace";
    std::size_t grid_points = 50;
    double decades = 4.0;
    double lambda2 = 0.1;
    bool normalize = false;
};

int run_path(const PathArgs& a) {
    const Problem problem(read_design(a.x_path, a.normalize), csv::read_vector_file(a.y_path));
    const Method method = parse_method(a.method);
    std::vector<double> lambdas;
    std::vector<SolveResult> fits;

    if (method == Method::trace) {
        RegPath path = reg_path(problem, a.grid_points, a.decades, SolverConfig{});
        lambdas = std::move(path.lambdas);
        fits = std::move(path.solutions);
    } else if (method == Method::ridge) {
        const double op = linalg::operator_norm(problem.x());
        lambdas = lambda_grid(10.0 * op * op, a.grid_points, a.decades);
        for (double lam : lambdas) fits.push_back(ridge_solve(problem, lam));
    } else {
        const double start = (problem.x().transpose() * problem.y()).cwiseAbs().maxCoeff();
        lambdas = lambda_grid(start, a.grid_points, a.decades);
        Vector warm = Vector::Zero(problem.p());
        for (double lam : lambdas) {
            fits.push_back(method == Method::lasso
                               ? lasso_solve(problem, lam, {}, &warm)
                               : elastic_net_solve(problem, lam, a.lambda2, {}, &warm));
            warm = fits.back().w;
        }
    }

    const fs::path path = resolve_output(a.out, "path.csv");
    std::ofstream out = open_output(path);
    out << "lambda,objective,iterations";
    for (Eigen::Index j = 0; j < problem.p(); ++j) out << ",w" << j + 1;
    out << '\n';
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        out << csv::format_real(lambdas[i]) << ',' << csv::format_real(fits[i].objective) << ','
            << fits[i].iterations;
        for (Eigen::Index j = 0; j < problem.p(); ++j) out << ',' << csv::format_real(fits[i].w(j));
        out << '\n';
    }
    finish(out, path);
    std::cout << "points " << lambdas.size() << '\n'
              << "lambda_max " << csv::format_real(lambdas.front()) << '\n';
    return 0;
}

// ---- experiment ------------------------------------------------------------

struct ExperimentArgs {
    std::string design = "identity";
    Eigen::Index n = 256, p = 1024;
    std::vector<Eigen::Index> k = {8, 16, 32, 64};
    std::vector<std::uint64_t> seeds = {1};
    double sigma = 1.0;
    std::vector<std::string> methods = {"trace", "lasso", "ridge", "enet"};
    std::size_t grid_points = 50;
    double decades = 4.0;
    std::vector<double> enet_l2 = {0.01, 0.1, 1.0, 10.0};
    std::size_t irls_max_outer = 50;
    bool normalize = true;
    std::size_t threads = 1;
    std::string out;
};

int run_experiment_cmd(const ExperimentArgs& a) {
    ExperimentConfig cfg;
    cfg.design = CovarianceSpec::parse_kind(a.design);
    cfg.n = a.n;
    cfg.p = a.p;
    cfg.support_sizes = a.k;
    cfg.seeds = a.seeds;
    cfg.sigma = a.sigma;
    cfg.methods.clear();
    for (const auto& m : a.methods) cfg.methods.push_back(parse_method(m));
    cfg.grid_points = a.grid_points;
    cfg.decades = a.decades;
    cfg.enet_l2 = a.enet_l2;
    cfg.irls_max_outer = a.irls_max_outer;
    cfg.normalize_columns = a.normalize;
    cfg.threads = a.threads;

    const ExperimentOutcome outcome = run_experiment(cfg);
    const fs::path path = resolve_output(a.out, "experiment.csv");
    std::ofstream out = open_output(path);
    write_experiment_csv(out, outcome.rows);
    finish(out, path);

    for (const auto& f : outcome.failures) std::cerr << "failed: " << f << '\n';
    std::cout << "cells " << outcome.rows.size() + outcome.failures.size() << ", failed "
              << outcome.failures.size() << '\n';
    return outcome.failures.empty() ? 0 : 1;
}

// ---- ball ------------------------------------------------------------------

struct BallArgs {
    std::vector<std::string> grams = {"correlated", "chain", "block"};
    std::size_t resolution = 64;
    std::string out;
};

int run_ball(const BallArgs& a) {
    const fs::path dir = resolve_output(a.out, "balls");
    for (const auto& spec : a.grams) {
        const auto [name, g] = load_gram(spec);
        const auto points = unit_ball_slice(PenaltyMatrix::from_gram(g), a.resolution);
        const fs::path path = dir / ("ball_" + name + ".csv");
        std::ofstream out = open_output(path);
        write_ball_csv(out, points);
        finish(out, path);
        std::cout << path.string() << ' ' << points.size() << '\n';
    }
    return 0;
}

// ---- perturb-check ---------------------------------------------------------

struct PerturbArgs {
    std::string kind = "trace";
    Eigen::Index n = 4, p = 5, rank = 2;
    std::uint64_t seed = 1;
    std::vector<double> t_grid = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
    bool diagonal = false;
    std::string out;
};

Matrix orthogonal(Rng& rng, Eigen::Index size) {
    Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(size, size));
    return qr.householderQ() * Matrix::Identity(size, size);
}

int run_perturb(const PerturbArgs& a) {
    if (a.n < 1 || a.p < 1) throw InvalidInput("perturb-check: dimensions must be positive");
    Rng rng(a.seed, Stream::perturbation);
    std::vector<ResidualRow> rows;

    if (a.kind == "trace") {
        const Eigen::Index m_min = std::min(a.n, a.p);
        Matrix m = Matrix::Zero(a.n, a.p);
        Matrix delta;
        if (a.diagonal) {
            // Descending diagonal ending in a zero, so the null-space term is exercised.
            for (Eigen::Index i = 0; i < m_min; ++i) m(i, i) = static_cast<double>(m_min - 1 - i);
            if (m_min == 1) m(0, 0) = 1.0;
            delta = Matrix::Zero(a.n, a.p);
            for (Eigen::Index i = 0; i < m_min; ++i) delta(i, i) = rng.normal();
        } else {
            if (a.rank < 0 || a.rank > m_min) throw InvalidInput("perturb-check: rank out of range");
            // Singular values in [1, 2) keep every t <= 1e-2 inside the valid region.
            const Matrix q1 = orthogonal(rng, a.n);
            const Matrix q2 = orthogonal(rng, a.p);
            Vector s(a.rank);
            for (Eigen::Index i = 0; i < a.rank; ++i) s(i) = 1.0 + rng.uniform();
            m = q1.leftCols(a.rank) * s.asDiagonal() * q2.leftCols(a.rank).transpose();
            delta = rng.normal_matrix(a.n, a.p);
        }
        delta /= delta.norm();
        rows = expansion_residual_report(m, delta, a.t_grid);
    } else if (a.kind == "lasso") {
        Vector w = rng.normal_vector(a.p);
        for (Eigen::Index i = 0; i < a.p; i += 3) w(i) = 0.0;  // mixed support
        Matrix delta;
        if (a.diagonal) {
            delta = Vector(rng.normal_vector(a.p)).asDiagonal();
        } else {
            const Matrix r = rng.normal_matrix(a.p, a.p);
            delta = 0.5 * (r + r.transpose());
        }
        delta /= delta.norm();
        rows = lasso_expansion_residual_report(w, delta, a.t_grid);
    } else {
        throw InvalidInput("perturb-check: --kind must be trace or lasso");
    }

    const fs::path path = resolve_output(a.out, "perturb_" + a.kind + ".csv");
    std::ofstream out = open_output(path);
    write_residual_csv(out, rows);
    finish(out, path);
    for (const auto& r : rows) {
        std::cout << csv::format_real(r.t) << ' ' << csv::format_real(r.residual) << '\n';
    }
    return 0;
}

// ---- norm ------------------------------------------------------------------

struct NormArgs {
    std::string gram, penalty, w_path, values;
    bool normalize = false;
};

int run_norm(const NormArgs& a) {
    if (a.gram.empty() == a.penalty.empty()) {
        throw InvalidInput("norm: give exactly one of --gram or --penalty");
    }
    if (a.w_path.empty() == a.values.empty()) {
        throw InvalidInput("norm: give exactly one of --w or --values");
    }
    const PenaltyMatrix pm =
        a.gram.empty()
            ? PenaltyMatrix::from_explicit(read_design(a.penalty, a.normalize))
            : PenaltyMatrix::from_gram(load_gram(a.gram).second);
    Vector w;
    if (a.w_path.empty()) {
        const auto v = parse_values(a.values);
        w = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    } else {
        w = csv::read_vector_file(a.w_path);
    }
    std::cout << csv::format_real(omega(pm, w)) << '\n';
    return 0;
}

// ---- generate --------------------------------------------------------------

struct GenerateArgs {
    std::string design = "identity";
    Eigen::Index n = 256, p = 1024, k = 8;
    double sigma = 1.0;
    std::uint64_t seed = 1;
    std::string out;
};

int run_generate(const GenerateArgs& a) {
    CovarianceSpec spec;
    spec.kind = CovarianceSpec::parse_kind(a.design);
    spec.p = a.p;
    const Matrix x = sample_design(a.n, spec, a.seed);
    const GroundTruth truth = sample_ground_truth(a.p, a.k, a.seed);
    const Vector y = sample_response(x, truth.w_star, a.sigma, a.seed);
    const fs::path stem = resolve_output(a.out, "dataset");
    if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
    write_dataset(stem.string(), x, y, truth, spec, a.sigma);
    std::cout << stem.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace Lasso and Omega_P norms: solvers, paths and synthetic experiments"};
    app.require_subcommand(1);
    int status = 0;
    std::function<int()> action;

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Fit one lambda and write index,coefficient CSV");
    s->add_option("--x", solve.x_path, "Design matrix CSV (row = observation)")->required();
    s->add_option("--y", solve.y_path, "Response CSV")->required();
    s->add_option("--lambda", solve.lambda, "Regularization weight")->required();
    s->add_option("--method", solve.method, "trace, lasso, ridge or enet")->capture_default_str();
    s->add_option("--lambda2", solve.lambda2, "Squared-l2 weight for enet")->capture_default_str();
    s->add_option("--max-outer", solve.max_outer, "Reweighting steps for trace")->capture_default_str();
    s->add_flag("--normalize-columns,!--no-normalize-columns", solve.normalize,
                "Rescale design columns to unit norm before fitting");
    s->add_option("--out", solve.out, "Coefficient CSV path");
    s->callback([&] { action = [&] { return run_solve(solve); }; });

    PathArgs path;
    auto* pa = app.add_subcommand("path", "Warm-started regularization path");
    pa->add_option("--x", path.x_path, "Design matrix CSV")->required();
    pa->add_option("--y", path.y_path, "Response CSV")->required();
    pa->add_option("--method", path.method, "trace, lasso, ridge or enet")->capture_default_str();
    pa->add_option("--grid-points", path.grid_points)->capture_default_str();
    pa->add_option("--decades", path.decades)->capture_default_str();
    pa->add_option("--lambda2", path.lambda2, "Squared-l2 weight for enet")->capture_default_str();
    pa->add_flag("--normalize-columns,!--no-normalize-columns", path.normalize);
    pa->add_option("--out", path.out, "Path CSV: lambda,objective,iterations,w1..wp");
    pa->callback([&] { action = [&] { return run_path(path); }; });

    ExperimentArgs exp;
    auto* e = app.add_subcommand("experiment", "Synthetic estimation-error sweep");
    e->add_option("--design", exp.design, "identity, block or toeplitz")->capture_default_str();
    e->add_option("--n", exp.n)->capture_default_str();
    e->add_option("--p", exp.p)->capture_default_str();
    e->add_option("--k", exp.k, "Support sizes")->delimiter(',')->capture_default_str();
    e->add_option("--seeds,--seed", exp.seeds)->delimiter(',')->capture_default_str();
    e->add_option("--sigma", exp.sigma, "Noise standard deviation")->capture_default_str();
    e->add_option("--methods,--method", exp.methods)->delimiter(',')->capture_default_str();
    e->add_option("--grid-points", exp.grid_points)->capture_default_str();
    e->add_option("--decades", exp.decades)->capture_default_str();
    e->add_option("--enet-l2", exp.enet_l2)->delimiter(',')->capture_default_str();
    e->add_option("--irls-max-outer", exp.irls_max_outer)->capture_default_str();
    e->add_flag("--normalize-columns,!--no-normalize-columns", exp.normalize)->capture_default_str();
    e->add_option("--threads", exp.threads)->capture_default_str();
    e->add_option("--out", exp.out, "Results CSV path");
    e->callback([&] { action = [&] { return run_experiment_cmd(exp); }; });

    BallArgs ball;
    auto* b = app.add_subcommand("ball", "Boundary points of three-dimensional unit balls");
    b->add_option("--gram", ball.grams,
                  "Preset (identity, correlated, chain, block) or Gram CSV; repeatable")
        ->capture_default_str();
    b->add_option("--resolution", ball.resolution)->capture_default_str();
    b->add_option("--out", ball.out, "Output directory");
    b->callback([&] { action = [&] { return run_ball(ball); }; });

    PerturbArgs pert;
    auto* pc = app.add_subcommand("perturb-check", "Residuals of the second-order expansions");
    pc->add_option("--kind", pert.kind, "trace (general M) or lasso (around P = I)")
        ->capture_default_str();
    pc->add_option("--n", pert.n, "Rows of M")->capture_default_str();
    pc->add_option("--p", pert.p, "Columns of M, or length of w")->capture_default_str();
    pc->add_option("--rank", pert.rank, "Rank of M")->capture_default_str();
    pc->add_option("--seed", pert.seed)->capture_default_str();
    pc->add_option("--t-grid", pert.t_grid)->delimiter(',')->capture_default_str();
    pc->add_flag("--diagonal", pert.diagonal, "Diagonal instance, where the expansion is exact");
    pc->add_option("--out", pert.out, "Residual CSV path");
    pc->callback([&] { action = [&] { return run_perturb(pert); }; });

    NormArgs norm;
    auto* nm = app.add_subcommand("norm", "Evaluate ||P Diag(w)||_*");
    nm->add_option("--gram", norm.gram, "Preset name or Gram CSV");
    nm->add_option("--penalty", norm.penalty, "Explicit P CSV with unit columns");
    nm->add_flag("--normalize-columns,!--no-normalize-columns", norm.normalize,
                 "Rescale the columns of --penalty to unit norm");
    nm->add_option("--w", norm.w_path, "Weight vector CSV");
    nm->add_option("--values", norm.values, "Weight vector as a comma-separated list");
    nm->callback([&] { action = [&] { return run_norm(norm); }; });

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write one synthetic dataset");
    g->add_option("--design", gen.design)->capture_default_str();
    g->add_option("--n", gen.n)->capture_default_str();
    g->add_option("--p", gen.p)->capture_default_str();
    g->add_option("--k", gen.k)->capture_default_str();
    g->add_option("--sigma", gen.sigma)->capture_default_str();
    g->add_option("--seed", gen.seed)->capture_default_str();
    g->add_option("--out", gen.out, "Path stem for _X.csv, _y.csv, _w.csv and .meta.json");
    g->callback([&] { action = [&] { return run_generate(gen); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    }

    try {
        status = action();
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        status = 1;
    }
    return status;
}
