#include "tracelasso/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "tracelasso/csv.hpp"
#include "tracelasso/errors.hpp"
#include "tracelasso/random.hpp"

namespace tracelasso {

namespace {

constexpr double kUnitTolerance = 1e-8;

void require_dim(const PenaltyMatrix& p, const Vector& w, const char* what) {
    if (w.size() != p.dim()) {
        throw InvalidInput(std::string(what) + ": expected a vector of length " +
                           std::to_string(p.dim()) + ", got " + std::to_string(w.size()));
    }
}

}  // namespace

PenaltyMatrix PenaltyMatrix::from_explicit(Matrix p) {
    linalg::require_finite(p, "PenaltyMatrix");
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
        if (std::abs(p.col(j).norm() - 1.0) > kUnitTolerance) {
            throw InvalidInput("PenaltyMatrix: column " + std::to_string(j) +
                               " does not have unit norm");
        }
    }
    Matrix factor = p;
    return PenaltyMatrix(Form::explicit_matrix, std::move(p), std::move(factor));
}

PenaltyMatrix PenaltyMatrix::from_gram(Matrix g) {
    linalg::require_finite(g, "PenaltyMatrix");
    if (g.rows() != g.cols()) {
        throw InvalidInput("PenaltyMatrix: Gram matrix is not square");
    }
    if ((g.diagonal().array() - 1.0).abs().maxCoeff() > kUnitTolerance) {
        throw InvalidInput("PenaltyMatrix: Gram matrix must have a unit diagonal");
    }
    // Eigenvalues at roundoff level would otherwise add sqrt(eps)-sized terms
    // to every evaluation, so rank-deficient Grams are cut at numerical rank.
    const double rank_tol = static_cast<double>(g.rows()) * std::numeric_limits<double>::epsilon();
    Matrix root = linalg::psd_sqrt(g, 1e-10, rank_tol);
    return PenaltyMatrix(Form::gram, std::move(g), std::move(root));
}

PenaltyMatrix PenaltyMatrix::to_gram() const {
    if (is_gram()) return *this;
    Matrix g = matrix_.transpose() * matrix_;
    // Symmetrize away the roundoff of the product.
    g = 0.5 * (g + g.transpose()).eval();
    return from_gram(std::move(g));
}

GroupPartition::GroupPartition(std::vector<std::vector<Eigen::Index>> groups, Eigen::Index p)
    : groups_(std::move(groups)), p_(p) {
    if (p_ < 1) throw InvalidInput("GroupPartition: dimension must be positive");
    std::vector<bool> seen(static_cast<std::size_t>(p_), false);
    for (const auto& g : groups_) {
        if (g.empty()) throw InvalidInput("GroupPartition: empty group");
        for (Eigen::Index i : g) {
            if (i < 0 || i >= p_) throw InvalidInput("GroupPartition: index out of range");
            if (seen[static_cast<std::size_t>(i)]) {
                throw InvalidInput("GroupPartition: groups overlap at index " + std::to_string(i));
            }
            seen[static_cast<std::size_t>(i)] = true;
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw InvalidInput("GroupPartition: groups do not cover every index");
    }
}

GroupPartition GroupPartition::contiguous(const std::vector<Eigen::Index>& sizes) {
    std::vector<std::vector<Eigen::Index>> groups;
    Eigen::Index next = 0;
    for (Eigen::Index s : sizes) {
        if (s < 1) throw InvalidInput("GroupPartition: group sizes must be positive");
        std::vector<Eigen::Index> g(static_cast<std::size_t>(s));
        for (auto& i : g) i = next++;
        groups.push_back(std::move(g));
    }
    return GroupPartition(std::move(groups), next);
}

double omega(const PenaltyMatrix& p, const Vector& w) {
    require_dim(p, w, "omega");
    return linalg::trace_norm(p.factor() * w.asDiagonal());
}

double omega_gram_equivalent(const PenaltyMatrix& p, const Vector& w) {
    require_dim(p, w, "omega_gram_equivalent");
    return omega(p.to_gram(), w);
}

Matrix normalize_columns(const Matrix& x) {
    Matrix out = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double n = x.col(j).norm();
        if (n == 0.0) {
            throw InvalidInput("normalize_columns: column " + std::to_string(j) + " is zero");
        }
        out.col(j) /= n;
    }
    return out;
}

double trace_lasso(const Matrix& x, const Vector& w, bool normalize) {
    if (w.size() != x.cols()) {
        throw InvalidInput("trace_lasso: weight length does not match the design");
    }
    if (normalize) return linalg::trace_norm(normalize_columns(x) * w.asDiagonal());
    return linalg::trace_norm(x * w.asDiagonal());
}

double dual_norm_upper(const PenaltyMatrix& p, const Vector& u) {
    require_dim(p, u, "dual_norm_upper");
    return linalg::operator_norm(p.factor() * u.asDiagonal());
}

double dual_norm_lower_estimate(const PenaltyMatrix& p, const Vector& u, std::size_t trials,
                                std::uint64_t seed) {
    require_dim(p, u, "dual_norm_lower_estimate");
    if (trials < 1) throw InvalidInput("dual_norm_lower_estimate: trials must be >= 1");
    if (u.isZero(0.0)) return 0.0;

    auto ratio = [&](const Vector& v) {
        const double norm = omega(p, v);
        return norm > 0.0 ? u.dot(v) / norm : 0.0;
    };

    // Signed canonical directions: each gives |u_i| since omega(e_i) = 1.
    double best = u.cwiseAbs().maxCoeff();
    best = std::max(best, ratio(u));
    Rng rng(seed, Stream::probe);
    for (std::size_t t = 0; t < trials; ++t) {
        const Vector v = rng.normal_vector(u.size());
        best = std::max({best, ratio(v), -ratio(v)});
    }
    return best;
}

PenaltyMatrix group_lasso_matrix(const GroupPartition& partition) {
    const Eigen::Index p = partition.dim();
    Matrix out = Matrix::Zero(p, p);
    for (const auto& g : partition.groups()) {
        const double v = 1.0 / std::sqrt(static_cast<double>(g.size()));
        for (Eigen::Index i : g)
            for (Eigen::Index j : g) out(i, j) = v;
    }
    return PenaltyMatrix::from_explicit(std::move(out));
}

double group_lasso_norm(const GroupPartition& partition, const Vector& w) {
    if (w.size() != partition.dim()) {
        throw InvalidInput("group_lasso_norm: weight length does not match the partition");
    }
    double total = 0.0;
    for (const auto& g : partition.groups()) {
        double sq = 0.0;
        for (Eigen::Index i : g) sq += w(i) * w(i);
        total += std::sqrt(sq);
    }
    return total;
}

namespace gram_presets {

Matrix correlated_pair() {
    Matrix g(3, 3);
    g << 1.0, 0.9, 0.1,
         0.9, 1.0, 0.1,
         0.1, 0.1, 1.0;
    return g;
}

Matrix chain() {
    Matrix g(3, 3);
    g << 1.0, 0.7, 0.49,
         0.7, 1.0, 0.7,
         0.49, 0.7, 1.0;
    return g;
}

Matrix perfect_block() {
    Matrix g(3, 3);
    g << 1.0, 1.0, 0.0,
         1.0, 1.0, 0.0,
         0.0, 0.0, 1.0;
    return g;
}

}  // namespace gram_presets

std::vector<BallPoint> unit_ball_slice(const PenaltyMatrix& gram, std::size_t resolution) {
    if (gram.dim() != 3) throw InvalidInput("unit_ball_slice: norm must act on R^3");
    if (resolution < 2) throw InvalidInput("unit_ball_slice: resolution must be >= 2");

    const std::size_t longitudes = 2 * resolution;
    std::vector<BallPoint> points;
    points.reserve((resolution - 2) * longitudes + 2);

    auto emit = [&](double a, double b, double c) {
        const Vector w = Eigen::Vector3d(a, b, c);
        const Vector on_ball = w / omega(gram, w);
        points.push_back({on_ball(0), on_ball(1), on_ball(2)});
    };

    for (std::size_t i = 0; i < resolution; ++i) {
        if (i == 0) {
            emit(1.0, 0.0, 0.0);
            continue;
        }
        if (i + 1 == resolution) {
            emit(-1.0, 0.0, 0.0);
            continue;
        }
        const double theta = std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(resolution - 1);
        for (std::size_t j = 0; j < longitudes; ++j) {
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) /
                               static_cast<double>(longitudes);
            emit(std::cos(theta), std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi));
        }
    }
    return points;
}

void write_ball_csv(std::ostream& out, const std::vector<BallPoint>& points) {
    out << "w1,w2,w3\n";
    for (const auto& pt : points) {
        out << csv::format_real(pt[0]) << ',' << csv::format_real(pt[1]) << ','
            << csv::format_real(pt[2]) << '\n';
    }
}

}  // namespace tracelasso
