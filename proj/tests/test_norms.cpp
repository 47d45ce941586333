#include <doctest.h>

#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "tracelasso/errors.hpp"
#include "tracelasso/norms.hpp"

using namespace tracelasso;
using doctest::Approx;

namespace {

// Gram root computed with an SVD of G instead of an eigendecomposition.
double omega_via_gram_svd(const Matrix& g, const Vector& w) {
    Eigen::JacobiSVD<Matrix> dec(g, Eigen::ComputeFullU);
    const Matrix root = dec.matrixU() * dec.singularValues().cwiseSqrt().asDiagonal() *
                        dec.matrixU().transpose();
    return oracle::trace_norm(root * w.asDiagonal());
}

}  // namespace

TEST_CASE("omega: l1, l2 and a correlated Gram") {
    const auto id = PenaltyMatrix::from_explicit(Matrix::Identity(3, 3));
    CHECK(omega(id, Eigen::Vector3d(1, -2, 3)) == Approx(6));

    const auto ones = PenaltyMatrix::from_explicit(Matrix::Ones(1, 2));
    CHECK(omega(ones, Eigen::Vector2d(3, 4)) == Approx(5));

    const Matrix g = gram_presets::correlated_pair();
    const auto pg = PenaltyMatrix::from_gram(g);
    CHECK(pg.is_gram());
    const Vector w = Vector::Ones(3);
    CHECK(omega(pg, w) == Approx(omega_via_gram_svd(g, w)).epsilon(1e-12));
}

TEST_CASE("PenaltyMatrix validation") {
    Matrix p(2, 2);
    p << 1, 0, 0, 2;
    CHECK_THROWS_AS(PenaltyMatrix::from_explicit(p), InvalidInput);
    Matrix g(2, 2);
    g << 1, 0.5, 0.5, 1.1;
    CHECK_THROWS_AS(PenaltyMatrix::from_gram(g), InvalidInput);
    g << 1, 2, 2, 1;  // unit diagonal but indefinite
    CHECK_THROWS_AS(PenaltyMatrix::from_gram(g), InvalidInput);
    g << 1, 0.5, 0.4, 1;
    CHECK_THROWS_AS(PenaltyMatrix::from_gram(g), InvalidInput);
    CHECK_THROWS_AS(PenaltyMatrix::from_gram(Matrix::Identity(2, 3)), InvalidInput);

    const auto id = PenaltyMatrix::from_explicit(Matrix::Identity(3, 3));
    CHECK_THROWS_AS(omega(id, Vector::Ones(2)), InvalidInput);
}

TEST_CASE("Gram presets are valid Gram matrices") {
    for (const Matrix& g : {gram_presets::correlated_pair(), gram_presets::chain(),
                            gram_presets::perfect_block()}) {
        const auto p = PenaltyMatrix::from_gram(g);
        CHECK((p.factor().transpose() * p.factor() - g).norm() <= 1e-12);
    }
    CHECK(gram_presets::chain()(0, 2) == 0.49);
    CHECK(gram_presets::perfect_block()(0, 1) == 1.0);
}

TEST_CASE("omega_gram_equivalent") {
    CHECK(omega_gram_equivalent(PenaltyMatrix::from_explicit(Matrix::Identity(2, 2)),
                                Eigen::Vector2d(1, 1)) == Approx(2));
    CHECK(omega_gram_equivalent(PenaltyMatrix::from_explicit(Matrix::Ones(1, 3)),
                                Eigen::Vector3d(1, 2, 2)) == Approx(3));

    Rng rng(31, Stream::probe);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = PenaltyMatrix::from_explicit(oracle::unit_columns(rng, 5, 8));
        const Vector w = rng.normal_vector(8);
        CHECK(omega_gram_equivalent(p, w) == Approx(omega(p, w)).epsilon(1e-8));
    }

    // Rank-deficient Grams: roundoff in the zero eigenvalues must not leak
    // into the value.
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix p = oracle::unit_columns(rng, 2, 12);
        const Vector w = rng.normal_vector(12);
        const double expl = omega(PenaltyMatrix::from_explicit(p), w);
        CHECK(omega(PenaltyMatrix::from_gram(p.transpose() * p), w) == Approx(expl).epsilon(1e-12));
    }
}

TEST_CASE("trace_lasso special cases") {
    // Orthogonal columns of different lengths: reweighted l1.
    Matrix x = Matrix::Zero(4, 3);
    x(0, 0) = 2;
    x(1, 1) = -3;
    x(2, 2) = 0.5;
    x(3, 2) = 0.5;
    const Vector w = Eigen::Vector3d(1, -2, 4);
    const Vector lengths = x.colwise().norm().transpose();
    CHECK(trace_lasso(x, w) == Approx(lengths.dot(w.cwiseAbs())));
    CHECK(trace_lasso(x, w, true) == Approx(w.lpNorm<1>()));

    // Identical columns: the column norm times ||w||_2.
    Rng rng(37, Stream::probe);
    const Vector c = rng.normal_vector(6);
    const Matrix same = c.replicate(1, 4);
    const Vector v = rng.normal_vector(4);
    CHECK(trace_lasso(same, v) == Approx(c.norm() * v.norm()).epsilon(1e-12));

    const Matrix r = rng.normal_matrix(6, 4);
    CHECK(trace_lasso(r, v) == Approx(oracle::trace_norm(r * v.asDiagonal())).epsilon(1e-12));

    Matrix zero_col = r;
    zero_col.col(2).setZero();
    CHECK_THROWS_AS(trace_lasso(zero_col, v, true), InvalidInput);
    CHECK_NOTHROW(trace_lasso(zero_col, v, false));
}

TEST_CASE("norm axioms, l2-l1 sandwich and permutation equivariance") {
    Rng rng(41, Stream::probe);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index k = 1 + trial % 7;
        const Eigen::Index p = 1 + (trial * 3) % 9;
        const auto pm = PenaltyMatrix::from_explicit(oracle::unit_columns(rng, k, p));
        const Vector w = rng.normal_vector(p);
        const Vector v = rng.normal_vector(p);
        const double c = 3.0 * rng.normal();
        const double ow = omega(pm, w);
        CHECK(std::abs(omega(pm, c * w) - std::abs(c) * ow) <= 1e-10 * std::max(1.0, std::abs(c) * ow));
        CHECK(omega(pm, w + v) <= ow + omega(pm, v) + 1e-10);
        CHECK(w.norm() - 1e-10 <= ow);
        CHECK(ow <= w.lpNorm<1>() + 1e-10);
        CHECK(ow > 0.0);

        std::vector<int> perm(static_cast<std::size_t>(p));
        std::iota(perm.begin(), perm.end(), 0);
        for (Eigen::Index i = p - 1; i > 0; --i) {
            const auto j = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(i + 1));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
        Eigen::PermutationMatrix<Eigen::Dynamic> pi(p);
        for (Eigen::Index i = 0; i < p; ++i) pi.indices()(i) = perm[static_cast<std::size_t>(i)];
        const auto permuted = PenaltyMatrix::from_explicit(pm.matrix() * pi);
        CHECK(omega(permuted, pi.transpose() * w) == Approx(ow).epsilon(1e-10));
    }
    const auto pm = PenaltyMatrix::from_explicit(oracle::unit_columns(rng, 3, 5));
    CHECK(omega(pm, Vector::Zero(5)) == 0.0);
}

TEST_CASE("dual norm bounds") {
    const auto id = PenaltyMatrix::from_explicit(Matrix::Identity(3, 3));
    CHECK(dual_norm_upper(id, Eigen::Vector3d(1, -4, 2)) == Approx(4));
    const auto ones = PenaltyMatrix::from_explicit(Matrix::Ones(1, 2));
    CHECK(dual_norm_upper(ones, Eigen::Vector2d(3, 4)) == Approx(5));

    const auto id2 = PenaltyMatrix::from_explicit(Matrix::Identity(2, 2));
    CHECK(dual_norm_lower_estimate(id2, Eigen::Vector2d(0, 3), 1) == Approx(3));
    CHECK(dual_norm_lower_estimate(id2, Vector::Zero(2), 5) == 0.0);
    CHECK_THROWS_AS(dual_norm_lower_estimate(id2, Eigen::Vector2d(1, 1), 0), InvalidInput);

    Rng rng(43, Stream::probe);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix p = oracle::unit_columns(rng, 4, 6);
        const auto pm = PenaltyMatrix::from_explicit(p);
        const Vector u = rng.normal_vector(6);
        const double upper = dual_norm_upper(pm, u);
        CHECK(u.lpNorm<Eigen::Infinity>() <= upper + 1e-12);
        CHECK(upper <= oracle::operator_norm(p) * u.lpNorm<Eigen::Infinity>() + 1e-12);
        CHECK(dual_norm_lower_estimate(pm, u, 50, trial) <= upper + 1e-12);

        const auto gram = pm.to_gram();
        CHECK(dual_norm_upper(gram, u) == Approx(upper).epsilon(1e-8));
    }
}

TEST_CASE("group Lasso embedding") {
    const GroupPartition singletons({{0}, {1}}, 2);
    CHECK(group_lasso_matrix(singletons).matrix().isIdentity());

    const GroupPartition pair({{0, 1}}, 2);
    CHECK((group_lasso_matrix(pair).matrix().array() - 1 / std::sqrt(2.0)).abs().maxCoeff() <= 1e-15);

    const GroupPartition mixed({{0, 1}, {2}}, 3);
    CHECK(omega(group_lasso_matrix(mixed), Eigen::Vector3d(3, 4, 5)) == Approx(10));
    CHECK(group_lasso_norm(mixed, Eigen::Vector3d(3, 4, 5)) == Approx(10));

    Rng rng(47, Stream::probe);
    const auto part = GroupPartition::contiguous({3, 1, 4, 2});
    CHECK(part.dim() == 10);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector w = rng.normal_vector(10);
        CHECK(omega(group_lasso_matrix(part), w) ==
              Approx(group_lasso_norm(part, w)).epsilon(1e-10));
    }

    CHECK_THROWS_AS(GroupPartition({{0, 1}, {1}}, 2), InvalidInput);
    CHECK_THROWS_AS(GroupPartition({{0}}, 2), InvalidInput);
    CHECK_THROWS_AS(GroupPartition({{0, 1}, {}}, 2), InvalidInput);
    CHECK_THROWS_AS(GroupPartition({{0, 2}}, 2), InvalidInput);
}

TEST_CASE("unit_ball_slice") {
    const auto l1 = unit_ball_slice(PenaltyMatrix::from_gram(Matrix::Identity(3, 3)), 9);
    CHECK(l1.size() == 7 * 18 + 2);
    bool has_vertex = false;
    for (const auto& pt : l1) {
        CHECK(std::abs(pt[0]) + std::abs(pt[1]) + std::abs(pt[2]) == Approx(1).epsilon(1e-12));
        if (std::abs(pt[0] - 1.0) + std::abs(pt[1]) + std::abs(pt[2]) <= 1e-12) has_vertex = true;
    }
    CHECK(has_vertex);

    const auto block = unit_ball_slice(PenaltyMatrix::from_gram(gram_presets::perfect_block()), 7);
    for (const auto& pt : block) {
        CHECK(std::hypot(pt[0], pt[1]) + std::abs(pt[2]) == Approx(1).epsilon(1e-6));
    }

    CHECK_THROWS_AS(unit_ball_slice(PenaltyMatrix::from_gram(Matrix::Identity(3, 3)), 1), InvalidInput);
    CHECK_THROWS_AS(unit_ball_slice(PenaltyMatrix::from_gram(Matrix::Identity(2, 2)), 5), InvalidInput);

    std::ostringstream out;
    write_ball_csv(out, {{1.0, 0.0, 0.0}});
    CHECK(out.str() == "w1,w2,w3\n1,0,0\n");
}
