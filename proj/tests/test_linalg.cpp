#include <doctest.h>

#include "oracles.hpp"
#include "tracelasso/errors.hpp"
#include "tracelasso/linalg.hpp"

using namespace tracelasso;
using doctest::Approx;

namespace {

bool parallel(const Vector& a, const Vector& b, double tol) {
    return std::abs(std::abs(a.dot(b)) - a.norm() * b.norm()) <= tol;
}

}  // namespace

TEST_CASE("sym_eigen: identity and diagonal") {
    const auto id = linalg::sym_eigen(Matrix::Identity(3, 3));
    CHECK(id.values.isApprox(Vector::Ones(3)));
    CHECK((id.vectors.transpose() * id.vectors).isIdentity(1e-12));

    Matrix d = Vector(Eigen::Vector2d(2, 5)).asDiagonal();
    const auto e = linalg::sym_eigen(d);
    CHECK(e.values(0) == Approx(5));
    CHECK(e.values(1) == Approx(2));
    CHECK(parallel(e.vectors.col(0), Eigen::Vector2d(0, 1), 1e-12));
    CHECK(parallel(e.vectors.col(1), Eigen::Vector2d(1, 0), 1e-12));
}

TEST_CASE("sym_eigen: 2x2 closed form") {
    Matrix a(2, 2);
    a << 2, 1, 1, 2;
    const auto e = linalg::sym_eigen(a);
    CHECK(e.values(0) == Approx(3).epsilon(1e-14));
    CHECK(e.values(1) == Approx(1).epsilon(1e-14));
    CHECK(parallel(e.vectors.col(0), Eigen::Vector2d(1, 1) / std::sqrt(2.0), 1e-12));
    CHECK(parallel(e.vectors.col(1), Eigen::Vector2d(1, -1) / std::sqrt(2.0), 1e-12));
}

TEST_CASE("sym_eigen: rejects bad input") {
    CHECK_THROWS_AS(linalg::sym_eigen(Matrix::Zero(2, 3)), InvalidInput);
    Matrix a(2, 2);
    a << 1, 2, 0, 1;
    CHECK_THROWS_AS(linalg::sym_eigen(a), InvalidInput);
    a << 1, std::nan(""), std::nan(""), 1;
    CHECK_THROWS_AS(linalg::sym_eigen(a), InvalidInput);
}

TEST_CASE("sym_eigen and svd invariants on random matrices") {
    Rng rng(11, Stream::probe);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 64;
        const Eigen::Index m = 1 + (trial * 7) % 64;
        const Matrix b = rng.normal_matrix(n, n);
        const Matrix a = b + b.transpose();
        const auto e = linalg::sym_eigen(a);
        for (Eigen::Index i = 1; i < n; ++i) CHECK(e.values(i - 1) >= e.values(i));
        CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm() <= 1e-10);
        CHECK((a - e.vectors * e.values.asDiagonal() * e.vectors.transpose()).norm() <=
              1e-8 * a.norm());

        const Matrix mm = rng.normal_matrix(n, m);
        const auto s = linalg::svd(mm);
        const Eigen::Index r = std::min(n, m);
        REQUIRE(s.singular.size() == r);
        CHECK(s.singular.minCoeff() >= 0.0);
        for (Eigen::Index i = 1; i < r; ++i) CHECK(s.singular(i - 1) >= s.singular(i));
        CHECK((s.left.transpose() * s.left - Matrix::Identity(r, r)).norm() <= 1e-10);
        CHECK((s.right.transpose() * s.right - Matrix::Identity(r, r)).norm() <= 1e-10);
        CHECK((mm - s.left * s.singular.asDiagonal() * s.right.transpose()).norm() <=
              1e-8 * mm.norm());
    }
}

TEST_CASE("svd: diagonal, zero and rank one") {
    Matrix d = Vector(Eigen::Vector2d(3, 1)).asDiagonal();
    CHECK(linalg::svd(d).singular.isApprox(Eigen::Vector2d(3, 1)));

    const auto z = linalg::svd(Matrix::Zero(2, 3));
    CHECK(z.singular.size() == 2);
    CHECK(z.singular.isZero());

    Rng rng(3, Stream::probe);
    Vector a = rng.normal_vector(5), b = rng.normal_vector(4);
    a.normalize();
    b.normalize();
    const auto s = linalg::svd(a * b.transpose());
    CHECK(s.singular(0) == Approx(1).epsilon(1e-12));
    CHECK(s.singular.tail(3).norm() <= 1e-12);
}

TEST_CASE("full_svd completes the bases") {
    Rng rng(5, Stream::probe);
    const Matrix m = rng.normal_matrix(3, 5);
    const auto f = linalg::full_svd(m);
    CHECK(f.left.rows() == 3);
    CHECK(f.left.cols() == 3);
    CHECK(f.right.rows() == 5);
    CHECK(f.right.cols() == 5);
    CHECK((f.right.transpose() * f.right).isIdentity(1e-12));
    Matrix s = Matrix::Zero(3, 5);
    s.diagonal() = f.singular;
    CHECK((f.left * s * f.right.transpose() - m).norm() <= 1e-12 * m.norm());
}

TEST_CASE("cg_solve: identity, 2x2 and warm start") {
    const linalg::LinearOperator id = [](const Vector& in, Vector& out) { out = in; };
    const Vector b = Eigen::Vector3d(1, -2, 4);
    CHECK(linalg::cg_solve(id, b, Vector::Zero(3)).x.isApprox(b));

    Matrix a(2, 2);
    a << 4, 1, 1, 3;
    const linalg::LinearOperator op = [&](const Vector& in, Vector& out) { out = a * in; };
    const Vector rhs = Eigen::Vector2d(1, 2);
    const auto res = linalg::cg_solve(op, rhs, Vector::Zero(2));
    CHECK(res.x(0) == Approx(1.0 / 11).epsilon(1e-12));
    CHECK(res.x(1) == Approx(7.0 / 11).epsilon(1e-12));

    const Vector exact = Eigen::Vector2d(1.0 / 11, 7.0 / 11);
    const auto warm = linalg::cg_solve(op, rhs, exact);
    CHECK(warm.iterations == 0);
    CHECK(warm.x == exact);

    CHECK(linalg::cg_solve(op, Vector::Zero(2), Eigen::Vector2d(3, 3)).x.isZero());
}

TEST_CASE("cg_solve: matches dense solve on random SPD systems") {
    Rng rng(17, Stream::probe);
    for (Eigen::Index n : {1, 2, 5, 16, 64, 128}) {
        const Matrix a = oracle::random_spd(rng, n, 1.0);
        const Vector b = rng.normal_vector(n);
        const linalg::LinearOperator op = [&](const Vector& in, Vector& out) { out = a * in; };
        const Vector x = linalg::cg_solve(op, b, Vector::Zero(n)).x;
        const Vector direct = a.ldlt().solve(b);
        CHECK((x - direct).norm() <= 1e-6 * direct.norm());
    }
}

TEST_CASE("cg_solve: iteration cap and bad input") {
    Rng rng(19, Stream::probe);
    const Eigen::Index n = 50;
    Vector spectrum(n);
    for (Eigen::Index i = 0; i < n; ++i) spectrum(i) = std::pow(10.0, 8.0 * i / (n - 1.0));
    const Matrix q = oracle::random_orthogonal(rng, n);
    const Matrix a = q * spectrum.asDiagonal() * q.transpose();
    const linalg::LinearOperator op = [&](const Vector& in, Vector& out) { out = a * in; };
    const Vector b = rng.normal_vector(n);
    try {
        linalg::cg_solve(op, b, Vector::Zero(n), 1e-14, 3);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.iterations() == 3);
        CHECK(e.residual() > 1e-14);
    }
    CHECK_THROWS_AS(linalg::cg_solve(op, b, Vector::Zero(n), 0.0), InvalidInput);
    CHECK_THROWS_AS(linalg::cg_solve(op, b, Vector::Zero(2)), InvalidInput);
}

TEST_CASE("psd_inverse_sqrt") {
    CHECK(linalg::psd_inverse_sqrt(Matrix::Zero(3, 3), 1.0).isIdentity(1e-15));

    Matrix three(1, 1);
    three << 3;
    CHECK(linalg::psd_inverse_sqrt(three, 1.0)(0, 0) == Approx(0.5));

    Matrix a(2, 2);
    a << 2, 1, 1, 2;
    Matrix u(2, 2);
    u << 1, 1, 1, -1;
    u /= std::sqrt(2.0);
    const Matrix expected =
        u * Vector(Eigen::Vector2d(1 / std::sqrt(3.5), 1 / std::sqrt(1.5))).asDiagonal() * u.transpose();
    CHECK((linalg::psd_inverse_sqrt(a, 0.5) - expected).norm() <= 1e-14);

    Matrix neg(2, 2);
    neg << 1, 0, 0, -0.1;
    CHECK_THROWS_AS(linalg::psd_inverse_sqrt(neg, 1.0), InvalidInput);
    CHECK_THROWS_AS(linalg::psd_inverse_sqrt(a, 0.0), InvalidInput);
}

TEST_CASE("psd_sqrt clips roundoff and rejects real negatives") {
    Rng rng(23, Stream::probe);
    const Matrix b = rng.normal_matrix(4, 2);
    const Matrix a = b * b.transpose();
    const Matrix root = linalg::psd_sqrt(a);
    CHECK((root * root - a).norm() <= 1e-10 * a.norm());

    Matrix neg = Matrix::Identity(2, 2);
    neg(1, 1) = -1e-3;
    CHECK_THROWS_AS(linalg::psd_sqrt(neg), InvalidInput);

    // Eigenvalues under the rank cutoff contribute nothing to the root.
    const Matrix tiny = Vector(Eigen::Vector3d(4.0, 1e-14, 1.0)).asDiagonal();
    CHECK(linalg::psd_sqrt(tiny)(1, 1) == Approx(1e-7));
    CHECK(linalg::psd_sqrt(tiny, 1e-10, 1e-12)(1, 1) == 0.0);
    CHECK(linalg::psd_sqrt(tiny, 1e-10, 1e-12)(2, 2) == Approx(1));
}

TEST_CASE("operator and trace norms") {
    CHECK(linalg::operator_norm(Matrix::Identity(3, 3)) == Approx(1));
    CHECK(linalg::trace_norm(Matrix::Identity(3, 3)) == Approx(3));
    Matrix d = Vector(Eigen::Vector2d(2, -5)).asDiagonal();
    CHECK(linalg::operator_norm(d) == Approx(5));
    CHECK(linalg::trace_norm(d) == Approx(7));

    Rng rng(29, Stream::probe);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix m = rng.normal_matrix(3, 4);
        const double tn = linalg::trace_norm(m);
        const double op = linalg::operator_norm(m);
        CHECK(tn == Approx(oracle::trace_norm(m)).epsilon(1e-12));
        CHECK(tn >= m.norm());
        CHECK(m.norm() >= op);
        CHECK(linalg::trace_norm(m.transpose()) == Approx(tn).epsilon(1e-12));
        CHECK(linalg::operator_norm(-2.5 * m) == Approx(2.5 * op).epsilon(1e-12));
    }
}
