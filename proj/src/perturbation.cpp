#include "tracelasso/perturbation.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "tracelasso/csv.hpp"
#include "tracelasso/errors.hpp"

namespace tracelasso {

ExpansionResult trace_norm_expansion(const Matrix& m, const Matrix& delta, double rank_tol) {
    linalg::require_finite(m, "trace_norm_expansion");
    linalg::require_finite(delta, "trace_norm_expansion");
    if (m.rows() != delta.rows() || m.cols() != delta.cols()) {
        throw InvalidInput("trace_norm_expansion: M and Delta differ in shape");
    }

    const linalg::FullSvd dec = linalg::full_svd(m);
    const Eigen::Index n = m.rows();
    const Eigen::Index p = m.cols();
    const double s_max = dec.singular.size() ? dec.singular(0) : 0.0;
    Eigen::Index r = 0;
    while (r < dec.singular.size() && dec.singular(r) > rank_tol * s_max) ++r;

    if (r > 0) {
        const double gap = dec.singular(r - 1) / 4.0;
        const double size = linalg::operator_norm(delta);
        if (!(size < gap)) {
            throw DomainError("trace_norm_expansion: ||Delta||_op = " + std::to_string(size) +
                              " is not below s_r / 4 = " + std::to_string(gap));
        }
    }

    const auto u = dec.left.leftCols(r);
    const auto v = dec.right.leftCols(r);
    const auto u0 = dec.left.rightCols(n - r);
    const auto v0 = dec.right.rightCols(p - r);
    const Vector s = dec.singular.head(r);

    ExpansionResult out;
    out.zeroth = s.sum();

    const Matrix a = u.transpose() * delta * v;  // u_j^T D v_k
    out.first = a.trace();

    double second = 0.0;
    for (Eigen::Index j = 0; j < r; ++j) {
        for (Eigen::Index k = 0; k < r; ++k) {
            const double skew = a(j, k) - a(k, j);
            second += skew * skew / (4.0 * (s(j) + s(k)));
        }
    }
    const Matrix b = u0.transpose() * delta * v;  // u_{0i}^T D v_k
    const Matrix c = u.transpose() * delta * v0;  // u_k^T D v_{0j}
    for (Eigen::Index k = 0; k < r; ++k) {
        second += (b.col(k).squaredNorm() + c.row(k).squaredNorm()) / (2.0 * s(k));
    }
    out.second = second;

    if (n > r && p > r) {
        const Matrix q = u0.transpose() * delta * v0 - b * s.cwiseInverse().asDiagonal() * c;
        out.q_term = linalg::trace_norm(q);
    }

    out.total = out.zeroth + out.first + out.second + out.q_term;
    return out;
}

double lasso_neighborhood_expansion(const Vector& w, const Matrix& delta) {
    const Eigen::Index p = w.size();
    if (delta.rows() != p || delta.cols() != p) {
        throw InvalidInput("lasso_neighborhood_expansion: Delta must be p x p");
    }
    linalg::require_finite(delta, "lasso_neighborhood_expansion");
    const double scale = std::max(1.0, delta.cwiseAbs().maxCoeff());
    if ((delta - delta.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InvalidInput("lasso_neighborhood_expansion: Delta must be symmetric");
    }

    const Vector a = w.cwiseAbs();
    double total = a.sum() + delta.diagonal().dot(a);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            const double denom = a(i) + a(j);
            if (denom == 0.0) continue;
            const double diff = a(i) - a(j);
            total += delta(i, j) * delta(i, j) * diff * diff / (4.0 * denom);
        }
    }
    return total;
}

namespace {

ResidualRow make_row(double t, double residual) {
    return {t, residual, t == 0.0 ? 0.0 : residual / (t * t)};
}

}  // namespace

std::vector<ResidualRow> expansion_residual_report(const Matrix& m, const Matrix& delta,
                                                   const std::vector<double>& t_grid) {
    std::vector<ResidualRow> rows;
    for (double t : t_grid) {
        const Matrix step = t * delta;
        const double expansion = trace_norm_expansion(m, step).total;
        rows.push_back(make_row(t, std::abs(linalg::trace_norm(m + step) - expansion)));
    }
    return rows;
}

std::vector<ResidualRow> lasso_expansion_residual_report(const Vector& w, const Matrix& delta,
                                                         const std::vector<double>& t_grid) {
    std::vector<ResidualRow> rows;
    const Eigen::Index p = w.size();
    for (double t : t_grid) {
        const Matrix step = t * delta;
        const double expansion = lasso_neighborhood_expansion(w, step);
        const Matrix perturbed = (Matrix::Identity(p, p) + step) * w.asDiagonal();
        rows.push_back(make_row(t, std::abs(linalg::trace_norm(perturbed) - expansion)));
    }
    return rows;
}

void write_residual_csv(std::ostream& out, const std::vector<ResidualRow>& rows) {
    out << "t,residual,residual_over_t2\n";
    for (const auto& row : rows) {
        out << csv::format_real(row.t) << ',' << csv::format_real(row.residual) << ','
            << csv::format_real(row.residual_over_t2) << '\n';
    }
}

}  // namespace tracelasso
