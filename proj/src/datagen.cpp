#include "tracelasso/datagen.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tracelasso/csv.hpp"
#include "tracelasso/errors.hpp"
#include "tracelasso/random.hpp"

namespace tracelasso {

CovarianceSpec CovarianceSpec::identity(Eigen::Index p) {
    CovarianceSpec s;
    s.kind = Kind::identity;
    s.p = p;
    return s;
}

CovarianceSpec CovarianceSpec::block_diagonal(Eigen::Index p, Eigen::Index block_size,
                                              double within, double base) {
    CovarianceSpec s;
    s.kind = Kind::block_diagonal;
    s.p = p;
    s.block_size = block_size;
    s.within = within;
    s.base = base;
    return s;
}

CovarianceSpec CovarianceSpec::toeplitz(Eigen::Index p, double rho) {
    CovarianceSpec s;
    s.kind = Kind::toeplitz;
    s.p = p;
    s.rho = rho;
    return s;
}

std::string CovarianceSpec::name() const {
    switch (kind) {
        case Kind::identity: return "identity";
        case Kind::block_diagonal: return "block";
        case Kind::toeplitz: return "toeplitz";
    }
    return "unknown";
}

CovarianceSpec::Kind CovarianceSpec::parse_kind(const std::string& name) {
    if (name == "identity") return Kind::identity;
    if (name == "block") return Kind::block_diagonal;
    if (name == "toeplitz") return Kind::toeplitz;
    throw InvalidInput("unknown design '" + name + "' (expected identity, block or toeplitz)");
}

void CovarianceSpec::validate() const {
    if (p < 1) throw InvalidInput("CovarianceSpec: p must be positive");
    switch (kind) {
        case Kind::identity:
            break;
        case Kind::block_diagonal:
            if (block_size < 1 || p % block_size != 0) {
                throw InvalidInput("CovarianceSpec: block size must divide p");
            }
            if (std::abs(within + base - 1.0) > 1e-12) {
                throw InvalidInput("CovarianceSpec: within + base must equal 1 (unit diagonal)");
            }
            if (base < 0.0 || base + within * static_cast<double>(block_size) < 0.0) {
                throw InvalidInput("CovarianceSpec: block is not positive semidefinite");
            }
            break;
        case Kind::toeplitz:
            if (!(std::abs(rho) < 1.0)) throw InvalidInput("CovarianceSpec: need |rho| < 1");
            break;
    }
}

Matrix build_sigma(const CovarianceSpec& spec) {
    spec.validate();
    const Eigen::Index p = spec.p;
    Matrix sigma = Matrix::Identity(p, p);
    switch (spec.kind) {
        case CovarianceSpec::Kind::identity:
            break;
        case CovarianceSpec::Kind::block_diagonal:
            for (Eigen::Index start = 0; start < p; start += spec.block_size) {
                auto block = sigma.block(start, start, spec.block_size, spec.block_size);
                block.setConstant(spec.within);
                block.diagonal().setConstant(spec.base + spec.within);
            }
            break;
        case CovarianceSpec::Kind::toeplitz:
            for (Eigen::Index i = 0; i < p; ++i)
                for (Eigen::Index j = 0; j < p; ++j)
                    sigma(i, j) = std::pow(spec.rho, static_cast<double>(std::abs(i - j)));
            break;
    }
    if (linalg::sym_eigen(sigma).values.minCoeff() < -1e-10) {
        throw std::logic_error("build_sigma: covariance is not positive semidefinite");
    }
    return sigma;
}

Matrix sample_design(Eigen::Index n, const CovarianceSpec& spec, std::uint64_t seed) {
    if (n < 1) throw InvalidInput("sample_design: n must be positive");
    const Matrix sigma = build_sigma(spec);

    Matrix factor;  // sigma = factor * factor^T
    const Eigen::LLT<Matrix> chol(sigma);
    if (chol.info() == Eigen::Success) {
        factor = chol.matrixL();
    } else {
        factor = linalg::psd_sqrt(sigma);
    }

    Rng rng(seed, Stream::design);
    const Matrix z = rng.normal_matrix(n, spec.p);
    return z * factor.transpose();
}

GroundTruth sample_ground_truth(Eigen::Index p, Eigen::Index k, std::uint64_t seed) {
    if (k < 1 || k > p) throw InvalidInput("sample_ground_truth: need 1 <= k <= p");
    GroundTruth out;
    out.support_size = k;
    out.seed = seed;
    out.w_star = Vector::Zero(p);
    Rng rng(seed, Stream::ground_truth, static_cast<std::uint64_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) out.w_star(i) = 2.0 * (rng.uniform() - 0.5);
    return out;
}

Vector sample_response(const Matrix& x, const Vector& w_star, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw InvalidInput("sample_response: sigma must be nonnegative");
    if (w_star.size() != x.cols()) throw InvalidInput("sample_response: weight length mismatch");
    Vector y = x * w_star;
    if (sigma > 0.0) {
        Rng rng(seed, Stream::noise);
        y += sigma * rng.normal_vector(x.rows());
    }
    return y;
}

double estimation_error(const Vector& w_hat, const Vector& w_star) {
    if (w_hat.size() != w_star.size()) throw InvalidInput("estimation_error: length mismatch");
    return (w_hat - w_star).norm();
}

void write_dataset(const std::string& stem, const Matrix& x, const Vector& y,
                   const GroundTruth& truth, const CovarianceSpec& spec, double sigma) {
    auto open = [](const std::string& path) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        return out;
    };
    {
        auto out = open(stem + "_X.csv");
        csv::write_matrix(out, x, "x");
    }
    {
        auto out = open(stem + "_y.csv");
        csv::write_matrix(out, y, "y");
    }
    {
        auto out = open(stem + "_w.csv");
        csv::write_coefficients(out, truth.w_star);
    }
    nlohmann::json meta = {
        {"design", spec.name()},
        {"n", x.rows()},
        {"p", x.cols()},
        {"k", truth.support_size},
        {"seed", truth.seed},
        {"sigma", sigma},
    };
    if (spec.kind == CovarianceSpec::Kind::block_diagonal) {
        meta["block_size"] = spec.block_size;
        meta["within"] = spec.within;
        meta["base"] = spec.base;
    } else if (spec.kind == CovarianceSpec::Kind::toeplitz) {
        meta["rho"] = spec.rho;
    }
    auto out = open(stem + ".meta.json");
    out << meta.dump(2) << '\n';
}

}  // namespace tracelasso
