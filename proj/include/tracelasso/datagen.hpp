#pragma once

#include <cstdint>
#include <string>

#include "tracelasso/linalg.hpp"

namespace tracelasso {

/// Covariance of the synthetic Gaussian designs. Every kind has a unit
/// diagonal.
struct CovarianceSpec {
    enum class Kind { identity, block_diagonal, toeplitz };

    Kind kind = Kind::identity;
    Eigen::Index p = 1;
    Eigen::Index block_size = 8;  // block_diagonal: base * I + within * 1 1^T per block
    double within = 0.8;
    double base = 0.2;
    double rho = 0.95;  // toeplitz: Sigma_ij = rho^|i-j|

    static CovarianceSpec identity(Eigen::Index p);
    static CovarianceSpec block_diagonal(Eigen::Index p, Eigen::Index block_size = 8,
                                         double within = 0.8, double base = 0.2);
    static CovarianceSpec toeplitz(Eigen::Index p, double rho = 0.95);

    /// "identity", "block" or "toeplitz".
    std::string name() const;
    static Kind parse_kind(const std::string& name);

    void validate() const;
};

Matrix build_sigma(const CovarianceSpec& spec);

/// n rows drawn i.i.d. from N(0, Sigma), deterministic in seed.
Matrix sample_design(Eigen::Index n, const CovarianceSpec& spec, std::uint64_t seed);

struct GroundTruth {
    Eigen::Index support_size = 0;
    Vector w_star;
    std::uint64_t seed = 0;
};

/// Support {0, ..., k-1}; w_i = 2 (b_i - 1/2) with b_i uniform on (0, 1).
GroundTruth sample_ground_truth(Eigen::Index p, Eigen::Index k, std::uint64_t seed);

/// y = X w* + eps with eps_i ~ N(0, sigma^2); sigma = 0 is noiseless.
Vector sample_response(const Matrix& x, const Vector& w_star, double sigma, std::uint64_t seed);

/// ||w_hat - w_star||_2
double estimation_error(const Vector& w_hat, const Vector& w_star);

/// Writes <stem>_X.csv, <stem>_y.csv, <stem>_w.csv and a <stem>.meta.json
/// sidecar recording the covariance, seed, sigma and support size.
void write_dataset(const std::string& stem, const Matrix& x, const Vector& y,
                   const GroundTruth& truth, const CovarianceSpec& spec, double sigma);

}  // namespace tracelasso
