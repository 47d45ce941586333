#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "tracelasso/linalg.hpp"

namespace tracelasso {

/// Stream identifiers mixed into the seed so that, for one user seed, each
/// kind of draw comes from its own independent sequence.
enum class Stream : std::uint32_t {
    design = 1,
    ground_truth = 2,
    noise = 3,
    restarts = 4,
    probe = 5,
    perturbation = 6,
};

/// Seedable generator whose output is bit-identical across platforms.
///
/// The engine is std::mt19937_64 (fully specified by the standard) seeded via
/// std::seed_seq (also fully specified). Uniform and normal variates are
/// derived here rather than through <random> distributions, whose algorithms
/// are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed, Stream stream = Stream::design, std::uint64_t substream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(substream),
                          static_cast<std::uint32_t>(substream >> 32)};
        engine_.seed(seq);
    }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    Vector normal_vector(Eigen::Index size) {
        Vector v(size);
        for (Eigen::Index i = 0; i < size; ++i) v(i) = normal();
        return v;
    }

    /// Row-major fill, so the draw order does not depend on storage layout.
    Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
        return m;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tracelasso
