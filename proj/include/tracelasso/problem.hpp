#pragma once

#include <cstddef>
#include <vector>

#include "tracelasso/linalg.hpp"

namespace tracelasso {

/// Square-loss regression data: design X (n x p) and responses y (n).
class Problem {
public:
    Problem(Matrix x, Vector y);

    const Matrix& x() const noexcept { return x_; }
    const Vector& y() const noexcept { return y_; }
    Eigen::Index n() const noexcept { return x_.rows(); }
    Eigen::Index p() const noexcept { return x_.cols(); }

    /// 0.5 * ||y - X w||^2
    double loss(const Vector& w) const;

private:
    Matrix x_;
    Vector y_;
};

struct SolveResult {
    Vector w;
    /// Method-specific per-iteration objective values (see each solver).
    std::vector<double> objective_trace;
    bool converged = false;
    std::size_t iterations = 0;
    /// Last stopping statistic: relative change in w, or the duality gap.
    double final_residual = 0.0;
    /// Unsmoothed objective of the returned w.
    double objective = 0.0;
};

}  // namespace tracelasso
