#ifndef SHOOT_LINEAR_HPP
#define SHOOT_LINEAR_HPP

#include <cstdint>

#include "shoot/data.hpp"
#include "shoot/numeric.hpp"

namespace shoot {

/// Ordinary least squares fit with an intercept.
///
/// Coefficients are intercept-first (length n + 1). The coefficient covariance
/// is C = s^2 (X'X)^-1 over the intercept-augmented design X, and
/// `covariance_factor` is a lower-triangular L with L L' equal to C plus the
/// diagonal `jitter` that was needed to factorize it.
struct LinearModel {
    Vector coefficients;
    double residual_variance = 0.0;
    Matrix coefficient_covariance;
    Matrix covariance_factor;
    double jitter = 0.0;

    Eigen::Index n_features() const noexcept { return coefficients.size() - 1; }
};

/// Offsets D (columns D_i ~ N(0, C)) and their projection X~ D onto the training design.
struct OffsetSet {
    Matrix offsets;            // (n + 1) x k
    Matrix projected_offsets;  // m x k

    Eigen::Index count() const noexcept { return offsets.cols(); }
};

/// [1 | X].
Matrix augment(const Matrix& features);

/// Throws SingularDesignError when X~'X~ has condition estimate above 1e12
/// (or m <= n + 1).
LinearModel fit_ols(const Dataset& d);

/// Lower Cholesky factor of a PSD matrix with escalating diagonal jitter
/// 1e-12 .. 1e-6 times trace/dim. Zero matrices factorize to zero.
/// Returns the jitter actually added.
double factorize_covariance(const Matrix& cov, Matrix& factor);

/// Draws k offsets; column i comes from its own stream derived from (seed, i).
OffsetSet sample_offsets(const LinearModel& model, const Matrix& train_features, Eigen::Index k, std::uint64_t seed);

/// Raw offsets only (no projection).
Matrix sample_offset_columns(const LinearModel& model, Eigen::Index k, std::uint64_t seed);

Vector predict_linear(const LinearModel& model, const Matrix& features);

}  // namespace shoot

#endif  // SHOOT_LINEAR_HPP
