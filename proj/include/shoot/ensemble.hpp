#ifndef SHOOT_ENSEMBLE_HPP
#define SHOOT_ENSEMBLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shoot/data.hpp"
#include "shoot/linear.hpp"
#include "shoot/nuopt.hpp"
#include "shoot/tree.hpp"

namespace shoot {

struct SRConfig {
    Eigen::Index k = 100;
    std::optional<double> fixed_nu;  // nullopt = choose nu by minimizing the objective
    TreeParams tree_params;
    std::uint64_t seed = 0;
    NuSearch nu_search;
    unsigned threads = 0;  // 0 = hardware concurrency; results do not depend on it
};

/// Shooting Regressor.
///
/// Each estimator i starts from the linear prediction X~(B + nu D_i), learns the
/// gradient target X~(B + nu D_i) - Y with a regression tree, and subtracts its
/// estimate. The ensemble output is the mean of the k corrected predictions.
struct ShootingEnsemble {
    LinearModel linear;
    Matrix offsets;  // (n + 1) x k
    double nu = 0.0;
    std::vector<RegressionTree> trees;
    std::optional<NuResult> nu_diagnostics;
    std::vector<std::string> warnings;

    Eigen::Index k() const noexcept { return offsets.cols(); }
    Eigen::Index n_features() const noexcept { return linear.n_features(); }
};

/// m x k matrix with column i = X~(B + nu D_i) - Y = z + nu X~ D_i.
Matrix gradient_targets(const LinearModel& linear, const OffsetSet& offsets, double nu, const Dataset& d);

/// Initial prediction vectors X~(B + nu D_i) as columns.
Matrix initial_predictions(const LinearModel& linear, const Matrix& offsets, double nu, const Matrix& features);

/// Linear fit, sampled offsets and residual z = X~B - Y exactly as fit_shooting derives them.
struct ShootingSetup {
    LinearModel linear;
    OffsetSet offsets;
    Vector residual;
};

ShootingSetup prepare_shooting(const Dataset& train, const SRConfig& config);

/// Objective cache over the gradient targets z + nu X~D_i (directions P = -X~D).
NuCache shooting_nu_cache(const ShootingSetup& setup);

ShootingEnsemble fit_shooting(const Dataset& train, const SRConfig& config);

/// Per-estimator corrected predictions X~(B + nu D_i) - G_i(X) as columns.
Matrix predict_per_estimator(const ShootingEnsemble& ensemble, const Matrix& features);

/// Compensated mean of the per-estimator predictions.
Vector predict(const ShootingEnsemble& ensemble, const Matrix& features);

struct OracleOutput {
    Matrix per_estimator;
    Vector aggregate;
};

/// Replaces each tree by the exact gradient column; every estimator then lands on Y.
OracleOutput oracle_predict(const LinearModel& linear, const OffsetSet& offsets, double nu, const Dataset& d);

struct PcaProjection {
    std::vector<double> initial_coord;
    std::vector<double> terminal_coord;
    double target_coord = 0.0;
};

/// Projects the k initial vectors, the k terminal vectors and Y onto the first
/// principal component of that collection of 2k + 1 vectors (power iteration).
PcaProjection pca_project(const Matrix& initial, const Matrix& terminal, const Vector& target);

PcaProjection pca_project_diagnostics(const ShootingEnsemble& ensemble, const Dataset& d);

}  // namespace shoot

#endif  // SHOOT_ENSEMBLE_HPP
