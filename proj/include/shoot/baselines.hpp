#ifndef SHOOT_BASELINES_HPP
#define SHOOT_BASELINES_HPP

#include <cstdint>
#include <vector>

#include "shoot/data.hpp"
#include "shoot/tree.hpp"

namespace shoot {

struct RFConfig {
    int n_trees = 100;
    bool bootstrap = true;
    TreeParams tree_params;  // unlimited depth, all features
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct RandomForest {
    std::vector<RegressionTree> trees;

    Vector predict(const Matrix& features) const;
};

/// Bagged regression trees; tree i resamples from its own (seed, i) stream.
RandomForest fit_rf(const Dataset& train, const RFConfig& config);

struct GBMConfig {
    int n_stages = 100;
    double learning_rate = 0.1;
    TreeParams tree_params = [] {
        TreeParams p;
        p.max_depth = 3;
        return p;
    }();
    std::uint64_t seed = 0;
};

struct GradientBoosting {
    double initial = 0.0;
    double learning_rate = 0.1;
    std::vector<RegressionTree> stages;

    Vector predict(const Matrix& features) const;

    /// Predictions after each stage count 0..n_stages (column s uses the first s stages).
    Matrix staged_predict(const Matrix& features) const;
};

/// Squared-error gradient boosting: F_0 = mean(Y), F_s = F_{s-1} + rate * tree_s(residual).
GradientBoosting fit_gbm(const Dataset& train, const GBMConfig& config);

}  // namespace shoot

#endif  // SHOOT_BASELINES_HPP
