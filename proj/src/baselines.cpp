#include "shoot/baselines.hpp"

#include <string>

#include "shoot/error.hpp"

namespace shoot {

namespace {

constexpr std::uint64_t kBootstrapStream = 1;
constexpr std::uint64_t kTreeStream = 2;

}  // namespace

Vector RandomForest::predict(const Matrix& features) const {
    if (trees.empty()) throw DataError("random forest has no trees");
    Matrix per_tree(features.rows(), static_cast<Eigen::Index>(trees.size()));
    for (std::size_t t = 0; t < trees.size(); ++t) per_tree.col(static_cast<Eigen::Index>(t)) = trees[t].predict(features);
    return compensated_row_mean(per_tree);
}

RandomForest fit_rf(const Dataset& train, const RFConfig& config) {
    if (config.n_trees < 1) throw ConfigError("random forest: n_trees must be >= 1");
    const Eigen::Index m = train.rows();

    RandomForest forest;
    forest.trees.resize(static_cast<std::size_t>(config.n_trees));
    parallel_for(forest.trees.size(), config.threads, [&](std::size_t t) {
        TreeParams params = config.tree_params;
        params.rng_seed = derive_seed(config.seed, kTreeStream, t);
        if (!config.bootstrap) {
            forest.trees[t] = fit_tree(train.features(), train.target(), params);
            return;
        }
        Rng rng(derive_seed(config.seed, kBootstrapStream, t));
        std::uniform_int_distribution<Eigen::Index> draw(0, m - 1);
        Matrix x(m, train.cols());
        Vector y(m);
        for (Eigen::Index r = 0; r < m; ++r) {
            const Eigen::Index src = draw(rng);
            x.row(r) = train.features().row(src);
            y(r) = train.target()(src);
        }
        forest.trees[t] = fit_tree(x, y, params);
    });
    return forest;
}

Vector GradientBoosting::predict(const Matrix& features) const {
    Vector out = Vector::Constant(features.rows(), initial);
    for (const auto& tree : stages) out += learning_rate * tree.predict(features);
    return out;
}

Matrix GradientBoosting::staged_predict(const Matrix& features) const {
    Matrix out(features.rows(), static_cast<Eigen::Index>(stages.size()) + 1);
    Vector f = Vector::Constant(features.rows(), initial);
    out.col(0) = f;
    for (std::size_t s = 0; s < stages.size(); ++s) {
        f += learning_rate * stages[s].predict(features);
        out.col(static_cast<Eigen::Index>(s) + 1) = f;
    }
    return out;
}

GradientBoosting fit_gbm(const Dataset& train, const GBMConfig& config) {
    if (config.n_stages < 1) throw ConfigError("gbm: n_stages must be >= 1");
    if (!(config.learning_rate > 0.0 && config.learning_rate <= 1.0))
        throw ConfigError("gbm: learning_rate must lie in (0, 1]");

    GradientBoosting model;
    model.initial = train.target().mean();
    model.learning_rate = config.learning_rate;
    model.stages.reserve(static_cast<std::size_t>(config.n_stages));

    Vector fitted = Vector::Constant(train.rows(), model.initial);
    for (int s = 0; s < config.n_stages; ++s) {
        TreeParams params = config.tree_params;
        params.rng_seed = derive_seed(config.seed, kTreeStream, static_cast<std::uint64_t>(s));
        const Vector residual = train.target() - fitted;
        model.stages.push_back(fit_tree(train.features(), residual, params));
        fitted += model.learning_rate * model.stages.back().predict(train.features());
    }
    return model;
}

}  // namespace shoot
