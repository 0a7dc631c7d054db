#ifndef SHOOT_TREE_HPP
#define SHOOT_TREE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "shoot/numeric.hpp"

namespace shoot {

struct TreeParams {
    std::optional<int> max_depth;               // nullopt = unlimited
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    std::optional<int> feature_subsample;       // candidate features per split; nullopt = all
    std::uint64_t rng_seed = 0;                 // used only when feature_subsample < n
};

/// Flat CART regression tree. A node is a leaf when `feature < 0`.
/// Rows with x[feature] <= threshold descend left.
class RegressionTree {
public:
    struct Node {
        std::int32_t feature = -1;
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;
        std::int64_t n_samples = 0;

        bool is_leaf() const noexcept { return feature < 0; }
    };

    RegressionTree() = default;
    RegressionTree(std::vector<Node> nodes, Eigen::Index n_features);

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    Eigen::Index n_features() const noexcept { return n_features_; }
    int depth() const noexcept { return depth_; }
    std::size_t leaf_count() const noexcept;

    /// Index of the leaf reached by `row`.
    std::int32_t apply(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

    double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
        return nodes_[static_cast<std::size_t>(apply(row))].value;
    }

    Vector predict(const Matrix& features) const;

private:
    std::vector<Node> nodes_;
    Eigen::Index n_features_ = 0;
    int depth_ = 0;
};

/// Greedy top-down squared-error tree. Splits are taken at midpoints between
/// consecutive distinct values; ties go to the lowest feature, then lowest threshold.
RegressionTree fit_tree(const Matrix& features, const Vector& targets, const TreeParams& params);

}  // namespace shoot

#endif  // SHOOT_TREE_HPP
