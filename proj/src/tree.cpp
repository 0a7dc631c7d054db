#include "shoot/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "shoot/error.hpp"

namespace shoot {

RegressionTree::RegressionTree(std::vector<Node> nodes, Eigen::Index n_features)
    : nodes_(std::move(nodes)), n_features_(n_features) {
    if (nodes_.empty()) throw DataError("regression tree needs at least one node");
    // depth by breadth-first walk; also validates child links
    std::vector<std::pair<std::int32_t, int>> stack{{0, 0}};
    std::size_t visited = 0;
    while (!stack.empty()) {
        const auto [id, d] = stack.back();
        stack.pop_back();
        if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size() || ++visited > nodes_.size())
            throw DataError("regression tree has an invalid node link");
        depth_ = std::max(depth_, d);
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        if (!n.is_leaf()) {
            if (n.feature >= n_features_) throw DataError("regression tree split feature out of range");
            stack.emplace_back(n.left, d + 1);
            stack.emplace_back(n.right, d + 1);
        }
    }
}

std::size_t RegressionTree::leaf_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::int32_t RegressionTree::apply(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    std::int32_t id = 0;
    for (;;) {
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        if (n.is_leaf()) return id;
        id = row(n.feature) <= n.threshold ? n.left : n.right;
    }
}

Vector RegressionTree::predict(const Matrix& features) const {
    if (features.cols() != n_features_)
        throw DataError("tree predict: expected " + std::to_string(n_features_) + " features, got " +
                        std::to_string(features.cols()));
    Vector out(features.rows());
    for (Eigen::Index r = 0; r < features.rows(); ++r) out(r) = predict_row(features.row(r));
    return out;
}

// ---------------------------------------------------------------------------
// Growth
// ---------------------------------------------------------------------------

namespace {

struct Candidate {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;  // reduction of squared error
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const Vector& y, const TreeParams& params)
        : x_(x), y_(y), params_(params), rng_(params.rng_seed) {
        rows_.resize(static_cast<std::size_t>(x.rows()));
        std::iota(rows_.begin(), rows_.end(), Eigen::Index{0});
        features_.resize(static_cast<std::size_t>(x.cols()));
        std::iota(features_.begin(), features_.end(), 0);
    }

    RegressionTree build() {
        struct Work {
            std::int32_t node;
            std::size_t begin, end;
            int depth;
        };
        std::vector<RegressionTree::Node> nodes(1);
        std::vector<Work> stack{{0, 0, rows_.size(), 0}};

        while (!stack.empty()) {
            const Work w = stack.back();
            stack.pop_back();

            const auto count = static_cast<std::int64_t>(w.end - w.begin);
            double sum = 0.0;
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i = w.begin; i < w.end; ++i) {
                const double v = y_(rows_[i]);
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            const double mean = sum / static_cast<double>(count);
            nodes[static_cast<std::size_t>(w.node)].value = mean;
            nodes[static_cast<std::size_t>(w.node)].n_samples = count;

            const bool depth_reached = params_.max_depth && w.depth >= *params_.max_depth;
            if (depth_reached || count < params_.min_samples_split || lo == hi) continue;

            const Candidate best = find_split(w.begin, w.end, mean);
            if (best.feature < 0) continue;

            const auto mid_it = std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(w.begin),
                                               rows_.begin() + static_cast<std::ptrdiff_t>(w.end),
                                               [&](Eigen::Index r) { return x_(r, best.feature) <= best.threshold; });
            const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());
            // keep row order within children independent of partition's internal swaps
            std::sort(rows_.begin() + static_cast<std::ptrdiff_t>(w.begin), mid_it);
            std::sort(mid_it, rows_.begin() + static_cast<std::ptrdiff_t>(w.end));

            const auto left = static_cast<std::int32_t>(nodes.size());
            nodes.emplace_back();
            const auto right = static_cast<std::int32_t>(nodes.size());
            nodes.emplace_back();
            auto& parent = nodes[static_cast<std::size_t>(w.node)];
            parent.feature = best.feature;
            parent.threshold = best.threshold;
            parent.left = left;
            parent.right = right;

            stack.push_back({right, mid, w.end, w.depth + 1});
            stack.push_back({left, w.begin, mid, w.depth + 1});
        }
        return RegressionTree(std::move(nodes), x_.cols());
    }

private:
    std::vector<int> candidate_features() {
        const int n = static_cast<int>(features_.size());
        if (!params_.feature_subsample || *params_.feature_subsample >= n) return features_;
        std::vector<int> pool = features_;
        const int take = std::max(1, *params_.feature_subsample);
        for (int i = 0; i < take; ++i) {
            std::uniform_int_distribution<int> pick(i, n - 1);
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng_))]);
        }
        pool.resize(static_cast<std::size_t>(take));
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    Candidate find_split(std::size_t begin, std::size_t end, double mean) {
        const std::size_t n = end - begin;
        const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, params_.min_samples_leaf));
        if (n < 2 * min_leaf) return {};

        double node_sse = 0.0;
        for (std::size_t i = begin; i < end; ++i) node_sse += (y_(rows_[i]) - mean) * (y_(rows_[i]) - mean);
        const double tie_tol = 1e-12 * std::max(node_sse, std::numeric_limits<double>::min());

        Candidate best;
        double best_gain = -std::numeric_limits<double>::infinity();
        scratch_.resize(n);
        for (const int f : candidate_features()) {
            for (std::size_t i = 0; i < n; ++i) {
                const Eigen::Index r = rows_[begin + i];
                scratch_[i] = {x_(r, f), y_(r) - mean};
            }
            std::sort(scratch_.begin(), scratch_.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            // children SSE = node SSE - (SL^2/nL + SR^2/nR) with centered targets (SL + SR = 0)
            double left_sum = 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                left_sum += scratch_[i - 1].second;
                if (i < min_leaf || n - i < min_leaf) continue;
                if (!(scratch_[i - 1].first < scratch_[i].first)) continue;
                const double nl = static_cast<double>(i);
                const double nr = static_cast<double>(n - i);
                const double gain = left_sum * left_sum / nl + left_sum * left_sum / nr;
                if (gain > best_gain + tie_tol) {
                    best_gain = gain;
                    const double a = scratch_[i - 1].first;
                    const double b = scratch_[i].first;
                    double mid = a + (b - a) / 2.0;
                    if (!(mid < b)) mid = a;
                    best = {f, mid, gain};
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    const Vector& y_;
    const TreeParams& params_;
    Rng rng_;
    std::vector<Eigen::Index> rows_;
    std::vector<int> features_;
    std::vector<std::pair<double, double>> scratch_;
};

}  // namespace

RegressionTree fit_tree(const Matrix& features, const Vector& targets, const TreeParams& params) {
    if (features.rows() == 0) throw DataError("fit_tree: empty input");
    if (features.rows() != targets.size())
        throw DataError("fit_tree: " + std::to_string(features.rows()) + " feature rows vs " +
                        std::to_string(targets.size()) + " targets");
    if (features.cols() < 1) throw DataError("fit_tree: no feature columns");
    if (!targets.allFinite()) throw DataError("fit_tree: non-finite target");
    if (!features.allFinite()) throw DataError("fit_tree: non-finite feature value");
    if (params.min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
    if (params.min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
    if (params.max_depth && *params.max_depth < 0) throw ConfigError("max_depth must be >= 0");
    if (params.feature_subsample && *params.feature_subsample < 1) throw ConfigError("feature_subsample must be >= 1");

    return TreeBuilder(features, targets, params).build();
}

}  // namespace shoot
