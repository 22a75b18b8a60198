#include <algorithm>
#include <cmath>
#include <numeric>

#include "finsent/errors.hpp"
#include "finsent/regressors.hpp"
#include "finsent/rng.hpp"

namespace finsent {

double RegressionTree::predict(std::span<const double> row) const {
    if (nodes.empty()) throw Error("regression tree has no nodes");
    int32_t at = 0;
    while (nodes[at].feature >= 0) {
        const TreeNode& node = nodes[at];
        at = row[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes[at].value;
}

double RandomForestModel::predict_raw(std::span<const double> row) const {
    if (trees.empty()) throw Error("random forest has no trees");
    double sum = 0.0;
    for (const RegressionTree& tree : trees) sum += tree.predict(row);
    return sum / static_cast<double>(trees.size());
}

namespace {

// Grows one tree on `samples` (indices into the dataset, duplicates allowed
// for bootstrap draws). Splits minimize the summed child squared error; a
// node keeps splitting while its targets differ and a legal split exists,
// so zero-gain splits are taken rather than skipped.
struct TreeBuilder {
    const DenseDataset& data;
    const RandomForestParams& params;
    Rng& rng;
    size_t mtry;
    RegressionTree tree;

    int32_t build(std::vector<size_t>& samples, int depth) {
        const size_t n = samples.size();
        double sum = 0.0;
        double lo = data.y[samples[0]];
        double hi = lo;
        for (size_t idx : samples) {
            sum += data.y[idx];
            lo = std::min(lo, data.y[idx]);
            hi = std::max(hi, data.y[idx]);
        }
        // Identical targets get the shared value verbatim, not a re-averaged
        // copy of it.
        const double leaf_value = lo == hi ? lo : sum / static_cast<double>(n);

        const bool depth_capped = params.max_depth >= 0 && depth >= params.max_depth;
        const size_t msl = static_cast<size_t>(params.min_samples_leaf);
        if (lo == hi || depth_capped || n < 2 * msl) return make_leaf(leaf_value);

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_score = -1.0;  // sum of (child sum)^2 / child count
        std::vector<std::pair<double, double>> column(n);
        for (size_t f : candidate_features()) {
            for (size_t i = 0; i < n; ++i)
                column[i] = {data.x[samples[i] * data.dims + f], data.y[samples[i]]};
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            double left_sum = 0.0;
            for (size_t k = 1; k < n; ++k) {
                left_sum += column[k - 1].second;
                if (k < msl || n - k < msl) continue;
                if (column[k - 1].first == column[k].first) continue;
                const double right_sum = sum - left_sum;
                const double score =
                    left_sum * left_sum / static_cast<double>(k) +
                    right_sum * right_sum / static_cast<double>(n - k);
                if (score > best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_threshold = split_threshold(column[k - 1].first, column[k].first);
                }
            }
        }
        if (best_feature < 0) return make_leaf(leaf_value);

        std::vector<size_t> left, right;
        for (size_t idx : samples) {
            if (data.x[idx * data.dims + static_cast<size_t>(best_feature)] <= best_threshold)
                left.push_back(idx);
            else
                right.push_back(idx);
        }
        samples.clear();
        samples.shrink_to_fit();

        const int32_t at = static_cast<int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[at].feature = best_feature;
        tree.nodes[at].threshold = best_threshold;
        const int32_t left_child = build(left, depth + 1);
        tree.nodes[at].left = left_child;
        const int32_t right_child = build(right, depth + 1);
        tree.nodes[at].right = right_child;
        return at;
    }

    int32_t make_leaf(double value) {
        TreeNode leaf;
        leaf.value = value;
        tree.nodes.push_back(leaf);
        return static_cast<int32_t>(tree.nodes.size() - 1);
    }

    // Midpoint between adjacent distinct values; nudged down when rounding
    // would land on the upper value, so `x <= threshold` keeps the partition.
    static double split_threshold(double below, double above) {
        double mid = below + (above - below) / 2.0;
        if (mid >= above) mid = below;
        return mid;
    }

    std::vector<size_t> candidate_features() {
        std::vector<size_t> all(data.dims);
        std::iota(all.begin(), all.end(), size_t{0});
        if (mtry >= data.dims) return all;
        // Partial Fisher-Yates: the first mtry entries are a uniform draw
        // without replacement.
        for (size_t i = 0; i < mtry; ++i) {
            size_t j = i + rng.index(all.size() - i);
            std::swap(all[i], all[j]);
        }
        all.resize(mtry);
        std::sort(all.begin(), all.end());
        return all;
    }
};

}  // namespace

RandomForestModel train_random_forest(const DenseDataset& data,
                                      const RandomForestParams& params) {
    data.validate();
    if (params.trees_count < 1)
        throw ConfigError("random forest needs at least one tree");
    if (params.min_samples_leaf < 1)
        throw ConfigError("min_samples_leaf must be at least 1");
    if (params.features_per_split < 0)
        throw ConfigError("features_per_split must not be negative");

    size_t mtry = params.features_per_split > 0
                      ? std::min<size_t>(params.features_per_split, data.dims)
                      : (data.dims + 2) / 3;
    RandomForestModel model;
    model.params = params;
    model.dims = data.dims;
    model.trees.reserve(params.trees_count);

    Rng rng(params.seed);
    const size_t n = data.size();
    for (int t = 0; t < params.trees_count; ++t) {
        std::vector<size_t> samples(n);
        if (params.bootstrap) {
            for (size_t i = 0; i < n; ++i) samples[i] = rng.index(n);
        } else {
            std::iota(samples.begin(), samples.end(), size_t{0});
        }
        TreeBuilder builder{data, params, rng, mtry, {}};
        builder.build(samples, 0);
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

}  // namespace finsent
