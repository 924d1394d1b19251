// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/forest.hpp"
#include "m3dnoc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace m3dnoc {

namespace {

struct Sample {
    std::array<double, kFeatureCount> x;
    double y;
};

double leaf_value(const std::vector<Sample> &data, const std::vector<int> &idx) {
    // exactness guard: a constant-target leaf predicts that constant
    double first = data[idx[0]].y;
    bool all_equal = true;
    double sum = 0.0;
    for (int i : idx) {
        sum += data[i].y;
        if (data[i].y != first)
            all_equal = false;
    }
    return all_equal ? first : sum / static_cast<double>(idx.size());
}

} // namespace

double RegressionForest::predict(const std::array<double, kFeatureCount> &features) const {
    if (trees_.empty())
        throw std::logic_error("predict on an untrained forest");

    std::array<double, kFeatureCount> q;
    for (int f = 0; f < kFeatureCount; ++f) {
        double range = hi_[f] - lo_[f];
        q[f] = range > 0.0 ? (features[f] - lo_[f]) / range : 0.0;
    }

    double sum = 0.0;
    double first = 0.0;
    bool all_equal = true;
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        const auto &tree = trees_[t];
        int node = 0;
        while (tree[node].feature >= 0)
            node = q[tree[node].feature] <= tree[node].threshold ? tree[node].left
                                                                 : tree[node].right;
        double v = tree[node].value;
        sum += v;
        if (t == 0)
            first = v;
        else if (v != first)
            all_equal = false;
    }
    return all_equal ? first : sum / static_cast<double>(trees_.size());
}

RegressionForest fit_forest(const TrainingDataset &ds, const ForestParams &params) {
    if (ds.empty())
        throw std::invalid_argument("fit_forest: empty dataset");
    if (params.n_trees < 1 || params.max_depth < 1 || params.min_leaf < 1)
        throw std::invalid_argument("fit_forest: parameters must be positive");

    RegressionForest forest;

    // dataset-level min-max normalization
    for (int f = 0; f < kFeatureCount; ++f) {
        forest.lo_[f] = std::numeric_limits<double>::infinity();
        forest.hi_[f] = -std::numeric_limits<double>::infinity();
    }
    for (const TrainingRow &r : ds)
        for (int f = 0; f < kFeatureCount; ++f) {
            forest.lo_[f] = std::min(forest.lo_[f], r.x[f]);
            forest.hi_[f] = std::max(forest.hi_[f], r.x[f]);
        }

    std::vector<Sample> data(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (int f = 0; f < kFeatureCount; ++f) {
            double range = forest.hi_[f] - forest.lo_[f];
            data[i].x[f] = range > 0.0 ? (ds[i].x[f] - forest.lo_[f]) / range : 0.0;
        }
        data[i].y = ds[i].y;
    }
    const int n = static_cast<int>(data.size());

    struct Split {
        double cost = std::numeric_limits<double>::infinity();
        int feature = -1;
        double threshold = 0.0;
        int pos = -1; // boundary in the per-feature sort
    };

    forest.trees_.resize(params.n_trees);
    std::vector<std::pair<double, int>> order; // (feature value, dataset index)

    for (int t = 0; t < params.n_trees; ++t) {
        std::mt19937_64 rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i)
            idx[i] = static_cast<int>(uniform_below(rng, n));
        std::sort(idx.begin(), idx.end()); // bootstrap order independent of draw order

        auto &tree = forest.trees_[t];
        tree.clear();

        // depth-first build; each frame owns its index subset
        struct Frame {
            std::vector<int> idx;
            int depth;
            int node;
        };
        tree.push_back({});
        std::vector<Frame> stack;
        stack.push_back({idx, 0, 0});

        while (!stack.empty()) {
            Frame fr = std::move(stack.back());
            stack.pop_back();

            const int m = static_cast<int>(fr.idx.size());
            bool constant = true;
            for (int i = 1; i < m && constant; ++i)
                constant = data[fr.idx[i]].y == data[fr.idx[0]].y;

            if (fr.depth >= params.max_depth || m < 2 * params.min_leaf || constant) {
                tree[fr.node].feature = -1;
                tree[fr.node].value = leaf_value(data, fr.idx);
                continue;
            }

            Split best;
            for (int f = 0; f < kFeatureCount; ++f) {
                order.clear();
                for (int i : fr.idx)
                    order.emplace_back(data[i].x[f], i);
                std::sort(order.begin(), order.end());

                double sum_left = 0.0, sum2_left = 0.0;
                double sum_all = 0.0, sum2_all = 0.0;
                for (const auto &[xv, di] : order) {
                    (void)xv;
                    sum_all += data[di].y;
                    sum2_all += data[di].y * data[di].y;
                }
                for (int k = 1; k < m; ++k) {
                    double y = data[order[k - 1].second].y;
                    sum_left += y;
                    sum2_left += y * y;
                    if (k < params.min_leaf || m - k < params.min_leaf)
                        continue;
                    if (!(order[k - 1].first < order[k].first))
                        continue; // cannot separate equal feature values
                    double sum_right = sum_all - sum_left;
                    double sum2_right = sum2_all - sum2_left;
                    double cost = (sum2_left - sum_left * sum_left / k) +
                                  (sum2_right - sum_right * sum_right / (m - k));
                    if (cost < best.cost) {
                        // the midpoint of two adjacent doubles can round up to
                        // the right value; fall back to the left value so the
                        // split always separates
                        double thr = 0.5 * (order[k - 1].first + order[k].first);
                        if (!(thr < order[k].first))
                            thr = order[k - 1].first;
                        best.cost = cost;
                        best.feature = f;
                        best.threshold = thr;
                        best.pos = k;
                    }
                }
            }

            if (best.feature < 0) { // no separable split
                tree[fr.node].feature = -1;
                tree[fr.node].value = leaf_value(data, fr.idx);
                continue;
            }

            std::vector<int> left_idx, right_idx;
            left_idx.reserve(best.pos);
            right_idx.reserve(m - best.pos);
            for (int i : fr.idx)
                (data[i].x[best.feature] <= best.threshold ? left_idx : right_idx).push_back(i);
            if (left_idx.empty() || right_idx.empty()) { // cannot happen; stay safe
                tree[fr.node].feature = -1;
                tree[fr.node].value = leaf_value(data, fr.idx);
                continue;
            }

            int left_node = static_cast<int>(tree.size());
            tree.push_back({});
            int right_node = static_cast<int>(tree.size());
            tree.push_back({});
            // tree.push_back may reallocate; re-address the node
            tree[fr.node].feature = best.feature;
            tree[fr.node].threshold = best.threshold;
            tree[fr.node].left = left_node;
            tree[fr.node].right = right_node;

            stack.push_back({std::move(right_idx), fr.depth + 1, right_node});
            stack.push_back({std::move(left_idx), fr.depth + 1, left_node});
        }
    }
    return forest;
}

} // namespace m3dnoc
