// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "m3dnoc/eval.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace m3dnoc {

/// One trajectory member: its features and the final objective of the
/// trajectory it came from.
struct TrainingRow {
    std::array<double, kFeatureCount> x{};
    double y = 0.0;
};

using TrainingDataset = std::vector<TrainingRow>;

struct ForestParams {
    int n_trees = 50;
    int max_depth = 8;
    int min_leaf = 5;
    std::uint64_t seed = 1;
};

/// Bagged regression trees with axis-aligned splits minimizing squared error.
/// Features are min-max normalized against the training dataset; prediction
/// is the mean of the per-tree leaf values. Deterministic given the seed.
class RegressionForest {
  public:
    double predict(const std::array<double, kFeatureCount> &features) const;
    bool trained() const { return !trees_.empty(); }

  private:
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    std::vector<std::vector<Node>> trees_;
    std::array<double, kFeatureCount> lo_{};
    std::array<double, kFeatureCount> hi_{};

    friend RegressionForest fit_forest(const TrainingDataset &, const ForestParams &);
};

/// Trains on bootstrap samples of the dataset. Throws on an empty dataset.
RegressionForest fit_forest(const TrainingDataset &ds, const ForestParams &params);

} // namespace m3dnoc
