// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/forest.hpp"

#include "support/stats.hpp"

#include <doctest.h>

#include <random>

using namespace m3dnoc;

namespace {

TrainingDataset linear_dataset(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    TrainingDataset ds;
    for (int i = 0; i < n; ++i) {
        TrainingRow row;
        for (double &x : row.x)
            x = u(rng);
        row.y = row.x[0]; // target is the first feature
        ds.push_back(row);
    }
    return ds;
}

} // namespace

TEST_CASE("constant targets predict that constant exactly") {
    TrainingDataset ds;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        TrainingRow row;
        for (double &x : row.x)
            x = u(rng);
        row.y = 7.0;
        ds.push_back(row);
    }
    RegressionForest f = fit_forest(ds, ForestParams{});
    CHECK(f.predict({0.1, 0.2, 0.3, 0.4, 0.5}) == 7.0);
    CHECK(f.predict({100.0, -5.0, 0.0, 0.0, 0.0}) == 7.0);
}

TEST_CASE("a single row predicts its own target everywhere") {
    TrainingDataset ds;
    ds.push_back({{1.0, 2.0, 3.0, 4.0, 5.0}, 42.5});
    RegressionForest f = fit_forest(ds, ForestParams{});
    CHECK(f.predict({0.0, 0.0, 0.0, 0.0, 0.0}) == 42.5);
    CHECK(f.predict({9.0, 9.0, 9.0, 9.0, 9.0}) == 42.5);
}

TEST_CASE("empty dataset is rejected") {
    CHECK_THROWS_AS(fit_forest(TrainingDataset{}, ForestParams{}), std::invalid_argument);
}

TEST_CASE("linear target: held-out rank correlation is high") {
    TrainingDataset ds = linear_dataset(500, 17);
    TrainingDataset train(ds.begin(), ds.begin() + 400);
    TrainingDataset test(ds.begin() + 400, ds.end());

    RegressionForest f = fit_forest(train, ForestParams{});
    std::vector<double> predicted, actual;
    for (const TrainingRow &row : test) {
        predicted.push_back(f.predict(row.x));
        actual.push_back(row.y);
    }
    CHECK(m3dnoc::test::spearman(predicted, actual) >= 0.8);
}

TEST_CASE("training is deterministic given the seed") {
    TrainingDataset ds = linear_dataset(200, 23);
    ForestParams p;
    p.seed = 77;
    RegressionForest a = fit_forest(ds, p);
    RegressionForest b = fit_forest(ds, p);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 50; ++i) {
        std::array<double, kFeatureCount> q;
        for (double &x : q)
            x = u(rng);
        CHECK(a.predict(q) == b.predict(q));
    }

    ForestParams p2 = p;
    p2.seed = 78;
    RegressionForest c = fit_forest(ds, p2);
    bool any_diff = false;
    for (int i = 0; i < 50 && !any_diff; ++i) {
        std::array<double, kFeatureCount> q;
        for (double &x : q)
            x = u(rng);
        any_diff = a.predict(q) != c.predict(q);
    }
    CHECK(any_diff); // different bootstrap stream should actually change something
}
