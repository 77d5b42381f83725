// Copyright 2026 the fusion-bench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fusion/trainer.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fusion/synthetic_gen.h"
#include "test_util.h"

namespace fusion {
namespace {

using testing::make_record;

TrainData
toy_data(std::mt19937_64& gen, std::size_t n, std::size_t dim) {
    std::normal_distribution<double> d(0.0, 1.0);
    TrainData t{Matrix(n, dim), std::vector<double>(n)};
    for (std::size_t r = 0; r < n; ++r) {
        t.y[r] = r % 2 == 0 ? 1.0 : 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            t.x(r, c) = d(gen) + (t.y[r] == 1.0 && c < 2 ? 1.5 : 0.0);
        }
    }
    return t;
}

Dataset
small_synthetic(std::size_t per_class, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_per_class = per_class;
    spec.seed = seed;
    return generate(spec);
}

TrainConfig
quick_config(std::size_t epochs) {
    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.adam.lr = 0.01;
    cfg.seed = 3;
    return cfg;
}

}  // namespace

TEST(TrainerTest, CurveLengthsFollowBatching) {
    std::mt19937_64 gen(1);
    const TrainData train_set = toy_data(gen, 50, 8);
    const TrainData val_set = toy_data(gen, 10, 8);
    TrainConfig cfg = quick_config(1);
    const auto r = fit(train_set, val_set, cfg);
    EXPECT_EQ(r.curves.train_loss.size(), 2u);
    EXPECT_EQ(r.curves.val_loss.size(), 1u);
    EXPECT_EQ(r.curves.val_accuracy.size(), 1u);
    EXPECT_EQ(r.curves.train_loss[1].step, 2u);
    EXPECT_EQ(r.final_state.t, 2u);

    // 51 samples: the last batch of each epoch holds one record.
    const TrainData odd = toy_data(gen, 51, 8);
    cfg.epochs = 3;
    const auto r2 = fit(odd, val_set, cfg);
    EXPECT_EQ(r2.curves.train_loss.size(), 9u);
    EXPECT_EQ(r2.curves.val_accuracy.back().step, 3u);
}

TEST(TrainerTest, IdenticalRunsAreIdentical) {
    const Dataset ds = small_synthetic(30, 2);
    const auto split = stratified_split(ds, 0.8, 4);
    TrainConfig cfg = quick_config(4);
    const auto a = train(ds, split, cfg);
    const auto b = train(ds, split, cfg);
    EXPECT_EQ(a.curves, b.curves);
    EXPECT_EQ(a.final_params, b.final_params);
    EXPECT_EQ(a.final_state, b.final_state);
    EXPECT_EQ(a.best_params, b.best_params);
    cfg.seed = 4;
    EXPECT_NE(train(ds, split, cfg).final_params, a.final_params);
}

TEST(TrainerTest, ValidationDoesNotInfluenceUpdates) {
    std::mt19937_64 gen(6);
    const TrainData train_set = toy_data(gen, 40, 6);
    const TrainData val_a = toy_data(gen, 10, 6);
    const TrainData val_b = toy_data(gen, 15, 6);
    const auto cfg = quick_config(5);
    EXPECT_EQ(fit(train_set, val_a, cfg).final_params, fit(train_set, val_b, cfg).final_params);
}

TEST(TrainerTest, BestEpochIsFirstMaximum) {
    std::mt19937_64 gen(7);
    const TrainData train_set = toy_data(gen, 60, 5);
    const TrainData val_set = toy_data(gen, 30, 5);
    const auto r = fit(train_set, val_set, quick_config(12));
    const auto acc = r.curves.val_accuracy_values();
    const auto best = std::max_element(acc.begin(), acc.end());
    EXPECT_EQ(r.best_epoch, static_cast<std::size_t>(best - acc.begin()) + 1);
    EXPECT_EQ(evaluate(r.best_params, val_set.x, val_set.y).accuracy, *best);
}

TEST(TrainerTest, TwoRecordOverfit) {
    // Both records sit in every batch, so each logged batch loss is the full
    // training MSE (under that batch's dropout mask).
    Dataset ds;
    std::mt19937_64 gen(11);
    std::normal_distribution<float> d(0.0f, 0.1f);
    for (int i = 0; i < 2; ++i) {
        auto r = make_record("r" + std::to_string(i), i == 0 ? Label::kHate : Label::kNonHate);
        for (auto& v : r.text_vec) {
            v = d(gen);
        }
        for (auto& v : r.image_vec) {
            v = d(gen);
        }
        ds.records.push_back(r);
    }
    DatasetSplit split;
    split.train_ids = {"r0", "r1"};
    split.val_ids = {"r0", "r1"};
    const auto r = train(ds, split, quick_config(200));
    ASSERT_EQ(r.curves.train_loss.size(), 200u);
    double best = r.curves.train_loss.front().value;
    for (const auto& p : r.curves.train_loss) {
        best = std::min(best, p.value);
    }
    EXPECT_LT(best, 1e-3);
}

TEST(TrainerTest, SingleClassTrainingViaFit) {
    // All-hate training data: the net should learn to score everything high.
    std::mt19937_64 gen(12);
    TrainData train_set = toy_data(gen, 20, 4);
    std::fill(train_set.y.begin(), train_set.y.end(), 1.0);
    TrainData val_set = toy_data(gen, 6, 4);
    std::fill(val_set.y.begin(), val_set.y.end(), 1.0);
    const auto r = fit(train_set, val_set, quick_config(200));
    EXPECT_EQ(r.curves.val_accuracy.back().value, 1.0);

    Dataset ds;
    for (int i = 0; i < 4; ++i) {
        ds.records.push_back(make_record("h" + std::to_string(i), Label::kHate));
    }
    DatasetSplit split;
    split.train_ids = {"h0", "h1", "h2"};
    split.val_ids = {"h3"};
    EXPECT_THROW(train(ds, split, quick_config(1)), std::invalid_argument);
}

TEST(EvaluateTest, ZeroParamsScoreMajority) {
    // All scores are 0 < 0.5, so everything is predicted non-hate.
    Dataset ds;
    std::vector<std::string> ids;
    for (int i = 0; i < 50; ++i) {
        ds.records.push_back(make_record("e" + std::to_string(i), i < 17 ? Label::kHate : Label::kNonHate, 0.3f));
        ids.push_back("e" + std::to_string(i));
    }
    const MlpParams zero(Architecture{kTextDim, 100, 100});
    const auto r = evaluate(zero, ds, ids, Modality::kText);
    EXPECT_DOUBLE_EQ(r.accuracy, 33.0 / 50.0);
    EXPECT_DOUBLE_EQ(r.loss, 17.0 / 50.0);
}

TEST(EvaluateTest, ScoreAtThresholdCountsAsHate) {
    MlpParams p(Architecture{3, 2, 2});
    p.b3() = 0.5;
    Matrix x(2, 3);
    const std::vector<double> y = {1.0, 0.0};
    EXPECT_EQ(evaluate(p, x, y).accuracy, 0.5);
    p.b3() = 0.75;
    const std::vector<double> hate = {1.0, 1.0};
    EXPECT_EQ(evaluate(p, x, hate).accuracy, 1.0);
    EXPECT_EQ(evaluate(p, x, hate, 0.8).accuracy, 0.0);
}

TEST(EvaluateTest, PerfectSeparatorScoresOne) {
    // Hand-built net: score = relu(x0) on a 2-d input, x0 = label.
    MlpParams p(Architecture{2, 1, 1});
    p.w1()[0] = 1.0;
    p.w2()[0] = 1.0;
    p.w3()[0] = 1.0;
    Matrix x(4, 2);
    const std::vector<double> y = {1.0, 0.0, 0.0, 1.0};
    for (std::size_t r = 0; r < 4; ++r) {
        x(r, 0) = y[r];
        x(r, 1) = 5.0;
    }
    const auto r = evaluate(p, x, y);
    EXPECT_EQ(r.accuracy, 1.0);
    EXPECT_EQ(r.loss, 0.0);
}

TEST(EvaluateTest, ChunkingMatchesSinglePass) {
    std::mt19937_64 gen(3);
    const Matrix x = testing::random_matrix(gen, 600, 5);
    std::vector<double> y(600, 0.0);
    const MlpParams p = init_params(Architecture{5, 7, 3}, 2);
    EXPECT_EQ(evaluate(p, x, y).scores, predict(p, x));
}

TEST(TrainerTest, InputErrors) {
    const Dataset ds = small_synthetic(5, 1);
    DatasetSplit split;
    split.train_ids = {"syn-000000", "syn-000001"};
    split.val_ids = {"missing"};
    EXPECT_THROW(train(ds, split, quick_config(1)), std::invalid_argument);
    split.val_ids.clear();
    EXPECT_THROW(train(ds, split, quick_config(1)), std::invalid_argument);

    TrainConfig bad = quick_config(1);
    bad.batch_size = 0;
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad = quick_config(0);
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad = quick_config(1);
    bad.dropout_keep = 0.0;
    EXPECT_THROW(validate(bad), std::invalid_argument);
}

TEST(TrainerTest, DivergenceIsReported) {
    std::mt19937_64 gen(4);
    TrainData train_set = toy_data(gen, 25, 4);
    for (auto& v : train_set.x.data) {
        v *= 1e200;
    }
    TrainData val_set = toy_data(gen, 5, 4);
    try {
        fit(train_set, val_set, quick_config(3));
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_EQ(e.epoch(), 1u);
    }
}

TEST(TrainConfigTest, JsonRoundTrip) {
    TrainConfig cfg;
    cfg.modality = Modality::kImage;
    cfg.adam.lr = 0.01;
    cfg.epochs = 7;
    cfg.seed = 12345678901234ULL;
    EXPECT_EQ(train_config_from_json(train_config_to_json(cfg)), cfg);
    EXPECT_EQ(train_config_from_json("{}"), TrainConfig{});
    EXPECT_EQ(train_config_from_json("{\"lr\": 0.5}").adam.lr, 0.5);
    EXPECT_THROW(train_config_from_json("{\"learning_rate\": 0.5}"), std::invalid_argument);
    EXPECT_THROW(train_config_from_json("{\"modality\": \"audio\"}"), std::invalid_argument);
    EXPECT_THROW(train_config_from_json("{\"lr\": -1}"), std::invalid_argument);
}

TEST(CurveExportTest, CsvAndJson) {
    CurveLog log;
    log.train_loss = {{1, 0.25}, {2, 0.125}};
    log.val_accuracy = {{1, 0.5}};
    EXPECT_EQ(curve_to_csv(log.train_loss, "batch", "train_loss"), "batch,train_loss\n1,0.25\n2,0.125\n");
    const auto json = curves_to_json(log);
    EXPECT_NE(json.find("\"val_accuracy\""), std::string::npos);
    EXPECT_NE(json.find("\"batch\": 2"), std::string::npos);
}

}  // namespace fusion
