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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fusion/metrics.h"
#include "fusion/rng.h"
#include "json.hpp"

namespace fusion {

void
validate(const TrainConfig& cfg) {
    if (cfg.batch_size == 0) {
        throw std::invalid_argument("train config: batch_size must be >= 1");
    }
    if (cfg.epochs == 0) {
        throw std::invalid_argument("train config: epochs must be >= 1");
    }
    if (!(cfg.dropout_keep > 0.0 && cfg.dropout_keep <= 1.0)) {
        throw std::invalid_argument("train config: dropout_keep must lie in (0, 1]");
    }
    if (!std::isfinite(cfg.threshold)) {
        throw std::invalid_argument("train config: threshold must be finite");
    }
    validate(cfg.adam);
}

TrainConfig
train_config_from_json(std::string_view text) {
    TrainConfig cfg;
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object()) {
            throw std::invalid_argument("train config JSON must be an object");
        }
        for (const auto& [key, value] : j.items()) {
            if (key == "modality") {
                cfg.modality = parse_modality(value.get<std::string>());
            } else if (key == "batch_size") {
                cfg.batch_size = value.get<std::size_t>();
            } else if (key == "epochs") {
                cfg.epochs = value.get<std::size_t>();
            } else if (key == "lr") {
                cfg.adam.lr = value.get<double>();
            } else if (key == "beta1") {
                cfg.adam.beta1 = value.get<double>();
            } else if (key == "beta2") {
                cfg.adam.beta2 = value.get<double>();
            } else if (key == "epsilon") {
                cfg.adam.epsilon = value.get<double>();
            } else if (key == "weight_decay") {
                cfg.adam.weight_decay = value.get<double>();
            } else if (key == "dropout_keep") {
                cfg.dropout_keep = value.get<double>();
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "threshold") {
                cfg.threshold = value.get<double>();
            } else {
                throw std::invalid_argument("train config: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed train config JSON: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

std::string
train_config_to_json(const TrainConfig& cfg) {
    nlohmann::json j;
    j["modality"] = modality_name(cfg.modality);
    j["batch_size"] = cfg.batch_size;
    j["epochs"] = cfg.epochs;
    j["lr"] = cfg.adam.lr;
    j["beta1"] = cfg.adam.beta1;
    j["beta2"] = cfg.adam.beta2;
    j["epsilon"] = cfg.adam.epsilon;
    j["weight_decay"] = cfg.adam.weight_decay;
    j["dropout_keep"] = cfg.dropout_keep;
    j["seed"] = cfg.seed;
    j["threshold"] = cfg.threshold;
    return j.dump(2) + "\n";
}

std::vector<double>
CurveLog::val_accuracy_values() const {
    std::vector<double> out;
    out.reserve(val_accuracy.size());
    for (const auto& p : val_accuracy) {
        out.push_back(p.value);
    }
    return out;
}

std::string
curve_to_csv(std::span<const CurvePoint> curve, std::string_view step_name, std::string_view value_name) {
    std::ostringstream out;
    out.precision(17);
    out << step_name << ',' << value_name << '\n';
    for (const auto& p : curve) {
        out << p.step << ',' << p.value << '\n';
    }
    return out.str();
}

std::string
curves_to_json(const CurveLog& curves) {
    auto points = [](std::span<const CurvePoint> curve, const char* step) {
        auto arr = nlohmann::json::array();
        for (const auto& p : curve) {
            arr.push_back({{step, p.step}, {"value", p.value}});
        }
        return arr;
    };
    nlohmann::json j;
    j["train_loss"] = points(curves.train_loss, "batch");
    j["val_loss"] = points(curves.val_loss, "epoch");
    j["val_accuracy"] = points(curves.val_accuracy, "epoch");
    return j.dump(2) + "\n";
}

Matrix
gather_features(const Dataset& ds, const IdIndex& index, std::span<const std::string> ids, Modality m) {
    Matrix x(ids.size(), modality_dim(m));
    for (std::size_t r = 0; r < ids.size(); ++r) {
        auto it = index.find(ids[r]);
        if (it == index.end()) {
            throw std::invalid_argument("unknown record id '" + ids[r] + "'");
        }
        const auto& rec = ds.records[it->second];
        validate_record(rec);
        select_modality_into(rec, m, x.row(r));
    }
    return x;
}

std::vector<double>
gather_labels(const Dataset& ds, const IdIndex& index, std::span<const std::string> ids) {
    std::vector<double> y(ids.size());
    for (std::size_t r = 0; r < ids.size(); ++r) {
        auto it = index.find(ids[r]);
        if (it == index.end()) {
            throw std::invalid_argument("unknown record id '" + ids[r] + "'");
        }
        y[r] = label_value(ds.records[it->second].label);
    }
    return y;
}

namespace {

constexpr std::size_t kEvalChunk = 256;

Matrix
rows_of(const Matrix& src, std::span<const std::size_t> rows) {
    Matrix out(rows.size(), src.cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto from = src.row(rows[r]);
        std::copy(from.begin(), from.end(), out.row(r).begin());
    }
    return out;
}

}  // namespace

EvalResult
evaluate(const MlpParams& params, const Matrix& features, std::span<const double> labels, double threshold) {
    if (features.rows == 0) {
        throw std::invalid_argument("evaluate: no samples");
    }
    if (labels.size() != features.rows) {
        throw std::invalid_argument("evaluate: label count does not match feature rows");
    }
    EvalResult result;
    result.scores.reserve(features.rows);
    for (std::size_t start = 0; start < features.rows; start += kEvalChunk) {
        const std::size_t len = std::min(kEvalChunk, features.rows - start);
        Matrix chunk(len, features.cols);
        std::copy_n(features.data.begin() + static_cast<std::ptrdiff_t>(start * features.cols),
                    len * features.cols, chunk.data.begin());
        const auto scores = predict(params, chunk);
        result.scores.insert(result.scores.end(), scores.begin(), scores.end());
    }
    result.loss = mse_loss(result.scores, labels);
    result.accuracy = binary_accuracy(result.scores, labels, threshold);
    return result;
}

EvalResult
evaluate(const MlpParams& params, const Dataset& ds, std::span<const std::string> ids, Modality modality,
         double threshold) {
    if (ids.empty()) {
        throw std::invalid_argument("evaluate: empty id list");
    }
    const auto index = build_id_index(ds);
    const Matrix x = gather_features(ds, index, ids, modality);
    const auto y = gather_labels(ds, index, ids);
    return evaluate(params, x, y, threshold);
}

TrainResult
train(const Dataset& ds, const DatasetSplit& split, const TrainConfig& cfg, const EpochCallback& on_epoch) {
    validate(cfg);
    if (split.train_ids.empty() || split.val_ids.empty()) {
        throw std::invalid_argument("train: both sides of the split must be non-empty");
    }
    const auto index = build_id_index(ds);
    TrainData train_set{gather_features(ds, index, split.train_ids, cfg.modality),
                        gather_labels(ds, index, split.train_ids)};
    TrainData val_set{gather_features(ds, index, split.val_ids, cfg.modality),
                      gather_labels(ds, index, split.val_ids)};
    const auto hate = std::count(train_set.y.begin(), train_set.y.end(), 1.0);
    if (hate == 0 || static_cast<std::size_t>(hate) == train_set.y.size()) {
        throw std::invalid_argument("train: training ids must contain both classes");
    }
    return fit(train_set, val_set, cfg, on_epoch);
}

TrainResult
fit(const TrainData& train_set, const TrainData& val_set, const TrainConfig& cfg, const EpochCallback& on_epoch) {
    validate(cfg);
    const Matrix& train_x = train_set.x;
    const auto& train_y = train_set.y;
    if (train_x.rows == 0 || val_set.x.rows == 0) {
        throw std::invalid_argument("fit: empty training or validation set");
    }
    if (train_y.size() != train_x.rows || val_set.y.size() != val_set.x.rows) {
        throw std::invalid_argument("fit: label count does not match feature rows");
    }
    if (train_x.cols != val_set.x.cols) {
        throw std::invalid_argument("fit: training and validation widths differ");
    }

    TrainResult result;
    result.final_params = init_params(train_x.cols, cfg.seed);
    result.final_state = AdamState(result.final_params.values().size());
    MlpParams& params = result.final_params;
    AdamState& state = result.final_state;

    Rng dropout_rng(derive_seed(cfg.seed, kDropoutStream));
    const std::uint64_t shuffle_seed = derive_seed(cfg.seed, kShuffleStream);

    std::vector<std::size_t> order(train_x.rows);
    std::size_t batch_index = 0;
    double best_accuracy = -1.0;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        Rng shuffle_rng(derive_seed(shuffle_seed, epoch));
        shuffle(std::span<std::size_t>(order), shuffle_rng);

        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t len = std::min(cfg.batch_size, order.size() - start);
            const std::span<const std::size_t> rows(order.data() + start, len);
            const Matrix x = rows_of(train_x, rows);
            std::vector<double> y(len);
            for (std::size_t r = 0; r < len; ++r) {
                y[r] = train_y[rows[r]];
            }
            ++batch_index;

            const ForwardTrace trace = forward(params, x, Mode::kTrain, dropout_rng, cfg.dropout_keep);
            const double loss = mse_loss(trace.scores, y);
            if (!std::isfinite(loss)) {
                throw DivergenceError(epoch, batch_index,
                                      "training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                                          ", batch " + std::to_string(batch_index));
            }
            result.curves.train_loss.push_back({batch_index, loss});
            const Gradients grads = backward(params, trace, y);
            adam_step(params, grads, state, cfg.adam);
        }
        if (!params.all_finite()) {
            throw DivergenceError(epoch, batch_index,
                                  "training diverged: non-finite parameters after epoch " + std::to_string(epoch));
        }

        const EvalResult val = evaluate(params, val_set.x, val_set.y, cfg.threshold);
        if (!std::isfinite(val.loss)) {
            throw DivergenceError(epoch, batch_index,
                                  "training diverged: non-finite validation loss at epoch " + std::to_string(epoch));
        }
        result.curves.val_loss.push_back({epoch, val.loss});
        result.curves.val_accuracy.push_back({epoch, val.accuracy});
        if (val.accuracy > best_accuracy) {
            best_accuracy = val.accuracy;
            result.best_epoch = epoch;
            result.best_params = params;
        }
        if (on_epoch) {
            on_epoch(epoch, val.loss, val.accuracy);
        }
    }
    return result;
}

}  // namespace fusion
