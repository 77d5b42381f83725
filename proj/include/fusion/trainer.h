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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fusion/feature_store.h"
#include "fusion/matrix.h"
#include "fusion/mlp.h"
#include "fusion/optimizer.h"

namespace fusion {

struct TrainConfig {
    Modality modality = Modality::kMultimodal;
    std::size_t batch_size = 25;
    std::size_t epochs = 100;
    AdamConfig adam;
    double dropout_keep = kDefaultDropoutKeep;
    std::uint64_t seed = 0;
    double threshold = 0.5;

    bool
    operator==(const TrainConfig&) const = default;
};

void
validate(const TrainConfig& cfg);

/// Missing keys keep their defaults; unknown keys are rejected. Adam fields
/// are top-level: lr, beta1, beta2, epsilon, weight_decay.
TrainConfig
train_config_from_json(std::string_view text);

std::string
train_config_to_json(const TrainConfig& cfg);

struct CurvePoint {
    std::size_t step = 0;
    double value = 0.0;

    bool
    operator==(const CurvePoint&) const = default;
};

/// Train loss is indexed by global batch number, validation curves by epoch.
/// Both start at 1.
struct CurveLog {
    std::vector<CurvePoint> train_loss;
    std::vector<CurvePoint> val_loss;
    std::vector<CurvePoint> val_accuracy;

    std::vector<double>
    val_accuracy_values() const;

    bool
    operator==(const CurveLog&) const = default;
};

/// "batch,train_loss" etc. Values printed with 17 significant digits.
std::string
curve_to_csv(std::span<const CurvePoint> curve, std::string_view step_name, std::string_view value_name);

std::string
curves_to_json(const CurveLog& curves);

/// Thrown when a batch loss or the parameters become non-finite.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t epoch, std::size_t batch, const std::string& what)
        : std::runtime_error(what), epoch_(epoch), batch_(batch) {
    }

    std::size_t
    epoch() const {
        return epoch_;
    }
    std::size_t
    batch() const {
        return batch_;
    }

private:
    std::size_t epoch_;
    std::size_t batch_;
};

/// Rows are the selected modality of each id, in order. Throws
/// std::invalid_argument on an unknown id.
Matrix
gather_features(const Dataset& ds, const IdIndex& index, std::span<const std::string> ids, Modality m);

std::vector<double>
gather_labels(const Dataset& ds, const IdIndex& index, std::span<const std::string> ids);

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
    std::vector<double> scores;
};

/// Eval-mode pass over `ids`.
EvalResult
evaluate(const MlpParams& params, const Dataset& ds, std::span<const std::string> ids, Modality modality,
         double threshold = 0.5);

/// Same, on features already gathered.
EvalResult
evaluate(const MlpParams& params, const Matrix& features, std::span<const double> labels,
         double threshold = 0.5);

struct TrainResult {
    MlpParams final_params;
    AdamState final_state;
    MlpParams best_params;
    /// First epoch reaching the maximum validation accuracy.
    std::size_t best_epoch = 0;
    CurveLog curves;
};

/// Called after each epoch's validation pass with (epoch, val_loss, val_accuracy).
using EpochCallback = std::function<void(std::size_t, double, double)>;

/// Features and {0,1} targets for one side of a split.
struct TrainData {
    Matrix x;
    std::vector<double> y;
};

/// The training loop proper, on pre-gathered features. Unlike train() it
/// does not require both classes to be present; the input width sets the
/// first layer.
TrainResult
fit(const TrainData& train_set, const TrainData& val_set, const TrainConfig& cfg,
    const EpochCallback& on_epoch = {});

/// Mini-batch training with MSE loss and Adam.
///
/// Parameters come from init_params(dim, cfg.seed). Each epoch shuffles the
/// training ids with Rng(derive_seed(derive_seed(seed, kShuffleStream), epoch))
/// and walks them in batches of cfg.batch_size (the last one may be short).
/// Dropout masks come from one Rng(derive_seed(seed, kDropoutStream)) for the
/// whole run. After every epoch the validation ids are scored in eval mode.
/// Validation results never influence the parameter updates.
TrainResult
train(const Dataset& ds, const DatasetSplit& split, const TrainConfig& cfg,
      const EpochCallback& on_epoch = {});

inline constexpr std::uint64_t kShuffleStream = 0x5348554646ULL;
inline constexpr std::uint64_t kDropoutStream = 0x44524f50ULL;

}  // namespace fusion
