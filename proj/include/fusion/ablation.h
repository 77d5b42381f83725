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

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fusion/feature_store.h"
#include "fusion/metrics.h"
#include "fusion/trainer.h"

namespace fusion {

/// Order in which configurations are run and reported.
inline constexpr std::array<Modality, 3> kAblationOrder = {Modality::kText, Modality::kImage,
                                                           Modality::kMultimodal};

/// Report row label: "Text", "Image", "Multimodal".
std::string
config_label(Modality m);

/// Max / smoothed-max accuracy from the validation curve, majority baseline
/// over the validation ids, and the PR curve of the best-epoch parameters on
/// the validation ids.
MetricsReport
summarize_run(Modality modality, const TrainResult& run, const Dataset& ds, const DatasetSplit& split,
              double threshold, double momentum = kDefaultSmoothingMomentum);

struct AblationOptions {
    double momentum = kDefaultSmoothingMomentum;
    /// Seeds base.seed, base.seed + 1, ... ; 1 means a single run per config.
    std::size_t repeats = 1;
};

struct ConfigRun {
    Modality modality = Modality::kMultimodal;
    TrainResult result;
    MetricsReport report;
};

struct RepeatSummary {
    Modality modality = Modality::kMultimodal;
    std::vector<std::uint64_t> seeds;
    std::vector<double> max_accuracies;
    double mean = 0.0;
    double stddev = 0.0;
};

struct AblationResult {
    TrainConfig base;
    /// One entry per configuration, in kAblationOrder, for the base seed.
    std::vector<ConfigRun> runs;
    /// Filled only when repeats > 1.
    std::vector<RepeatSummary> repeats;
};

using AblationProgress = std::function<void(Modality, std::uint64_t seed)>;

/// Trains one model per modality with otherwise identical configuration.
AblationResult
run_ablation(const Dataset& ds, const DatasetSplit& split, const TrainConfig& base_cfg,
             const AblationOptions& options = {}, const AblationProgress& progress = {});

/// Rows ordered by max accuracy, best first (ties keep run order).
std::string
ablation_markdown(const AblationResult& result);

std::string
ablation_json(const AblationResult& result);

}  // namespace fusion
