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

#include <span>
#include <string>
#include <vector>

#include "fusion/feature_store.h"

namespace fusion {

struct CurveLog;

inline constexpr double kDefaultSmoothingMomentum = 0.9;

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;

    bool
    operator==(const PrPoint&) const = default;
};

struct PrResult {
    std::vector<PrPoint> curve;
    double ap = 0.0;
};

struct MetricsReport {
    Modality config = Modality::kMultimodal;
    double max_accuracy = 0.0;
    double smoothed_max_accuracy = 0.0;
    double smoothing_momentum = kDefaultSmoothingMomentum;
    double baseline_accuracy = 0.0;
    double ap = 0.0;
    std::vector<PrPoint> pr_curve;
};

/// Best validation accuracy over all epochs.
double
max_accuracy(std::span<const double> accuracies);

double
max_accuracy(const CurveLog& curve);

/// EMA seeded with the first value, s_t = momentum * s_{t-1} + (1 - momentum) * a_t,
/// and returns max_t s_t. Requires momentum in [0, 1).
double
smoothed_max_accuracy(std::span<const double> accuracies, double momentum = kDefaultSmoothingMomentum);

double
smoothed_max_accuracy(const CurveLog& curve, double momentum = kDefaultSmoothingMomentum);

/// Precision-recall sweep for the positive (label 1) class.
///
/// Scores are ranked descending (stable on ties) and one point is emitted per
/// distinct score, after every sample with that score has been admitted.
/// AP = sum_k (R_k - R_{k-1}) * P_k. The sum is accumulated one positive at a
/// time as P_k / P in rank order, which is the same quantity.
PrResult
pr_curve_and_ap(std::span<const double> scores, std::span<const double> labels);

/// Majority-class fraction among `ids`.
double
baseline_accuracy(const Dataset& ds, std::span<const std::string> ids);

/// Fraction of samples where (score >= threshold) matches label == 1.
double
binary_accuracy(std::span<const double> scores, std::span<const double> labels, double threshold);

std::string
metrics_to_json(const MetricsReport& report);

/// "recall,precision" header plus one row per sweep point.
std::string
pr_curve_to_csv(std::span<const PrPoint> curve);

}  // namespace fusion
