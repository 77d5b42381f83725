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

#include "fusion/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fusion/trainer.h"
#include "json.hpp"

namespace fusion {

double
max_accuracy(std::span<const double> accuracies) {
    if (accuracies.empty()) {
        throw std::invalid_argument("max_accuracy: empty curve");
    }
    return *std::max_element(accuracies.begin(), accuracies.end());
}

double
max_accuracy(const CurveLog& curve) {
    return max_accuracy(curve.val_accuracy_values());
}

double
smoothed_max_accuracy(std::span<const double> accuracies, double momentum) {
    if (accuracies.empty()) {
        throw std::invalid_argument("smoothed_max_accuracy: empty curve");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw std::invalid_argument("smoothed_max_accuracy: momentum must lie in [0, 1)");
    }
    double s = accuracies[0];
    double best = s;
    for (std::size_t t = 1; t < accuracies.size(); ++t) {
        s = momentum * s + (1.0 - momentum) * accuracies[t];
        best = std::max(best, s);
    }
    return best;
}

double
smoothed_max_accuracy(const CurveLog& curve, double momentum) {
    return smoothed_max_accuracy(curve.val_accuracy_values(), momentum);
}

PrResult
pr_curve_and_ap(std::span<const double> scores, std::span<const double> labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("pr_curve_and_ap: scores and labels differ in length");
    }
    const auto positives = static_cast<std::size_t>(
        std::count_if(labels.begin(), labels.end(), [](double y) { return y == 1.0; }));
    if (positives == 0) {
        throw std::invalid_argument("pr_curve_and_ap: no positive labels");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    PrResult result;
    const double p_total = static_cast<double>(positives);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // Admit the whole group of tied scores before measuring.
        std::size_t group_tp = 0;
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            if (labels[order[i]] == 1.0) {
                ++group_tp;
            } else {
                ++fp;
            }
            ++i;
        }
        tp += group_tp;
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        for (std::size_t k = 0; k < group_tp; ++k) {
            result.ap += precision / p_total;
        }
        result.curve.push_back({static_cast<double>(tp) / p_total, precision});
    }
    return result;
}

double
baseline_accuracy(const Dataset& ds, std::span<const std::string> ids) {
    if (ids.empty()) {
        throw std::invalid_argument("baseline_accuracy: empty id list");
    }
    const auto index = build_id_index(ds);
    std::size_t hate = 0;
    for (const auto& id : ids) {
        auto it = index.find(id);
        if (it == index.end()) {
            throw std::invalid_argument("baseline_accuracy: unknown id '" + id + "'");
        }
        if (ds.records[it->second].label == Label::kHate) {
            ++hate;
        }
    }
    const std::size_t majority = std::max(hate, ids.size() - hate);
    return static_cast<double>(majority) / static_cast<double>(ids.size());
}

double
binary_accuracy(std::span<const double> scores, std::span<const double> labels, double threshold) {
    if (scores.size() != labels.size() || scores.empty()) {
        throw std::invalid_argument("binary_accuracy: need equal, non-empty inputs");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted_hate = scores[i] >= threshold;
        if (predicted_hate == (labels[i] == 1.0)) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(scores.size());
}

std::string
metrics_to_json(const MetricsReport& report) {
    nlohmann::json j;
    j["config"] = modality_name(report.config);
    j["max_accuracy"] = report.max_accuracy;
    j["smoothed_max_accuracy"] = report.smoothed_max_accuracy;
    j["smoothing_momentum"] = report.smoothing_momentum;
    j["baseline_accuracy"] = report.baseline_accuracy;
    j["ap"] = report.ap;
    auto& pts = j["pr_curve"] = nlohmann::json::array();
    for (const auto& p : report.pr_curve) {
        pts.push_back({{"recall", p.recall}, {"precision", p.precision}});
    }
    return j.dump(2) + "\n";
}

std::string
pr_curve_to_csv(std::span<const PrPoint> curve) {
    std::ostringstream out;
    out.precision(17);
    out << "recall,precision\n";
    for (const auto& p : curve) {
        out << p.recall << ',' << p.precision << '\n';
    }
    return out.str();
}

}  // namespace fusion
