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

#include "fusion/ablation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "fusion/mlp.h"
#include "json.hpp"

namespace fusion {

std::string
config_label(Modality m) {
    switch (m) {
        case Modality::kText:
            return "Text";
        case Modality::kImage:
            return "Image";
        case Modality::kMultimodal:
            return "Multimodal";
    }
    return "Unknown";
}

MetricsReport
summarize_run(Modality modality, const TrainResult& run, const Dataset& ds, const DatasetSplit& split,
              double threshold, double momentum) {
    MetricsReport report;
    report.config = modality;
    report.max_accuracy = max_accuracy(run.curves);
    report.smoothed_max_accuracy = smoothed_max_accuracy(run.curves, momentum);
    report.smoothing_momentum = momentum;
    report.baseline_accuracy = baseline_accuracy(ds, split.val_ids);

    const auto best = evaluate(run.best_params, ds, split.val_ids, modality, threshold);
    const auto index = build_id_index(ds);
    const auto labels = gather_labels(ds, index, split.val_ids);
    if (std::count(labels.begin(), labels.end(), 1.0) > 0) {
        auto pr = pr_curve_and_ap(best.scores, labels);
        report.ap = pr.ap;
        report.pr_curve = std::move(pr.curve);
    }
    return report;
}

AblationResult
run_ablation(const Dataset& ds, const DatasetSplit& split, const TrainConfig& base_cfg,
             const AblationOptions& options, const AblationProgress& progress) {
    if (options.repeats == 0) {
        throw std::invalid_argument("ablation: repeats must be >= 1");
    }
    AblationResult result;
    result.base = base_cfg;
    for (Modality m : kAblationOrder) {
        TrainConfig cfg = base_cfg;
        cfg.modality = m;
        if (progress) {
            progress(m, cfg.seed);
        }
        ConfigRun run;
        run.modality = m;
        run.result = train(ds, split, cfg);
        run.report = summarize_run(m, run.result, ds, split, cfg.threshold, options.momentum);
        result.runs.push_back(std::move(run));
    }

    if (options.repeats > 1) {
        for (std::size_t c = 0; c < kAblationOrder.size(); ++c) {
            RepeatSummary s;
            s.modality = kAblationOrder[c];
            s.seeds.push_back(base_cfg.seed);
            s.max_accuracies.push_back(result.runs[c].report.max_accuracy);
            result.repeats.push_back(std::move(s));
        }
        for (std::size_t r = 1; r < options.repeats; ++r) {
            for (std::size_t c = 0; c < kAblationOrder.size(); ++c) {
                TrainConfig cfg = base_cfg;
                cfg.modality = kAblationOrder[c];
                cfg.seed = base_cfg.seed + r;
                if (progress) {
                    progress(cfg.modality, cfg.seed);
                }
                const auto run = train(ds, split, cfg);
                result.repeats[c].seeds.push_back(cfg.seed);
                result.repeats[c].max_accuracies.push_back(max_accuracy(run.curves));
            }
        }
        for (auto& s : result.repeats) {
            const double n = static_cast<double>(s.max_accuracies.size());
            s.mean = std::accumulate(s.max_accuracies.begin(), s.max_accuracies.end(), 0.0) / n;
            double ss = 0.0;
            for (double a : s.max_accuracies) {
                ss += (a - s.mean) * (a - s.mean);
            }
            s.stddev = std::sqrt(ss / (n - 1.0));
        }
    }
    return result;
}

namespace {

std::string
fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::vector<std::size_t>
rank_by_max_accuracy(const AblationResult& result) {
    std::vector<std::size_t> order(result.runs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.runs[a].report.max_accuracy > result.runs[b].report.max_accuracy;
    });
    return order;
}

}  // namespace

std::string
ablation_markdown(const AblationResult& result) {
    std::ostringstream out;
    out << "# Modality ablation\n\n";
    out << "Configurations differ only in modality; the input layer follows the feature width, "
           "so parameter counts are not matched:";
    for (const auto& run : result.runs) {
        const Architecture arch{modality_dim(run.modality), kHiddenWidth, kHiddenWidth};
        out << ' ' << config_label(run.modality) << ' ' << arch.param_count() << ';';
    }
    out << "\n\n";
    out << "| Model | Max. Accuracy | Smth. Max. Accuracy |\n";
    out << "|---|---|---|\n";
    const auto order = rank_by_max_accuracy(result);
    for (std::size_t i : order) {
        const auto& r = result.runs[i].report;
        out << "| " << config_label(r.config) << " | " << fixed3(r.max_accuracy) << " | "
            << fixed3(r.smoothed_max_accuracy) << " |\n";
    }
    out << "\n| Model | Best epoch | AP | Baseline |\n";
    out << "|---|---|---|---|\n";
    for (std::size_t i : order) {
        const auto& run = result.runs[i];
        out << "| " << config_label(run.modality) << " | " << run.result.best_epoch << " | "
            << fixed3(run.report.ap) << " | " << fixed3(run.report.baseline_accuracy) << " |\n";
    }
    if (!result.repeats.empty()) {
        out << "\n| Model | Seeds | Mean Max. Accuracy | Std. Dev. |\n";
        out << "|---|---|---|---|\n";
        for (const auto& s : result.repeats) {
            out << "| " << config_label(s.modality) << " | " << s.seeds.size() << " | " << fixed3(s.mean)
                << " | " << fixed3(s.stddev) << " |\n";
        }
    }
    return out.str();
}

std::string
ablation_json(const AblationResult& result) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(train_config_to_json(result.base));
    j["config"].erase("modality");
    auto& rows = j["reports"] = nlohmann::json::array();
    for (const auto& run : result.runs) {
        const auto& r = run.report;
        rows.push_back({
            {"model", config_label(r.config)},
            {"modality", modality_name(r.config)},
            {"input_dim", modality_dim(r.config)},
            {"param_count", Architecture{modality_dim(r.config), kHiddenWidth, kHiddenWidth}.param_count()},
            {"max_accuracy", r.max_accuracy},
            {"smoothed_max_accuracy", r.smoothed_max_accuracy},
            {"smoothing_momentum", r.smoothing_momentum},
            {"baseline_accuracy", r.baseline_accuracy},
            {"ap", r.ap},
            {"best_epoch", run.result.best_epoch},
        });
    }
    auto& ranking = j["ranking"] = nlohmann::json::array();
    for (std::size_t i : rank_by_max_accuracy(result)) {
        ranking.push_back(config_label(result.runs[i].modality));
    }
    if (!result.repeats.empty()) {
        auto& reps = j["repeats"] = nlohmann::json::array();
        for (const auto& s : result.repeats) {
            reps.push_back({{"modality", modality_name(s.modality)},
                            {"seeds", s.seeds},
                            {"max_accuracies", s.max_accuracies},
                            {"mean", s.mean},
                            {"stddev", s.stddev}});
        }
    }
    return j.dump(2) + "\n";
}

}  // namespace fusion
