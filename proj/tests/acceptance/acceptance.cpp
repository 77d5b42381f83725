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

// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fusion/ablation.h"
#include "fusion/feature_store.h"
#include "fusion/metrics.h"
#include "fusion/optimizer.h"
#include "fusion/synthetic_gen.h"
#include "fusion/trainer.h"
#include "gradcheck.h"
#include "oracles.h"
#include "test_util.h"

namespace fs = std::filesystem;
using namespace fusion;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double
seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string
fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

Outcome
gradient_correctness() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t nets = 0;
    std::size_t params = 0;
    for (std::uint64_t seed = 0; seed < 24; ++seed) {
        const std::size_t dim = 3 + seed % 8;
        const std::size_t h1 = 4 + seed % 5;
        const std::size_t h2 = 3 + seed % 4;
        const auto r = testing::gradient_check(1000 + seed, dim, h1, h2, 1 + seed % 6);
        worst = std::max(worst, r.max_relative_error);
        params += r.params;
        ++nets;
    }
    const double elapsed = seconds_since(t0);
    return {worst < 1e-6 && elapsed < 10.0, std::to_string(nets) + " nets, " + std::to_string(params) +
                                                " params, max rel err " + fmt("%.3g", worst) + ", " +
                                                fmt("%.2f", elapsed) + " s"};
}

Outcome
adam_oracle() {
    double worst = 0.0;
    bool zero_ok = true;
    for (double lr : {0.1, 0.01, 0.003}) {
        for (double g : {1.0, -0.5, 3e-3, 250.0}) {
            const AdamConfig cfg{lr, 0.9, 0.999, 1e-8, 0.0};
            std::vector<double> theta = {0.7};
            const std::vector<double> grad = {g};
            AdamState state(1);
            // Under a constant gradient both bias-corrected moments return
            // exactly g and g^2, so each of the first two steps is lr*g/(|g|+eps).
            const double step = lr * g / (std::abs(g) + 1e-8);
            adam_update(theta, grad, state, cfg);
            worst = std::max(worst, std::abs(theta[0] - (0.7 - step)));
            adam_update(theta, grad, state, cfg);
            worst = std::max(worst, std::abs(theta[0] - (0.7 - 2.0 * step)));

            std::vector<double> still = {0.7, -1.25, 0.0};
            const auto before = still;
            const std::vector<double> zero(3, 0.0);
            AdamState zs(3);
            for (int i = 0; i < 5; ++i) {
                adam_update(still, zero, zs, cfg);
            }
            zero_ok = zero_ok && still == before;
        }
    }
    return {worst <= 1e-12 && zero_ok,
            "max |err| " + fmt("%.3g", worst) + ", zero-gradient exact: " + (zero_ok ? "yes" : "no")};
}

Outcome
ap_oracle() {
    std::mt19937_64 gen(20240601);
    std::uniform_int_distribution<int> len(1, 50);
    std::uniform_int_distribution<int> coarse(0, 7);
    std::uniform_real_distribution<double> fine(0.0, 1.0);
    std::bernoulli_distribution coin(0.4);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = static_cast<std::size_t>(len(gen));
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = trial % 2 == 0 ? coarse(gen) / 7.0 : fine(gen);
            y[i] = coin(gen) ? 1.0 : 0.0;
        }
        y[static_cast<std::size_t>(trial) % n] = 1.0;
        if (pr_curve_and_ap(s, y).ap != oracle::average_precision(s, y)) {
            ++mismatches;
        }
    }
    const std::vector<double> s = {0.9, 0.1, 0.8, 0.3, 0.7};
    const std::vector<double> y = {1, 0, 1, 0, 1};
    const double perfect = pr_curve_and_ap(s, y).ap;
    return {mismatches == 0 && perfect == 1.0,
            "1000 instances, " + std::to_string(mismatches) + " mismatches, perfect ranking AP " + fmt("%.17g", perfect)};
}

Outcome
smoothed_max_bound() {
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> len(1, 200);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::size_t violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> a(static_cast<std::size_t>(len(gen)));
        for (auto& v : a) {
            v = d(gen);
        }
        if (smoothed_max_accuracy(a) > max_accuracy(a)) {
            ++violations;
        }
    }
    std::size_t constant_errors = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double c = d(gen);
        const std::vector<double> flat(static_cast<std::size_t>(len(gen)), c);
        if (smoothed_max_accuracy(flat) != c) {
            ++constant_errors;
        }
    }
    return {violations == 0 && constant_errors == 0, "1000 curves, " + std::to_string(violations) +
                                                         " bound violations, " + std::to_string(constant_errors) +
                                                         " constant-curve errors"};
}

Outcome
baseline() {
    // Exact 34% / 66% class mix: 1700 hate, 3300 non-hate.
    Dataset ds;
    for (int i = 0; i < 5000; ++i) {
        FeatureRecord r;
        r.id = "m" + std::to_string(i);
        r.label = i < 1700 ? Label::kHate : Label::kNonHate;
        r.text_vec.assign(kTextDim, 0.25f);
        r.image_vec.assign(kImageDim, -0.5f);
        ds.records.push_back(std::move(r));
    }
    const auto split = stratified_split(ds, 0.85, 7);
    // All-zero parameters score 0 < 0.5 on every input: a constant non-hate predictor.
    const MlpParams zero(Architecture{kFusedDim, kHiddenWidth, kHiddenWidth});
    const auto r = evaluate(zero, ds, split.val_ids, Modality::kMultimodal);
    const double tol = 1.0 / static_cast<double>(split.val_ids.size());
    const double b = baseline_accuracy(ds, split.val_ids);
    return {std::abs(r.accuracy - 0.66) <= tol && r.accuracy == b,
            "|val| " + std::to_string(split.val_ids.size()) + ", accuracy " + fmt("%.4f", r.accuracy) +
                ", majority baseline " + fmt("%.4f", b) + ", tolerance " + fmt("%.4f", tol)};
}

Outcome
table1_ordering() {
    const auto t0 = Clock::now();
    SyntheticSpec spec;
    spec.n_per_class = 500;
    spec.text_separation = 0.5;
    spec.image_separation = 3.0;
    spec.seed = 1;
    const Dataset ds = generate(spec);
    const auto split = stratified_split(ds, 0.8, 7);
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.adam.lr = 0.01;
    cfg.seed = 1;
    const auto result = run_ablation(ds, split, cfg);
    double acc[3] = {};
    double smooth[3] = {};
    for (const auto& run : result.runs) {
        const auto i = static_cast<std::size_t>(std::find(kAblationOrder.begin(), kAblationOrder.end(), run.modality) -
                                                kAblationOrder.begin());
        acc[i] = run.report.max_accuracy;
        smooth[i] = run.report.smoothed_max_accuracy;
    }
    const double text = acc[0], image = acc[1], multi = acc[2];
    const double elapsed = seconds_since(t0);
    const bool ok = multi >= image && image > text && image - text > 0.05 && elapsed < 300.0;
    return {ok, "max acc text " + fmt("%.3f", text) + " image " + fmt("%.3f", image) + " multimodal " +
                    fmt("%.3f", multi) + " (smoothed " + fmt("%.3f", smooth[0]) + " / " + fmt("%.3f", smooth[1]) +
                    " / " + fmt("%.3f", smooth[2]) + "), " + fmt("%.1f", elapsed) + " s"};
}

std::vector<std::uint8_t>
read_all(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int
run(const std::string& cmd) {
    return std::system((cmd + " > /dev/null 2>&1").c_str());
}

Outcome
determinism() {
    testing::TempDir dir("accept-det");
    const std::string exe = FUSION_BENCH_EXE;
    const auto p = [&](const std::string& name) { return (dir.path() / name).string(); };
    std::ofstream(p("spec.json")) << R"({"n_per_class": 40, "seed": 3})";
    std::ofstream(p("cfg.json")) << R"({"epochs": 4, "lr": 0.01, "seed": 5})";
    if (run(exe + " synth --spec " + p("spec.json") + " --out " + p("d.fusb")) != 0 ||
        run(exe + " split --in " + p("d.fusb") + " --fraction 0.75 --seed 7 --out " + p("s.json")) != 0) {
        return {false, "setup commands failed"};
    }
    for (const char* out : {"a", "b"}) {
        if (run(exe + " ablate --in " + p("d.fusb") + " --split " + p("s.json") + " --config " + p("cfg.json") +
                " --out-dir " + p(out)) != 0) {
            return {false, std::string("ablate into ") + out + " failed"};
        }
    }
    std::size_t compared = 0;
    std::vector<std::string> differing;
    for (const auto& entry : fs::recursive_directory_iterator(dir.path() / "a")) {
        if (!entry.is_regular_file() || entry.path().filename() == "run.log") {
            continue;
        }
        const auto rel = fs::relative(entry.path(), dir.path() / "a");
        const auto other = dir.path() / "b" / rel;
        if (!fs::exists(other) || read_all(entry.path()) != read_all(other)) {
            differing.push_back(rel.string());
        }
        ++compared;
    }
    std::string detail = std::to_string(compared) + " files compared, " + std::to_string(differing.size()) + " differ";
    for (const auto& d : differing) {
        detail += " " + d;
    }
    return {differing.empty() && compared >= 29, detail};
}

Outcome
overfit() {
    // Two records with N(0, 0.1^2) components. Each epoch is a single batch
    // holding both, so the logged batch loss is the training-set MSE.
    Dataset ds;
    std::mt19937_64 gen(11);
    std::normal_distribution<float> d(0.0f, 0.1f);
    for (int i = 0; i < 2; ++i) {
        auto r = testing::make_record("r" + std::to_string(i), i == 0 ? Label::kHate : Label::kNonHate);
        for (auto& v : r.text_vec) {
            v = d(gen);
        }
        for (auto& v : r.image_vec) {
            v = d(gen);
        }
        ds.records.push_back(std::move(r));
    }
    DatasetSplit split;
    split.train_ids = {"r0", "r1"};
    split.val_ids = {"r0", "r1"};
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.adam.lr = 0.01;
    cfg.seed = 2;
    const auto run = train(ds, split, cfg);
    double best = run.curves.train_loss.front().value;
    std::size_t reached = 0;
    for (const auto& p : run.curves.train_loss) {
        if (p.value < best) {
            best = p.value;
        }
        if (reached == 0 && p.value < 1e-3) {
            reached = p.step;
        }
    }
    const double eval_mse = evaluate(run.final_params, ds, split.train_ids, cfg.modality).loss;
    return {reached != 0, "lowest train MSE " + fmt("%.3g", best) +
                              (reached ? ", below 1e-3 at epoch " + std::to_string(reached) : std::string()) +
                              "; eval-mode MSE of final params " + fmt("%.3g", eval_mse)};
}

}  // namespace

int
main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"gradient correctness", gradient_correctness},
        {"adam oracle", adam_oracle},
        {"ap oracle", ap_oracle},
        {"smoothed-max bound", smoothed_max_bound},
        {"baseline accuracy", baseline},
        {"modality ordering", table1_ordering},
        {"ablate determinism", determinism},
        {"overfit sanity", overfit},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
