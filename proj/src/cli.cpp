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

#include "fusion/cli.h"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fusion/ablation.h"
#include "fusion/checkpoint.h"
#include "fusion/feature_store.h"
#include "fusion/metrics.h"
#include "fusion/simd.h"
#include "fusion/synthetic_gen.h"
#include "fusion/trainer.h"
#include "json.hpp"

namespace fusion {

namespace fs = std::filesystem;

namespace {

std::string
read_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void
write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

/// Wall-clock data lives only here so every other output stays reproducible.
class RunLog {
public:
    RunLog(fs::path path, std::string command)
        : path_(std::move(path)), command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
    }

    void
    finish() const {
        const auto elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        std::ostringstream log;
        log << "command: " << command_ << "\nfinished: " << stamp << "\nelapsed_seconds: " << elapsed
            << "\nsimd_backend: " << simd::backend_name(simd::active_backend()) << "\n";
        write_text(path_, log.str());
    }

private:
    fs::path path_;
    std::string command_;
    std::chrono::steady_clock::time_point start_;
};

void
write_run_outputs(const fs::path& dir, const TrainConfig& cfg, const TrainResult& run,
                  const MetricsReport& report) {
    fs::create_directories(dir);
    write_text(dir / "config.json", train_config_to_json(cfg));
    write_text(dir / "train_loss.csv", curve_to_csv(run.curves.train_loss, "batch", "train_loss"));
    write_text(dir / "val_loss.csv", curve_to_csv(run.curves.val_loss, "epoch", "val_loss"));
    write_text(dir / "val_accuracy.csv", curve_to_csv(run.curves.val_accuracy, "epoch", "val_accuracy"));
    write_text(dir / "curves.json", curves_to_json(run.curves));
    write_text(dir / "metrics.json", metrics_to_json(report));
    write_text(dir / "pr_curve.csv", pr_curve_to_csv(report.pr_curve));

    Checkpoint best{{cfg.modality, cfg.seed, run.best_epoch}, run.best_params, std::nullopt};
    write_checkpoint(best, dir / "model_best.ckpt");
    Checkpoint final_ckpt{{cfg.modality, cfg.seed, cfg.epochs}, run.final_params, run.final_state};
    write_checkpoint(final_ckpt, dir / "model_final.ckpt");
}

TrainConfig
load_config(const std::string& path) {
    return path.empty() ? TrainConfig{} : train_config_from_json(read_text(path));
}

std::string
join_args(int argc, const char* const* argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) {
            s += ' ';
        }
        s += argv[i];
    }
    return s;
}

const std::vector<std::string> kModalityNames = {"text", "image", "multimodal"};

}  // namespace

int
run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multimodal fusion classification bench: synthetic data, training, evaluation, ablation"};
    app.require_subcommand(1);
    std::string simd_name = "auto";
    app.add_option("--simd", simd_name, "Kernel backend: auto, scalar or avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic feature file");
    std::string synth_spec;
    std::string synth_out;
    synth->add_option("--spec", synth_spec, "Synthetic spec JSON")->required();
    synth->add_option("--out", synth_out, "Output FUSB file")->required();

    // split
    auto* split_cmd = app.add_subcommand("split", "Stratified train/validation split");
    std::string split_in;
    std::string split_out;
    double split_fraction = 0.85;
    std::uint64_t split_seed = 0;
    split_cmd->add_option("--in", split_in, "Input FUSB file")->required();
    split_cmd->add_option("--fraction", split_fraction, "Train fraction in (0,1)")
        ->check(CLI::Range(0.0, 1.0));
    split_cmd->add_option("--seed", split_seed, "Shuffle seed")->required();
    split_cmd->add_option("--out", split_out, "Output split JSON")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train one configuration");
    std::string train_in;
    std::string train_split;
    std::string train_modality;
    std::string train_config;
    std::string train_out;
    double train_momentum = kDefaultSmoothingMomentum;
    train_cmd->add_option("--in", train_in, "Input FUSB file")->required();
    train_cmd->add_option("--split", train_split, "Split JSON")->required();
    train_cmd->add_option("--modality", train_modality, "text, image or multimodal")
        ->check(CLI::IsMember(kModalityNames));
    train_cmd->add_option("--config", train_config, "Train config JSON");
    train_cmd->add_option("--out-dir", train_out, "Output directory")->required();
    train_cmd->add_option("--momentum", train_momentum, "Smoothing momentum for the report")
        ->check(CLI::Range(0.0, 0.999999));

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on the validation ids");
    std::string eval_model;
    std::string eval_in;
    std::string eval_split;
    std::string eval_out;
    std::string eval_pr_out;
    double eval_threshold = 0.5;
    eval_cmd->add_option("--model", eval_model, "Checkpoint file")->required();
    eval_cmd->add_option("--in", eval_in, "Input FUSB file")->required();
    eval_cmd->add_option("--split", eval_split, "Split JSON")->required();
    eval_cmd->add_option("--threshold", eval_threshold, "Decision threshold on the raw score");
    eval_cmd->add_option("--out", eval_out, "Also write the JSON report here");
    eval_cmd->add_option("--pr-out", eval_pr_out, "Write the PR curve CSV here");

    // ablate
    auto* ablate_cmd = app.add_subcommand("ablate", "Text / image / multimodal comparison");
    std::string ablate_in;
    std::string ablate_split;
    std::string ablate_config;
    std::string ablate_out;
    std::size_t ablate_repeats = 1;
    double ablate_momentum = kDefaultSmoothingMomentum;
    ablate_cmd->add_option("--in", ablate_in, "Input FUSB file")->required();
    ablate_cmd->add_option("--split", ablate_split, "Split JSON")->required();
    ablate_cmd->add_option("--config", ablate_config, "Train config JSON (modality is ignored)");
    ablate_cmd->add_option("--out-dir", ablate_out, "Output directory")->required();
    ablate_cmd->add_option("--repeats", ablate_repeats, "Number of seeds per configuration")
        ->check(CLI::PositiveNumber);
    ablate_cmd->add_option("--momentum", ablate_momentum, "Smoothing momentum for the report")
        ->check(CLI::Range(0.0, 0.999999));

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a feature file");
    std::string validate_in;
    validate_cmd->add_option("--in", validate_in, "Input FUSB file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        simd::set_backend(simd::parse_backend(simd_name));
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*synth) {
            const auto spec = synthetic_spec_from_json(read_text(synth_spec));
            const Dataset ds = generate(spec);
            write_feature_file(ds, synth_out);
            out << "wrote " << ds.records.size() << " records to " << synth_out << "\n";
        } else if (*split_cmd) {
            const Dataset ds = read_feature_file(split_in);
            const auto split = stratified_split(ds, split_fraction, split_seed);
            write_text(split_out, split_to_json(split));
            out << "train " << split.train_ids.size() << ", val " << split.val_ids.size() << "\n";
        } else if (*train_cmd) {
            TrainConfig cfg = load_config(train_config);
            if (!train_modality.empty()) {
                cfg.modality = parse_modality(train_modality);
            }
            const Dataset ds = read_feature_file(train_in);
            const auto split = split_from_json(read_text(train_split));
            fs::create_directories(train_out);
            RunLog log(fs::path(train_out) / "run.log", join_args(argc, argv));
            const auto run = train(ds, split, cfg, [&](std::size_t epoch, double loss, double acc) {
                err << "epoch " << epoch << " val_loss " << loss << " val_acc " << acc << "\n";
            });
            const auto report = summarize_run(cfg.modality, run, ds, split, cfg.threshold, train_momentum);
            write_run_outputs(train_out, cfg, run, report);
            log.finish();
            out << metrics_to_json(report);
        } else if (*eval_cmd) {
            const auto ckpt = read_checkpoint(eval_model);
            const Dataset ds = read_feature_file(eval_in);
            const auto split = split_from_json(read_text(eval_split));
            if (ckpt.params.arch().input_dim != modality_dim(ckpt.meta.modality)) {
                throw std::invalid_argument("checkpoint input_dim does not match its modality");
            }
            const auto result = evaluate(ckpt.params, ds, split.val_ids, ckpt.meta.modality, eval_threshold);
            const auto index = build_id_index(ds);
            const auto labels = gather_labels(ds, index, split.val_ids);
            nlohmann::json j;
            j["modality"] = modality_name(ckpt.meta.modality);
            j["epoch"] = ckpt.meta.epoch;
            j["n"] = split.val_ids.size();
            j["loss"] = result.loss;
            j["accuracy"] = result.accuracy;
            j["threshold"] = eval_threshold;
            j["baseline_accuracy"] = baseline_accuracy(ds, split.val_ids);
            PrResult pr;
            if (std::count(labels.begin(), labels.end(), 1.0) > 0) {
                pr = pr_curve_and_ap(result.scores, labels);
                j["ap"] = pr.ap;
            } else {
                j["ap"] = nullptr;
            }
            const std::string text = j.dump(2) + "\n";
            out << text;
            if (!eval_out.empty()) {
                write_text(eval_out, text);
            }
            if (!eval_pr_out.empty()) {
                write_text(eval_pr_out, pr_curve_to_csv(pr.curve));
            }
        } else if (*ablate_cmd) {
            const TrainConfig cfg = load_config(ablate_config);
            const Dataset ds = read_feature_file(ablate_in);
            const auto split = split_from_json(read_text(ablate_split));
            fs::create_directories(ablate_out);
            RunLog log(fs::path(ablate_out) / "run.log", join_args(argc, argv));
            AblationOptions options;
            options.momentum = ablate_momentum;
            options.repeats = ablate_repeats;
            const auto result = run_ablation(ds, split, cfg, options, [&](Modality m, std::uint64_t seed) {
                err << "training " << modality_name(m) << " (seed " << seed << ")\n";
            });
            for (const auto& run : result.runs) {
                TrainConfig run_cfg = cfg;
                run_cfg.modality = run.modality;
                write_run_outputs(fs::path(ablate_out) / std::string(modality_name(run.modality)), run_cfg,
                                  run.result, run.report);
            }
            const std::string table = ablation_markdown(result);
            write_text(fs::path(ablate_out) / "ablation.md", table);
            write_text(fs::path(ablate_out) / "ablation.json", ablation_json(result));
            log.finish();
            out << table;
        } else if (*validate_cmd) {
            const Dataset ds = read_feature_file(validate_in);
            const auto counts = ds.class_counts();
            out << "ok: " << ds.records.size() << " records (hate " << counts.hate << ", non-hate "
                << counts.non_hate << "), text_dim " << kTextDim << ", image_dim " << kImageDim << "\n";
        }
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const FeatureFileError& e) {
        err << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace fusion
