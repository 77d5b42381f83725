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

#include "fusion/checkpoint.h"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>
#include <string>

#include "json.hpp"

namespace fusion {

namespace {

constexpr const char* kFormat = "fusion-mlp";
constexpr int kVersion = 1;

void
put_doubles(std::vector<std::uint8_t>& out, std::span<const double> values) {
    for (double v : values) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
        }
    }
}

void
get_doubles(std::span<const std::uint8_t> in, std::span<double> out) {
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(in[8 * k + i]) << (8 * i);
        }
        out[k] = std::bit_cast<double>(bits);
    }
}

}  // namespace

std::vector<std::uint8_t>
serialize_checkpoint(const Checkpoint& ckpt) {
    const auto& arch = ckpt.params.arch();
    const std::size_t n = ckpt.params.values().size();
    nlohmann::json meta;
    meta["format"] = kFormat;
    meta["version"] = kVersion;
    meta["input_dim"] = arch.input_dim;
    meta["hidden1"] = arch.hidden1;
    meta["hidden2"] = arch.hidden2;
    meta["param_count"] = n;
    meta["modality"] = modality_name(ckpt.meta.modality);
    meta["seed"] = ckpt.meta.seed;
    meta["epoch"] = ckpt.meta.epoch;
    if (ckpt.adam) {
        if (ckpt.adam->m.size() != n || ckpt.adam->v.size() != n) {
            throw CheckpointError("checkpoint: Adam state size does not match parameters");
        }
        meta["adam_t"] = ckpt.adam->t;
    }
    const std::string header = meta.dump() + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + 8 * n * (ckpt.adam ? 3 : 1));
    put_doubles(out, ckpt.params.values());
    if (ckpt.adam) {
        put_doubles(out, ckpt.adam->m);
        put_doubles(out, ckpt.adam->v);
    }
    return out;
}

Checkpoint
parse_checkpoint(std::span<const std::uint8_t> bytes) {
    const auto newline = std::find(bytes.begin(), bytes.end(), std::uint8_t{'\n'});
    if (newline == bytes.end()) {
        throw CheckpointError("checkpoint: missing metadata line");
    }
    const std::string header(bytes.begin(), newline);
    const auto blob = bytes.subspan(static_cast<std::size_t>(newline - bytes.begin()) + 1);

    Checkpoint ckpt;
    Architecture arch;
    std::size_t count = 0;
    std::optional<std::uint64_t> adam_t;
    try {
        const auto meta = nlohmann::json::parse(header);
        if (meta.at("format").get<std::string>() != kFormat || meta.at("version").get<int>() != kVersion) {
            throw CheckpointError("checkpoint: unsupported format or version");
        }
        arch.input_dim = meta.at("input_dim").get<std::size_t>();
        arch.hidden1 = meta.at("hidden1").get<std::size_t>();
        arch.hidden2 = meta.at("hidden2").get<std::size_t>();
        count = meta.at("param_count").get<std::size_t>();
        ckpt.meta.modality = parse_modality(meta.at("modality").get<std::string>());
        ckpt.meta.seed = meta.at("seed").get<std::uint64_t>();
        ckpt.meta.epoch = meta.at("epoch").get<std::size_t>();
        if (meta.contains("adam_t")) {
            adam_t = meta.at("adam_t").get<std::uint64_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("checkpoint: bad metadata: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw CheckpointError(std::string("checkpoint: bad metadata: ") + e.what());
    }
    if (arch.input_dim == 0 || arch.hidden1 == 0 || arch.hidden2 == 0 || count != arch.param_count()) {
        throw CheckpointError("checkpoint: param_count inconsistent with layer widths");
    }
    const std::size_t blocks = adam_t ? 3 : 1;
    if (blob.size() != 8 * count * blocks) {
        throw CheckpointError("checkpoint: blob is " + std::to_string(blob.size()) + " bytes, expected " +
                              std::to_string(8 * count * blocks));
    }
    ckpt.params = MlpParams(arch);
    get_doubles(blob.first(8 * count), ckpt.params.values());
    if (adam_t) {
        AdamState state(count);
        state.t = *adam_t;
        get_doubles(blob.subspan(8 * count, 8 * count), state.m);
        get_doubles(blob.subspan(16 * count, 8 * count), state.v);
        ckpt.adam = std::move(state);
    }
    return ckpt;
}

void
write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    const auto bytes = serialize_checkpoint(ckpt);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw CheckpointError("cannot create " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
        throw CheckpointError("write error on " + path.string());
    }
}

Checkpoint
read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CheckpointError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_checkpoint(bytes);
}

}  // namespace fusion
