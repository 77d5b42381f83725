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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fusion/feature_store.h"
#include "fusion/mlp.h"
#include "fusion/optimizer.h"

namespace fusion {

// Checkpoint file layout:
//
//   <one line of compact JSON metadata>\n
//   params     param_count x float64 LE, order w1, b1, w2, b2, w3, b3
//   [adam m]   param_count x float64 LE   (only when "adam_t" is present)
//   [adam v]   param_count x float64 LE
//
// Metadata keys: format ("fusion-mlp"), version (1), input_dim, hidden1,
// hidden2, param_count, modality, seed, epoch and optionally adam_t.

struct CheckpointMeta {
    Modality modality = Modality::kMultimodal;
    std::uint64_t seed = 0;
    std::size_t epoch = 0;
};

struct Checkpoint {
    CheckpointMeta meta;
    MlpParams params;
    std::optional<AdamState> adam;
};

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t>
serialize_checkpoint(const Checkpoint& ckpt);

Checkpoint
parse_checkpoint(std::span<const std::uint8_t> bytes);

void
write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

Checkpoint
read_checkpoint(const std::filesystem::path& path);

}  // namespace fusion
