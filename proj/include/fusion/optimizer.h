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
#include <span>
#include <vector>

#include "fusion/mlp.h"

namespace fusion {

struct AdamConfig {
    double lr = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.0;

    bool
    operator==(const AdamConfig&) const = default;
};

/// Throws std::invalid_argument for lr <= 0, betas outside [0,1),
/// epsilon < 0 or weight_decay < 0.
void
validate(const AdamConfig& cfg);

/// Moment accumulators laid out like the parameter vector.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;

    AdamState() = default;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {
    }

    bool
    operator==(const AdamState&) const = default;
};

/// One bias-corrected Adam step on a flat parameter vector. `state.t` is
/// incremented first, so a fresh state performs the t = 1 update. A nonzero
/// weight_decay adds weight_decay * theta to the gradient (L2 form).
void
adam_update(std::span<double> theta, std::span<const double> grad, AdamState& state,
            const AdamConfig& cfg);

/// Same update over every MLP parameter. Throws std::invalid_argument when
/// the gradient or state shapes do not match the parameters.
void
adam_step(MlpParams& params, const Gradients& grads, AdamState& state, const AdamConfig& cfg);

}  // namespace fusion
