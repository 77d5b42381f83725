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

#include "fusion/optimizer.h"

#include <cmath>
#include <stdexcept>

namespace fusion {

void
validate(const AdamConfig& cfg) {
    if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr)) {
        throw std::invalid_argument("Adam: lr must be positive");
    }
    if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) || !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) {
        throw std::invalid_argument("Adam: betas must lie in [0, 1)");
    }
    if (!(cfg.epsilon >= 0.0) || !(cfg.weight_decay >= 0.0)) {
        throw std::invalid_argument("Adam: epsilon and weight_decay must be non-negative");
    }
}

void
adam_update(std::span<double> theta, std::span<const double> grad, AdamState& state,
            const AdamConfig& cfg) {
    if (grad.size() != theta.size() || state.m.size() != theta.size() ||
        state.v.size() != theta.size()) {
        throw std::invalid_argument("Adam: parameter, gradient and state sizes differ");
    }
    state.t += 1;
    const double t = static_cast<double>(state.t);
    const double bias1 = 1.0 - std::pow(cfg.beta1, t);
    const double bias2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        double g = grad[i];
        if (cfg.weight_decay != 0.0) {
            g += cfg.weight_decay * theta[i];
        }
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = state.m[i] / bias1;
        const double v_hat = state.v[i] / bias2;
        theta[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

void
adam_step(MlpParams& params, const Gradients& grads, AdamState& state, const AdamConfig& cfg) {
    if (!(grads.arch() == params.arch())) {
        throw std::invalid_argument("Adam: gradient shapes do not match parameters");
    }
    adam_update(params.values(), grads.values(), state, cfg);
}

}  // namespace fusion
