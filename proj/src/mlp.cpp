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

#include "fusion/mlp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fusion/simd.h"

namespace fusion {

ParamBuffer::ParamBuffer(Architecture arch) : arch_(arch), values_(arch.param_count(), 0.0) {
    if (arch.input_dim == 0 || arch.hidden1 == 0 || arch.hidden2 == 0) {
        throw std::invalid_argument("MLP layer widths must be positive");
    }
}

bool
ParamBuffer::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

MlpParams
init_params(Architecture arch, std::uint64_t seed) {
    MlpParams p(arch);
    Rng rng(seed);
    auto fill = [&rng](std::span<double> w, std::size_t fan_in) {
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        for (double& v : w) {
            v = rng.uniform(-bound, bound);
        }
    };
    fill(p.w1(), arch.input_dim);
    fill(p.w2(), arch.hidden1);
    fill(p.w3(), arch.hidden2);
    return p;
}

MlpParams
init_params(std::size_t input_dim, std::uint64_t seed) {
    return init_params(Architecture{input_dim, kHiddenWidth, kHiddenWidth}, seed);
}

namespace {

void
check_input(const MlpParams& params, const Matrix& x) {
    if (x.cols != params.arch().input_dim) {
        throw std::invalid_argument("forward: input width " + std::to_string(x.cols) +
                                    " does not match input_dim " +
                                    std::to_string(params.arch().input_dim));
    }
    if (x.rows == 0) {
        throw std::invalid_argument("forward: empty batch");
    }
    if (!std::all_of(x.data.begin(), x.data.end(), [](double v) { return std::isfinite(v); })) {
        throw std::invalid_argument("forward: non-finite input");
    }
}

void
check_keep(double keep) {
    if (!(keep > 0.0 && keep <= 1.0)) {
        throw std::invalid_argument("dropout keep probability must lie in (0, 1]");
    }
}

Matrix
broadcast_rows(std::span<const double> bias, std::size_t rows) {
    Matrix m(rows, bias.size());
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy(bias.begin(), bias.end(), m.row(r).begin());
    }
    return m;
}

Matrix
relu(const Matrix& z) {
    Matrix h = z;
    for (double& v : h.data) {
        v = v > 0.0 ? v : 0.0;
    }
    return h;
}

// Everything after the mask is chosen.
ForwardTrace
forward_masked(const MlpParams& params, ForwardTrace trace) {
    const auto& k = simd::kernels();
    const auto& arch = params.arch();
    const std::size_t batch = trace.input.rows;

    trace.arch = arch;
    trace.z1 = broadcast_rows(params.b1(), batch);
    k.matmul_acc(trace.input.data.data(), params.w1().data(), trace.z1.data.data(), batch,
                 arch.input_dim, arch.hidden1);
    trace.h1 = relu(trace.z1);

    trace.dropped = trace.h1;
    if (trace.mode == Mode::kTrain) {
        for (std::size_t i = 0; i < trace.dropped.data.size(); ++i) {
            trace.dropped.data[i] = trace.h1.data[i] * trace.mask.data[i] / trace.dropout_keep;
        }
    }

    trace.z2 = broadcast_rows(params.b2(), batch);
    k.matmul_acc(trace.dropped.data.data(), params.w2().data(), trace.z2.data.data(), batch,
                 arch.hidden1, arch.hidden2);
    trace.h2 = relu(trace.z2);

    trace.scores.resize(batch);
    for (std::size_t b = 0; b < batch; ++b) {
        trace.scores[b] = k.dot(trace.h2.row(b).data(), params.w3().data(), arch.hidden2) + params.b3();
    }
    return trace;
}

}  // namespace

ForwardTrace
forward(const MlpParams& params, const Matrix& x, Mode mode, Rng& rng, double dropout_keep) {
    check_input(params, x);
    check_keep(dropout_keep);
    ForwardTrace trace;
    trace.mode = mode;
    trace.input = x;
    trace.mask = Matrix(x.rows, params.arch().hidden1, 1.0);
    if (mode == Mode::kTrain) {
        trace.dropout_keep = dropout_keep;
        if (dropout_keep < 1.0) {
            for (double& m : trace.mask.data) {
                m = rng.bernoulli(dropout_keep) ? 1.0 : 0.0;
            }
        }
    }
    return forward_masked(params, std::move(trace));
}

ForwardTrace
forward_with_mask(const MlpParams& params, const Matrix& x, const Matrix& mask, double dropout_keep) {
    check_input(params, x);
    check_keep(dropout_keep);
    if (mask.rows != x.rows || mask.cols != params.arch().hidden1) {
        throw std::invalid_argument("forward_with_mask: mask shape does not match batch x hidden1");
    }
    if (!std::all_of(mask.data.begin(), mask.data.end(), [](double m) { return m == 0.0 || m == 1.0; })) {
        throw std::invalid_argument("forward_with_mask: mask entries must be 0 or 1");
    }
    ForwardTrace trace;
    trace.mode = Mode::kTrain;
    trace.dropout_keep = dropout_keep;
    trace.input = x;
    trace.mask = mask;
    return forward_masked(params, std::move(trace));
}

std::vector<double>
predict(const MlpParams& params, const Matrix& x) {
    Rng unused(0);
    return forward(params, x, Mode::kEval, unused).scores;
}

double
mse_loss(std::span<const double> scores, std::span<const double> labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("mse_loss: scores and labels differ in length");
    }
    if (scores.empty()) {
        throw std::invalid_argument("mse_loss: empty batch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double r = scores[i] - labels[i];
        sum += r * r;
    }
    return sum / static_cast<double>(scores.size());
}

Gradients
backward(const MlpParams& params, const ForwardTrace& trace, std::span<const double> labels) {
    const auto& arch = params.arch();
    const std::size_t batch = trace.batch_size();
    if (!(trace.arch == arch) || trace.z1.cols != arch.hidden1 || trace.h2.cols != arch.hidden2 ||
        trace.input.cols != arch.input_dim) {
        throw std::invalid_argument("backward: trace was produced by a different architecture");
    }
    if (labels.size() != batch || trace.scores.size() != batch) {
        throw std::invalid_argument("backward: label count does not match the traced batch");
    }

    const auto& k = simd::kernels();
    Gradients g(arch);

    // d loss / d score_b
    std::vector<double> residual(batch);
    for (std::size_t b = 0; b < batch; ++b) {
        residual[b] = 2.0 * (trace.scores[b] - labels[b]) / static_cast<double>(batch);
    }

    // Output layer.
    auto gw3 = g.w3();
    for (std::size_t b = 0; b < batch; ++b) {
        g.b3() += residual[b];
        k.axpy(residual[b], trace.h2.row(b).data(), gw3.data(), arch.hidden2);
    }

    // Hidden layer 2.
    const auto w3 = params.w3();
    Matrix delta2(batch, arch.hidden2);
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t j = 0; j < arch.hidden2; ++j) {
            delta2(b, j) = trace.z2(b, j) > 0.0 ? residual[b] * w3[j] : 0.0;
        }
    }
    k.matmul_tn_acc(trace.dropped.data.data(), delta2.data.data(), g.w2().data(), batch, arch.hidden1,
                    arch.hidden2);
    auto gb2 = g.b2();
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t j = 0; j < arch.hidden2; ++j) {
            gb2[j] += delta2(b, j);
        }
    }

    // Back through w2, dropout and the first ReLU.
    Matrix delta1(batch, arch.hidden1);
    k.matmul_nt(delta2.data.data(), params.w2().data(), delta1.data.data(), batch, arch.hidden2,
                arch.hidden1);
    const bool scaled = trace.mode == Mode::kTrain;
    for (std::size_t i = 0; i < delta1.data.size(); ++i) {
        double d = delta1.data[i];
        if (scaled) {
            d = d * trace.mask.data[i] / trace.dropout_keep;
        }
        delta1.data[i] = trace.z1.data[i] > 0.0 ? d : 0.0;
    }
    k.matmul_tn_acc(trace.input.data.data(), delta1.data.data(), g.w1().data(), batch, arch.input_dim,
                    arch.hidden1);
    auto gb1 = g.b1();
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t j = 0; j < arch.hidden1; ++j) {
            gb1[j] += delta1(b, j);
        }
    }
    return g;
}

}  // namespace fusion
