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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fusion/matrix.h"
#include "fusion/rng.h"

namespace fusion {

inline constexpr std::size_t kHiddenWidth = 100;
inline constexpr double kDefaultDropoutKeep = 0.8;

/// input -> hidden1 (ReLU) -> dropout -> hidden2 (ReLU) -> 1 (linear).
/// The fusion head uses hidden widths of 100; tests shrink them.
struct Architecture {
    std::size_t input_dim = 0;
    std::size_t hidden1 = kHiddenWidth;
    std::size_t hidden2 = kHiddenWidth;

    std::size_t
    param_count() const {
        return input_dim * hidden1 + hidden1 + hidden1 * hidden2 + hidden2 + hidden2 + 1;
    }

    bool
    operator==(const Architecture&) const = default;
};

/// Flat parameter storage in checkpoint order w1, b1, w2, b2, w3, b3.
/// w1 is [input_dim x hidden1], w2 is [hidden1 x hidden2], w3 is [hidden2],
/// all row-major.
class ParamBuffer {
public:
    ParamBuffer() = default;

    /// Zero-filled.
    explicit ParamBuffer(Architecture arch);

    const Architecture&
    arch() const {
        return arch_;
    }

    std::span<double>
    values() {
        return values_;
    }
    std::span<const double>
    values() const {
        return values_;
    }

    std::span<double>
    w1() {
        return slice(0, arch_.input_dim * arch_.hidden1);
    }
    std::span<const double>
    w1() const {
        return slice(0, arch_.input_dim * arch_.hidden1);
    }
    std::span<double>
    b1() {
        return slice(off_b1(), arch_.hidden1);
    }
    std::span<const double>
    b1() const {
        return slice(off_b1(), arch_.hidden1);
    }
    std::span<double>
    w2() {
        return slice(off_w2(), arch_.hidden1 * arch_.hidden2);
    }
    std::span<const double>
    w2() const {
        return slice(off_w2(), arch_.hidden1 * arch_.hidden2);
    }
    std::span<double>
    b2() {
        return slice(off_b2(), arch_.hidden2);
    }
    std::span<const double>
    b2() const {
        return slice(off_b2(), arch_.hidden2);
    }
    std::span<double>
    w3() {
        return slice(off_w3(), arch_.hidden2);
    }
    std::span<const double>
    w3() const {
        return slice(off_w3(), arch_.hidden2);
    }
    double&
    b3() {
        return values_.back();
    }
    double
    b3() const {
        return values_.back();
    }

    bool
    all_finite() const;

    bool
    operator==(const ParamBuffer&) const = default;

private:
    std::size_t
    off_b1() const {
        return arch_.input_dim * arch_.hidden1;
    }
    std::size_t
    off_w2() const {
        return off_b1() + arch_.hidden1;
    }
    std::size_t
    off_b2() const {
        return off_w2() + arch_.hidden1 * arch_.hidden2;
    }
    std::size_t
    off_w3() const {
        return off_b2() + arch_.hidden2;
    }

    std::span<double>
    slice(std::size_t off, std::size_t len) {
        return {values_.data() + off, len};
    }
    std::span<const double>
    slice(std::size_t off, std::size_t len) const {
        return {values_.data() + off, len};
    }

    Architecture arch_;
    std::vector<double> values_;
};

class MlpParams : public ParamBuffer {
public:
    using ParamBuffer::ParamBuffer;
};

class Gradients : public ParamBuffer {
public:
    using ParamBuffer::ParamBuffer;
};

/// Weights ~ Uniform(-sqrt(6/fan_in), +sqrt(6/fan_in)) drawn in layout order
/// from Rng(seed); biases are zero.
MlpParams
init_params(Architecture arch, std::uint64_t seed);

MlpParams
init_params(std::size_t input_dim, std::uint64_t seed);

enum class Mode { kTrain, kEval };

/// Everything backward() needs from one forward pass.
struct ForwardTrace {
    Mode mode = Mode::kEval;
    Architecture arch;
    double dropout_keep = 1.0;
    Matrix input;    // B x input_dim
    Matrix z1;       // B x hidden1, pre-activation
    Matrix h1;       // relu(z1)
    Matrix mask;     // B x hidden1, entries 0 or 1; all ones in eval mode
    Matrix dropped;  // h1 * mask / keep
    Matrix z2;       // B x hidden2
    Matrix h2;       // relu(z2)
    std::vector<double> scores;

    std::size_t
    batch_size() const {
        return input.rows;
    }
};

/// Eval mode ignores `rng` and applies no dropout. Train mode draws one
/// Bernoulli(keep) mask entry per hidden1 unit per row (row-major order) and
/// scales kept activations by 1/keep. Throws std::invalid_argument on shape
/// mismatch or non-finite input.
ForwardTrace
forward(const MlpParams& params, const Matrix& x, Mode mode, Rng& rng,
        double dropout_keep = kDefaultDropoutKeep);

/// Train-mode forward with a caller-supplied 0/1 mask.
ForwardTrace
forward_with_mask(const MlpParams& params, const Matrix& x, const Matrix& mask,
                  double dropout_keep = kDefaultDropoutKeep);

/// Eval-mode scores only.
std::vector<double>
predict(const MlpParams& params, const Matrix& x);

/// mean_b (score_b - label_b)^2
double
mse_loss(std::span<const double> scores, std::span<const double> labels);

/// Exact gradients of mse_loss over the batch held in `trace`, reusing its
/// dropout mask. relu'(0) is taken as 0.
Gradients
backward(const MlpParams& params, const ForwardTrace& trace, std::span<const double> labels);

}  // namespace fusion
