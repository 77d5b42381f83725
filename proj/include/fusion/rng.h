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

namespace fusion {

/// SplitMix64 step. Used for seed expansion and for deriving independent
/// stream seeds from a (seed, stream) pair.
std::uint64_t
splitmix64_next(std::uint64_t& state);

/// Mixes a stream index into a base seed. Different streams of the same seed
/// produce unrelated generator states.
std::uint64_t
derive_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256++ (Blackman & Vigna). The algorithm is fixed and portable, so a
/// given seed yields the same sequence on every platform and in every
/// implementation that follows the published reference code.
class Rng {
public:
    /// State is expanded from `seed` with SplitMix64, four outputs.
    explicit Rng(std::uint64_t seed);

    /// Raw state constructor; an all-zero state is replaced by Rng(0).
    static Rng
    from_state(std::uint64_t s0, std::uint64_t s1, std::uint64_t s2, std::uint64_t s3);

    std::uint64_t
    next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double
    uniform();

    /// Uniform double in [lo, hi).
    double
    uniform(double lo, double hi);

    /// Unbiased integer in [0, bound) by rejection on the top of the 64-bit
    /// range. `bound` must be > 0.
    std::uint64_t
    below(std::uint64_t bound);

    /// Standard normal via the Box-Muller transform. The second variate of each
    /// pair is cached and returned by the next call.
    double
    normal();

    bool
    bernoulli(double p) {
        return uniform() < p;
    }

    bool
    operator==(const Rng&) const = default;

private:
    Rng() = default;

    std::uint64_t s_[4]{};
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// In-place Fisher-Yates shuffle driven by Rng::below.
template <typename T>
void
shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace fusion
