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
#include <string>
#include <string_view>

#include "fusion/feature_store.h"

namespace fusion {

/// Gaussian class-conditional generator. On the first `informative_dims_*`
/// components of a modality, class 1 is drawn from Normal(+sep/2, 1) and
/// class 0 from Normal(-sep/2, 1); every other component is Normal(0, 1).
struct SyntheticSpec {
    std::size_t n_per_class = 500;
    double text_separation = 0.5;
    double image_separation = 3.0;
    std::size_t informative_dims_text = 32;
    std::size_t informative_dims_image = 32;
    std::uint64_t seed = 0;

    bool
    operator==(const SyntheticSpec&) const = default;
};

void
validate(const SyntheticSpec& spec);

/// Records alternate non-hate / hate, ids "syn-000000", "syn-000001", ...
/// Components are drawn in record order, text before image, as double and
/// rounded to float32.
Dataset
generate(const SyntheticSpec& spec);

/// Missing keys keep their defaults; unknown keys are rejected.
SyntheticSpec
synthetic_spec_from_json(std::string_view text);

std::string
synthetic_spec_to_json(const SyntheticSpec& spec);

}  // namespace fusion
