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

#include "fusion/synthetic_gen.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fusion/rng.h"
#include "json.hpp"

namespace fusion {

void
validate(const SyntheticSpec& spec) {
    if (spec.n_per_class == 0) {
        throw std::invalid_argument("synthetic spec: n_per_class must be positive");
    }
    if (!(spec.text_separation >= 0.0) || !(spec.image_separation >= 0.0) ||
        !std::isfinite(spec.text_separation) || !std::isfinite(spec.image_separation)) {
        throw std::invalid_argument("synthetic spec: separations must be finite and >= 0");
    }
    if (spec.informative_dims_text > kTextDim || spec.informative_dims_image > kImageDim) {
        throw std::invalid_argument("synthetic spec: informative dims exceed modality width");
    }
}

namespace {

void
fill_modality(std::vector<float>& out, std::size_t dim, std::size_t informative, double shift, Rng& rng) {
    out.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double mean = i < informative ? shift : 0.0;
        out[i] = static_cast<float>(mean + rng.normal());
    }
}

}  // namespace

Dataset
generate(const SyntheticSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    Dataset ds;
    ds.records.reserve(2 * spec.n_per_class);
    char id[32];
    for (std::size_t n = 0; n < 2 * spec.n_per_class; ++n) {
        FeatureRecord r;
        std::snprintf(id, sizeof(id), "syn-%06zu", n);
        r.id = id;
        r.label = (n % 2 == 1) ? Label::kHate : Label::kNonHate;
        const double sign = r.label == Label::kHate ? 1.0 : -1.0;
        fill_modality(r.text_vec, kTextDim, spec.informative_dims_text, sign * spec.text_separation / 2.0, rng);
        fill_modality(r.image_vec, kImageDim, spec.informative_dims_image,
                      sign * spec.image_separation / 2.0, rng);
        ds.records.push_back(std::move(r));
    }
    ds.provenance = "synthetic:" + synthetic_spec_to_json(spec);
    return ds;
}

SyntheticSpec
synthetic_spec_from_json(std::string_view text) {
    SyntheticSpec spec;
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object()) {
            throw std::invalid_argument("synthetic spec JSON must be an object");
        }
        for (const auto& [key, value] : j.items()) {
            if (key == "n_per_class") {
                spec.n_per_class = value.get<std::size_t>();
            } else if (key == "text_separation") {
                spec.text_separation = value.get<double>();
            } else if (key == "image_separation") {
                spec.image_separation = value.get<double>();
            } else if (key == "informative_dims_text") {
                spec.informative_dims_text = value.get<std::size_t>();
            } else if (key == "informative_dims_image") {
                spec.informative_dims_image = value.get<std::size_t>();
            } else if (key == "seed") {
                spec.seed = value.get<std::uint64_t>();
            } else {
                throw std::invalid_argument("synthetic spec: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed synthetic spec JSON: ") + e.what());
    }
    validate(spec);
    return spec;
}

std::string
synthetic_spec_to_json(const SyntheticSpec& spec) {
    nlohmann::json j;
    j["n_per_class"] = spec.n_per_class;
    j["text_separation"] = spec.text_separation;
    j["image_separation"] = spec.image_separation;
    j["informative_dims_text"] = spec.informative_dims_text;
    j["informative_dims_image"] = spec.informative_dims_image;
    j["seed"] = spec.seed;
    return j.dump();
}

}  // namespace fusion
