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
#include <random>
#include <string>

#include "fusion/feature_store.h"
#include "fusion/mlp.h"

namespace fusion::testing {

inline FeatureRecord
make_record(const std::string& id, Label label, float text_fill = 0.0f, float image_fill = 0.0f) {
    FeatureRecord r;
    r.id = id;
    r.label = label;
    r.text_vec.assign(kTextDim, text_fill);
    r.image_vec.assign(kImageDim, image_fill);
    return r;
}

/// Records with arbitrary float payloads (including negative zero and
/// subnormals) and a mix of present/absent OCR strings.
inline Dataset
random_dataset(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<float> value(-10.0f, 10.0f);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> len(1, 40);
    Dataset ds;
    for (std::size_t i = 0; i < n; ++i) {
        FeatureRecord r;
        r.id = "rec-" + std::to_string(i) + "-" + std::string(static_cast<std::size_t>(len(gen)) % 7, 'x');
        r.label = coin(gen) ? Label::kHate : Label::kNonHate;
        r.text_vec.resize(kTextDim);
        r.image_vec.resize(kImageDim);
        for (auto& v : r.text_vec) {
            v = value(gen);
        }
        for (auto& v : r.image_vec) {
            v = value(gen);
        }
        r.text_vec[0] = -0.0f;
        r.image_vec[1] = 1e-40f;
        if (coin(gen)) {
            r.ocr_text = "ocr \xc3\xa9 " + std::to_string(len(gen));
        }
        ds.records.push_back(std::move(r));
    }
    return ds;
}

inline Matrix
random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Matrix m(rows, cols);
    for (auto& v : m.data) {
        v = d(gen);
    }
    return m;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("fusion-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir&
    operator=(const TempDir&) = delete;

    const std::filesystem::path&
    path() const {
        return path_;
    }

private:
    std::filesystem::path path_;
};

}  // namespace fusion::testing
