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
#include <span>
#include <vector>

namespace fusion {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;

    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {
    }

    std::span<double>
    row(std::size_t r) {
        return {data.data() + r * cols, cols};
    }

    std::span<const double>
    row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }

    double&
    operator()(std::size_t r, std::size_t c) {
        return data[r * cols + c];
    }

    double
    operator()(std::size_t r, std::size_t c) const {
        return data[r * cols + c];
    }

    bool
    operator==(const Matrix&) const = default;
};

}  // namespace fusion
