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

#include "fusion/simd.h"

namespace fusion::simd::generic {

double
dot(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

void
axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

void
matmul_acc(const double* a, const double* w, double* c, std::size_t rows, std::size_t k,
           std::size_t n) {
    // k outermost so each row of W is streamed once per call.
    for (std::size_t p = 0; p < k; ++p) {
        const double* w_row = w + p * n;
        for (std::size_t r = 0; r < rows; ++r) {
            const double alpha = a[r * k + p];
            double* c_row = c + r * n;
            for (std::size_t j = 0; j < n; ++j) {
                c_row[j] += alpha * w_row[j];
            }
        }
    }
}

void
matmul_tn_acc(const double* a, const double* d, double* g, std::size_t rows, std::size_t k,
              std::size_t n) {
    for (std::size_t p = 0; p < k; ++p) {
        double* g_row = g + p * n;
        for (std::size_t r = 0; r < rows; ++r) {
            const double alpha = a[r * k + p];
            const double* d_row = d + r * n;
            for (std::size_t j = 0; j < n; ++j) {
                g_row[j] += alpha * d_row[j];
            }
        }
    }
}

void
matmul_nt(const double* d, const double* w, double* out, std::size_t rows, std::size_t n,
          std::size_t k) {
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t p = 0; p < k; ++p) {
            out[r * k + p] = dot(d + r * n, w + p * n, n);
        }
    }
}

}  // namespace fusion::simd::generic
