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

#include <immintrin.h>

#include <cmath>

#include "fusion/simd.h"

namespace fusion::simd::avx2 {

namespace {

// y[j] = fma(alpha, x[j], y[j]) for j < n
inline void
fma_row(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t j = 0;
    for (; j + 16 <= n; j += 16) {
        __m256d y0 = _mm256_loadu_pd(y + j);
        __m256d y1 = _mm256_loadu_pd(y + j + 4);
        __m256d y2 = _mm256_loadu_pd(y + j + 8);
        __m256d y3 = _mm256_loadu_pd(y + j + 12);
        y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + j), y0);
        y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + j + 4), y1);
        y2 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + j + 8), y2);
        y3 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + j + 12), y3);
        _mm256_storeu_pd(y + j, y0);
        _mm256_storeu_pd(y + j + 4, y1);
        _mm256_storeu_pd(y + j + 8, y2);
        _mm256_storeu_pd(y + j + 12, y3);
    }
    for (; j + 4 <= n; j += 4) {
        __m256d yv = _mm256_loadu_pd(y + j);
        yv = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + j), yv);
        _mm256_storeu_pd(y + j, yv);
    }
    for (; j < n; ++j) {
        y[j] = std::fma(alpha, x[j], y[j]);
    }
}

inline double
hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double
dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double sum = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
    for (; i < n; ++i) {
        sum = std::fma(a[i], b[i], sum);
    }
    return sum;
}

void
axpy(double alpha, const double* x, double* y, std::size_t n) {
    fma_row(alpha, x, y, n);
}

void
matmul_acc(const double* a, const double* w, double* c, std::size_t rows, std::size_t k,
           std::size_t n) {
    for (std::size_t p = 0; p < k; ++p) {
        const double* w_row = w + p * n;
        for (std::size_t r = 0; r < rows; ++r) {
            fma_row(a[r * k + p], w_row, c + r * n, n);
        }
    }
}

void
matmul_tn_acc(const double* a, const double* d, double* g, std::size_t rows, std::size_t k,
              std::size_t n) {
    for (std::size_t p = 0; p < k; ++p) {
        double* g_row = g + p * n;
        for (std::size_t r = 0; r < rows; ++r) {
            fma_row(a[r * k + p], d + r * n, g_row, n);
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

}  // namespace fusion::simd::avx2
