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
#include <string_view>

// Dense double-precision kernels used by the MLP. Every kernel has a scalar
// reference in `generic::` and, on x86-64 builds, an AVX2+FMA variant in
// `avx2::`. The entry points in `fusion::simd` forward to whichever backend is
// active; the choice is made once from CPUID and can be overridden.
//
// All matrices are row-major and densely packed. Per output element the
// accumulation order is the same in every backend (ascending inner index),
// except `dot`/`matmul_nt`, whose AVX2 variants use four partial sums.
// Backends therefore agree to rounding, not bit-for-bit; a single backend is
// deterministic.

namespace fusion::simd {

enum class Backend { kScalar, kAvx2 };

std::string_view
backend_name(Backend b);

/// Parses "scalar", "avx2" or "auto" (best supported).
Backend
parse_backend(std::string_view name);

bool
backend_supported(Backend b);

/// Best backend this CPU and build support.
Backend
detect_backend();

Backend
active_backend();

/// Throws std::invalid_argument if `b` is not supported here.
void
set_backend(Backend b);

// Kernel signatures shared by all backends.

/// sum_i a[i] * b[i]
using DotFn = double (*)(const double* a, const double* b, std::size_t n);

/// y[i] += alpha * x[i]
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);

/// C[rows x n] += A[rows x k] * W[k x n]
using MatmulAccFn = void (*)(const double* a, const double* w, double* c, std::size_t rows,
                             std::size_t k, std::size_t n);

/// G[k x n] += A[rows x k]^T * D[rows x n]
using MatmulTnAccFn = void (*)(const double* a, const double* d, double* g, std::size_t rows,
                               std::size_t k, std::size_t n);

/// Out[rows x k] = D[rows x n] * W[k x n]^T
using MatmulNtFn = void (*)(const double* d, const double* w, double* out, std::size_t rows,
                            std::size_t n, std::size_t k);

struct KernelTable {
    DotFn dot;
    AxpyFn axpy;
    MatmulAccFn matmul_acc;
    MatmulTnAccFn matmul_tn_acc;
    MatmulNtFn matmul_nt;
};

/// Table for a specific backend; throws if it is not compiled in.
const KernelTable&
kernels(Backend b);

/// Table for the active backend.
const KernelTable&
kernels();

namespace generic {
double
dot(const double* a, const double* b, std::size_t n);
void
axpy(double alpha, const double* x, double* y, std::size_t n);
void
matmul_acc(const double* a, const double* w, double* c, std::size_t rows, std::size_t k,
           std::size_t n);
void
matmul_tn_acc(const double* a, const double* d, double* g, std::size_t rows, std::size_t k,
              std::size_t n);
void
matmul_nt(const double* d, const double* w, double* out, std::size_t rows, std::size_t n,
          std::size_t k);
}  // namespace generic

#if defined(FUSION_HAVE_AVX2)
namespace avx2 {
double
dot(const double* a, const double* b, std::size_t n);
void
axpy(double alpha, const double* x, double* y, std::size_t n);
void
matmul_acc(const double* a, const double* w, double* c, std::size_t rows, std::size_t k,
           std::size_t n);
void
matmul_tn_acc(const double* a, const double* d, double* g, std::size_t rows, std::size_t k,
              std::size_t n);
void
matmul_nt(const double* d, const double* w, double* out, std::size_t rows, std::size_t n,
          std::size_t k);
}  // namespace avx2
#endif

}  // namespace fusion::simd
