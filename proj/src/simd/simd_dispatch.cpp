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

#include <atomic>
#include <stdexcept>
#include <string>

#include "fusion/simd.h"

namespace fusion::simd {

namespace {

constexpr KernelTable kGenericTable{
    &generic::dot, &generic::axpy, &generic::matmul_acc, &generic::matmul_tn_acc, &generic::matmul_nt,
};

#if defined(FUSION_HAVE_AVX2)
constexpr KernelTable kAvx2Table{
    &avx2::dot, &avx2::axpy, &avx2::matmul_acc, &avx2::matmul_tn_acc, &avx2::matmul_nt,
};
#endif

bool
cpu_has_avx2_fma() {
#if defined(FUSION_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<Backend>&
active() {
    static std::atomic<Backend> backend{detect_backend()};
    return backend;
}

}  // namespace

std::string_view
backend_name(Backend b) {
    switch (b) {
        case Backend::kScalar:
            return "scalar";
        case Backend::kAvx2:
            return "avx2";
    }
    return "unknown";
}

Backend
parse_backend(std::string_view name) {
    if (name == "auto") {
        return detect_backend();
    }
    if (name == "scalar") {
        return Backend::kScalar;
    }
    if (name == "avx2") {
        return Backend::kAvx2;
    }
    throw std::invalid_argument("unknown SIMD backend '" + std::string(name) +
                                "' (expected auto, scalar or avx2)");
}

bool
backend_supported(Backend b) {
    switch (b) {
        case Backend::kScalar:
            return true;
        case Backend::kAvx2:
            return cpu_has_avx2_fma();
    }
    return false;
}

Backend
detect_backend() {
    return backend_supported(Backend::kAvx2) ? Backend::kAvx2 : Backend::kScalar;
}

Backend
active_backend() {
    return active().load(std::memory_order_relaxed);
}

void
set_backend(Backend b) {
    if (!backend_supported(b)) {
        throw std::invalid_argument("SIMD backend '" + std::string(backend_name(b)) +
                                    "' is not supported on this CPU/build");
    }
    active().store(b, std::memory_order_relaxed);
}

const KernelTable&
kernels(Backend b) {
    switch (b) {
        case Backend::kScalar:
            return kGenericTable;
        case Backend::kAvx2:
#if defined(FUSION_HAVE_AVX2)
            return kAvx2Table;
#else
            break;
#endif
    }
    throw std::invalid_argument("SIMD backend '" + std::string(backend_name(b)) + "' not compiled in");
}

const KernelTable&
kernels() {
    return kernels(active_backend());
}

}  // namespace fusion::simd
