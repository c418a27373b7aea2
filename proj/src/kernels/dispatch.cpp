// Copyright 2025-present the gazekit project
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

#include "backends.hpp"

namespace gazekit::kernels {

namespace {

bool
cpu_has_avx2() {
#if defined(GAZEKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace

std::vector<const Backend*>
available_backends() {
    std::vector<const Backend*> out{&scalar_backend()};
#if defined(GAZEKIT_HAVE_AVX2)
    if (cpu_has_avx2()) {
        out.push_back(&avx2_backend());
    }
#endif
    return out;
}

const Backend&
active_backend() {
    static const Backend* picked = [] {
        const Backend* best = &scalar_backend();
#if defined(GAZEKIT_HAVE_AVX2)
        if (cpu_has_avx2()) {
            best = &avx2_backend();
        }
#endif
        return best;
    }();
    return *picked;
}

}  // namespace gazekit::kernels
