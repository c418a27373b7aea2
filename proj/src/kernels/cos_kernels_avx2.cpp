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

// This file is the only one compiled with -mavx2 -mfma. It must not be
// entered unless CPUID reports both features (dispatch.cpp guards that).

#if defined(GAZEKIT_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

#include "backends.hpp"

namespace gazekit::kernels {

namespace {

void
cos_to_point_avx2(const double* gx, const double* gy, const double* gz, const double* ox,
                  const double* oy, const double* oz, const double* px, const double* py,
                  const double* pz, double* out, std::size_t n) {
    const __m256d eps = _mm256_set1_pd(kDegenerateD2);
    const __m256d sentinel = _mm256_set1_pd(kDegenerateCos);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(ox + i));
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(py + i), _mm256_loadu_pd(oy + i));
        __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(pz + i), _mm256_loadu_pd(oz + i));
        __m256d d2 = _mm256_mul_pd(dx, dx);
        d2 = _mm256_fmadd_pd(dy, dy, d2);
        d2 = _mm256_fmadd_pd(dz, dz, d2);
        __m256d dot = _mm256_mul_pd(_mm256_loadu_pd(gx + i), dx);
        dot = _mm256_fmadd_pd(_mm256_loadu_pd(gy + i), dy, dot);
        dot = _mm256_fmadd_pd(_mm256_loadu_pd(gz + i), dz, dot);
        __m256d cosv = _mm256_div_pd(dot, _mm256_sqrt_pd(d2));
        __m256d bad = _mm256_cmp_pd(d2, eps, _CMP_LT_OQ);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(cosv, sentinel, bad));
    }
    for (; i < n; ++i) {
        double dx = px[i] - ox[i];
        double dy = py[i] - oy[i];
        double dz = pz[i] - oz[i];
        double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 < kDegenerateD2) {
            out[i] = kDegenerateCos;
            continue;
        }
        out[i] = (gx[i] * dx + gy[i] * dy + gz[i] * dz) / std::sqrt(d2);
    }
}

void
argmax_update_avx2(const double* cand, std::int32_t k, double* best_val, std::int32_t* best_idx,
                   std::size_t n) {
    const __m128i kv = _mm_set1_epi32(k);
    // Gathers the low 32 bits of each 64-bit comparison mask into the first
    // four int32 lanes, turning a double mask into an int32 mask.
    const __m256i pack = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d c = _mm256_loadu_pd(cand + i);
        __m256d b = _mm256_loadu_pd(best_val + i);
        __m256d gt = _mm256_cmp_pd(c, b, _CMP_GT_OQ);
        _mm256_storeu_pd(best_val + i, _mm256_blendv_pd(b, c, gt));
        __m256i wide = _mm256_castpd_si256(gt);
        __m128i mask32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(wide, pack));
        __m128i old = _mm_loadu_si128(reinterpret_cast<const __m128i*>(best_idx + i));
        __m128i mixed = _mm_blendv_epi8(old, kv, mask32);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(best_idx + i), mixed);
    }
    for (; i < n; ++i) {
        if (cand[i] > best_val[i]) {
            best_val[i] = cand[i];
            best_idx[i] = k;
        }
    }
}

}  // namespace

const Backend&
avx2_backend() {
    static const Backend backend{"avx2", &cos_to_point_avx2, &argmax_update_avx2};
    return backend;
}

}  // namespace gazekit::kernels

#endif  // GAZEKIT_HAVE_AVX2
