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

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gazekit::kernels {

// Batch kernels for the per-frame geometry inner loop. All arrays are
// structure-of-arrays of length n. The scalar backend is the reference
// semantics; vector backends must agree with it to floating-point noise and
// are checked against it in the test suite. The backend is picked once per
// process from CPU features.

/// out[i] = cos of the angle between gaze direction g[i] (unit length) and
/// the ray from origin o[i] to point p[i]. Degenerate rays (|p - o| ~ 0)
/// yield the sentinel -2.0, which can never win an argmax against a real
/// cosine.
using CosToPointFn = void (*)(const double* gx, const double* gy, const double* gz,
                              const double* ox, const double* oy, const double* oz,
                              const double* px, const double* py, const double* pz, double* out,
                              std::size_t n);

/// Lane-wise running argmax: where cand[i] > best_val[i], set
/// best_val[i] = cand[i] and best_idx[i] = k. Strict comparison keeps the
/// lowest k on exact ties, which implements the lexicographic tie-break when
/// candidates are fed in sorted name order.
using ArgmaxUpdateFn = void (*)(const double* cand, std::int32_t k, double* best_val,
                                std::int32_t* best_idx, std::size_t n);

struct Backend {
    const char* name;
    CosToPointFn cos_to_point;
    ArgmaxUpdateFn argmax_update;
};

/// Portable reference implementation. Always available.
const Backend&
scalar_backend();

/// Every backend usable on this machine, scalar first.
std::vector<const Backend*>
available_backends();

/// The backend selected at startup (widest supported instruction set).
const Backend&
active_backend();

inline void
cos_to_point(const double* gx, const double* gy, const double* gz, const double* ox,
             const double* oy, const double* oz, const double* px, const double* py,
             const double* pz, double* out, std::size_t n) {
    active_backend().cos_to_point(gx, gy, gz, ox, oy, oz, px, py, pz, out, n);
}

inline void
argmax_update(const double* cand, std::int32_t k, double* best_val, std::int32_t* best_idx,
              std::size_t n) {
    active_backend().argmax_update(cand, k, best_val, best_idx, n);
}

}  // namespace gazekit::kernels
