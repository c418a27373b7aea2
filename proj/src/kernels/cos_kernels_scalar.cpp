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

#include <cmath>

#include "backends.hpp"

namespace gazekit::kernels {

namespace {

void
cos_to_point_scalar(const double* gx, const double* gy, const double* gz, const double* ox,
                    const double* oy, const double* oz, const double* px, const double* py,
                    const double* pz, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double dx = px[i] - ox[i];
        double dy = py[i] - oy[i];
        double dz = pz[i] - oz[i];
        double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 < kDegenerateD2) {
            out[i] = kDegenerateCos;
            continue;
        }
        double dot = gx[i] * dx + gy[i] * dy + gz[i] * dz;
        out[i] = dot / std::sqrt(d2);
    }
}

void
argmax_update_scalar(const double* cand, std::int32_t k, double* best_val, std::int32_t* best_idx,
                     std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (cand[i] > best_val[i]) {
            best_val[i] = cand[i];
            best_idx[i] = k;
        }
    }
}

}  // namespace

const Backend&
scalar_backend() {
    static const Backend backend{"scalar", &cos_to_point_scalar, &argmax_update_scalar};
    return backend;
}

}  // namespace gazekit::kernels
