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

#include "gazekit/kernels.hpp"

namespace gazekit::kernels {

// Squared-length floor below which a candidate ray is considered degenerate.
inline constexpr double kDegenerateD2 = 1e-18;
inline constexpr double kDegenerateCos = -2.0;

#if defined(GAZEKIT_HAVE_AVX2)
const Backend&
avx2_backend();
#endif

}  // namespace gazekit::kernels
