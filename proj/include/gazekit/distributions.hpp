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

namespace gazekit::dist {

// Distribution functions backing the statistics battery. All of these are
// deterministic closed-form or quadrature evaluations; none of them sample.

/// Standard normal CDF, accurate in both tails (erfc based).
double
normal_cdf(double z);

/// 1 - normal_cdf(z) without cancellation.
double
normal_sf(double z);

/// Inverse standard normal CDF for p in (0, 1); refined to full precision
/// with a Halley step. Throws DegenerateSampleError outside (0, 1).
double
normal_ppf(double p);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double
incomplete_beta(double a, double b, double x);

/// Student t CDF / survival with df > 0.
double
t_cdf(double t, double df);
double
t_sf(double t, double df);

/// Student t quantile: the x with t_cdf(x, df) = p, for p in (0, 1).
double
t_ppf(double p, double df);

/// F distribution CDF / survival with d1, d2 > 0.
double
f_cdf(double f, double d1, double d2);
double
f_sf(double f, double d1, double d2);

/// CDF of the studentized range with k groups and df error degrees of
/// freedom, evaluated by nested Gauss-Legendre quadrature: the range
/// probability over the normal axis, integrated against the chi-scale
/// density of the pooled standard deviation.
double
studentized_range_cdf(double q, int k, double df);
double
studentized_range_sf(double q, int k, double df);

/// Kolmogorov limiting distribution survival P(sqrt(n) D > lambda).
double
kolmogorov_sf(double lambda);

}  // namespace gazekit::dist
