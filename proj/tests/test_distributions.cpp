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
#include <random>

#include "data/stats_reference.hpp"
#include "doctest.h"
#include "gazekit/distributions.hpp"
#include "gazekit/errors.hpp"
#include "support/oracles.hpp"

using namespace gazekit;

namespace {

bool
close(double got, double want, double tol) {
    return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("distribution functions reproduce frozen reference values") {
    for (const auto& spot : statsref::kDistSpots) {
        INFO(spot.fn, "(", spot.a, ", ", spot.b, ", ", spot.c, ")");
        if (spot.fn == "t_cdf") {
            CHECK(close(dist::t_cdf(spot.a, spot.b), spot.value, 1e-10));
        } else if (spot.fn == "f_cdf") {
            CHECK(close(dist::f_cdf(spot.a, spot.b, spot.c), spot.value, 1e-10));
        } else if (spot.fn == "norm_cdf") {
            CHECK(close(dist::normal_cdf(spot.a), spot.value, 1e-12));
        } else if (spot.fn == "srange_cdf") {
            CHECK(close(dist::studentized_range_cdf(spot.a, static_cast<int>(spot.b), spot.c),
                        spot.value, 1e-7));
        } else if (spot.fn == "norm_ppf") {
            CHECK(std::abs(dist::normal_ppf(spot.a) - spot.value) <= 1e-10);
        } else {
            FAIL("unknown spot function ", spot.fn);
        }
    }
}

TEST_CASE("normal cdf agrees with direct quadrature of the density") {
    // Integrate the density from 0 (where the CDF is exactly one half) so the
    // quadrature never has to chase an infinite tail.
    for (double z : {-2.5, -0.7, 0.0, 0.9, 2.1}) {
        double body = testoracle::simpson([](double x) { return testoracle::normal_pdf(x); },
                                          std::min(0.0, z), std::max(0.0, z));
        double want = z >= 0.0 ? 0.5 + body : 0.5 - body;
        INFO("z = ", z);
        CHECK(close(dist::normal_cdf(z), want, 1e-10));
        CHECK(close(dist::normal_sf(-z), want, 1e-10));
    }
}

TEST_CASE("t cdf agrees with direct quadrature of the density") {
    const double cases[][2] = {{1.3, 7.0}, {-0.8, 3.0}, {2.2, 25.0}, {0.45, 1.0}};
    for (const auto& c : cases) {
        double t = c[0], df = c[1];
        double body = testoracle::simpson([df](double x) { return testoracle::t_pdf(x, df); },
                                          std::min(0.0, t), std::max(0.0, t));
        double want = t >= 0.0 ? 0.5 + body : 0.5 - body;
        INFO("t = ", t, " df = ", df);
        CHECK(close(dist::t_cdf(t, df), want, 1e-9));
        CHECK(close(dist::t_sf(t, df), 1.0 - want, 1e-9));
    }
}

TEST_CASE("f cdf agrees with direct quadrature of the density") {
    const double cases[][3] = {{2.5, 3.0, 10.0}, {1.2, 8.0, 20.0}, {0.7, 5.0, 5.0}};
    for (const auto& c : cases) {
        double f = c[0], d1 = c[1], d2 = c[2];
        // Substituting x = u^2 removes the density's x^(d1/2 - 1) endpoint
        // singularity, so Simpson converges at full rate for odd d1 too.
        double want = testoracle::simpson(
            [d1, d2](double u) { return testoracle::f_pdf(u * u, d1, d2) * 2.0 * u; },
            0.0, std::sqrt(f));
        INFO("f = ", f, " d1 = ", d1, " d2 = ", d2);
        CHECK(close(dist::f_cdf(f, d1, d2), want, 1e-8));
        CHECK(close(dist::f_sf(f, d1, d2), 1.0 - want, 1e-7));
    }
}

TEST_CASE("incomplete beta satisfies the reflection identity") {
    std::mt19937_64 rng(0xbe7a);
    std::uniform_real_distribution<double> shape(0.2, 20.0);
    std::uniform_real_distribution<double> point(0.01, 0.99);
    for (int i = 0; i < 50; ++i) {
        double a = shape(rng), b = shape(rng), x = point(rng);
        double lhs = dist::incomplete_beta(a, b, x) + dist::incomplete_beta(b, a, 1.0 - x);
        INFO("a=", a, " b=", b, " x=", x);
        CHECK(lhs == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(dist::incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(dist::incomplete_beta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("studentized range with two groups reduces to a folded t") {
    // The range of two samples over a pooled sd is sqrt(2) times an absolute
    // t variate, so the CDFs must agree through that change of variable.
    const double cases[][2] = {{2.0, 5.0}, {3.5, 12.0}, {1.0, 3.0}, {5.0, 60.0}};
    for (const auto& c : cases) {
        double q = c[0], df = c[1];
        double via_t = 2.0 * dist::t_cdf(q / std::sqrt(2.0), df) - 1.0;
        INFO("q = ", q, " df = ", df);
        CHECK(close(dist::studentized_range_cdf(q, 2, df), via_t, 1e-7));
        CHECK(close(dist::studentized_range_sf(q, 2, df), 1.0 - via_t, 1e-6));
    }
}

TEST_CASE("studentized range cdf is monotone in q and in df") {
    double prev = 0.0;
    for (double q = 0.5; q <= 6.0; q += 0.5) {
        double cur = dist::studentized_range_cdf(q, 4, 12.0);
        CHECK(cur >= prev);
        prev = cur;
    }
    // More error df concentrates the pooled sd, tightening the range.
    CHECK(dist::studentized_range_cdf(4.0, 3, 200.0)
          > dist::studentized_range_cdf(4.0, 3, 3.0));
}

TEST_CASE("kolmogorov survival matches its alternating series") {
    for (double lam : {0.4, 0.5, 0.8, 1.0, 1.36, 2.0, 3.0}) {
        double series = 0.0;
        for (int k = 60; k >= 1; --k) {
            double term = 2.0 * std::exp(-2.0 * k * k * lam * lam);
            series += (k % 2 == 1) ? term : -term;
        }
        INFO("lambda = ", lam);
        CHECK(close(dist::kolmogorov_sf(lam), series, 1e-11));
    }
    CHECK(dist::kolmogorov_sf(0.0) == doctest::Approx(1.0));
    CHECK(dist::kolmogorov_sf(8.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quantile functions invert their distributions") {
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
        double z = dist::normal_ppf(p);
        INFO("p = ", p);
        CHECK(close(dist::normal_cdf(z), p, 1e-12));
    }
    for (double x : {-4.0, -1.3, 0.0, 0.25, 2.0, 5.5}) {
        CHECK(std::abs(dist::normal_ppf(dist::normal_cdf(x)) - x) <= 1e-9 * std::max(1.0, x));
    }
    for (double df : {1.0, 4.0, 17.0, 240.0}) {
        for (double p : {0.005, 0.1, 0.5, 0.9, 0.975}) {
            double t = dist::t_ppf(p, df);
            INFO("p = ", p, " df = ", df);
            CHECK(close(dist::t_cdf(t, df), p, 1e-10));
        }
    }
}

TEST_CASE("distribution functions reject degenerate parameters") {
    CHECK_THROWS_AS(dist::normal_ppf(0.0), DegenerateSampleError);
    CHECK_THROWS_AS(dist::normal_ppf(1.0), DegenerateSampleError);
    CHECK_THROWS_AS(dist::normal_ppf(-0.2), DegenerateSampleError);
    CHECK_THROWS_AS(dist::t_cdf(1.0, 0.0), DegenerateSampleError);
    CHECK_THROWS_AS(dist::t_ppf(0.0, 5.0), DegenerateSampleError);
    CHECK_THROWS_AS(dist::f_cdf(1.0, 0.0, 10.0), DegenerateSampleError);
    CHECK_THROWS_AS(dist::incomplete_beta(0.0, 1.0, 0.5), DegenerateSampleError);
    CHECK_THROWS_AS(dist::studentized_range_cdf(2.0, 1, 10.0), DegenerateSampleError);
    CHECK_THROWS_AS(dist::studentized_range_cdf(2.0, 3, 0.0), DegenerateSampleError);
}
