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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "data/stats_reference.hpp"
#include "doctest.h"
#include "gazekit/distributions.hpp"
#include "gazekit/errors.hpp"
#include "gazekit/stats.hpp"

using namespace gazekit;

namespace {

constexpr double kRel = 1e-6;

bool
rel_close(double got, double want, double tol = kRel) {
    if (!std::isfinite(got) || !std::isfinite(want)) {
        return false;
    }
    return std::abs(got - want) <= tol * std::max(std::abs(want), 1e-12);
}

double
mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("paired t test matches the reference datasets") {
    REQUIRE(statsref::kPairedT.size() >= 20);
    for (std::size_t i = 0; i < statsref::kPairedT.size(); ++i) {
        const auto& c = statsref::kPairedT[i];
        auto r = stats::paired_t_test(c.x, c.y);
        INFO("dataset ", i);
        CHECK(r.name == "t");
        CHECK(r.df1 == doctest::Approx(static_cast<double>(c.x.size() - 1)));
        CHECK(rel_close(r.statistic, c.t));
        CHECK(rel_close(r.p_value, c.p));
    }
}

TEST_CASE("paired t test tails partition the distribution") {
    const auto& c = statsref::kPairedT.front();
    auto two = stats::paired_t_test(c.x, c.y, stats::Tail::TwoSided);
    auto hi = stats::paired_t_test(c.x, c.y, stats::Tail::Greater);
    auto lo = stats::paired_t_test(c.x, c.y, stats::Tail::Less);
    CHECK(hi.statistic == doctest::Approx(two.statistic));
    CHECK(hi.p_value + lo.p_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(two.p_value == doctest::Approx(2.0 * std::min(hi.p_value, lo.p_value)));
}

TEST_CASE("one-way anova matches the reference datasets") {
    REQUIRE(statsref::kAnova.size() >= 20);
    for (std::size_t i = 0; i < statsref::kAnova.size(); ++i) {
        const auto& c = statsref::kAnova[i];
        auto r = stats::anova_oneway(c.groups);
        std::size_t n_total = 0;
        for (const auto& g : c.groups) {
            n_total += g.size();
        }
        INFO("dataset ", i);
        CHECK(r.name == "F");
        CHECK(r.df1 == doctest::Approx(static_cast<double>(c.groups.size() - 1)));
        CHECK(r.df2 == doctest::Approx(static_cast<double>(n_total - c.groups.size())));
        CHECK(rel_close(r.statistic, c.stat));
        CHECK(rel_close(r.p_value, c.p));
    }
}

TEST_CASE("levene test matches the reference in both centering modes") {
    REQUIRE(statsref::kLevene.size() >= 20);
    bool saw_mean = false;
    bool saw_median = false;
    for (std::size_t i = 0; i < statsref::kLevene.size(); ++i) {
        const auto& c = statsref::kLevene[i];
        auto center = stats::LeveneCenter::Mean;
        if (c.center == "median") {
            center = stats::LeveneCenter::Median;
            saw_median = true;
        } else {
            REQUIRE(c.center == "mean");
            saw_mean = true;
        }
        auto r = stats::levene_test(c.groups, center);
        INFO("dataset ", i, " center ", c.center);
        CHECK(r.name == "W_levene");
        CHECK(rel_close(r.statistic, c.w));
        CHECK(rel_close(r.p_value, c.p));
    }
    CHECK(saw_mean);
    CHECK(saw_median);
}

TEST_CASE("tukey hsd matches the reference pair tables") {
    REQUIRE(statsref::kTukey.size() >= 20);
    for (std::size_t i = 0; i < statsref::kTukey.size(); ++i) {
        const auto& c = statsref::kTukey[i];
        auto rows = stats::tukey_hsd(c.groups);
        REQUIRE(rows.size() == c.pairs.size());
        for (const auto& want : c.pairs) {
            auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& row) {
                return row.group_a == static_cast<std::size_t>(want.a)
                       && row.group_b == static_cast<std::size_t>(want.b);
            });
            REQUIRE(it != rows.end());
            INFO("dataset ", i, " pair ", want.a, "-", want.b);
            CHECK(rel_close(it->q, want.q));
            // The range distribution tail is integrated directly (never as
            // 1 - cdf), so even p values near 1e-6 keep relative precision.
            CHECK(rel_close(it->p_value, want.p));
            double diff = mean_of(c.groups[static_cast<std::size_t>(want.a)])
                          - mean_of(c.groups[static_cast<std::size_t>(want.b)]);
            CHECK(it->mean_diff == doctest::Approx(diff).epsilon(1e-12));
        }
    }
}

TEST_CASE("shapiro-wilk matches the reference across sample sizes") {
    REQUIRE(statsref::kShapiro.size() >= 20);
    for (std::size_t i = 0; i < statsref::kShapiro.size(); ++i) {
        const auto& c = statsref::kShapiro[i];
        auto r = stats::shapiro_wilk(c.x);
        INFO("dataset ", i, " n = ", c.x.size());
        CHECK(r.name == "W");
        CHECK(rel_close(r.statistic, c.w));
        CHECK(rel_close(r.p_value, c.p, 5e-4));
    }
}

TEST_CASE("ols regression matches the reference fits") {
    REQUIRE(statsref::kOls.size() >= 20);
    stats::OlsOptions opts;
    opts.intercept = true;
    opts.standardize = false;
    for (std::size_t i = 0; i < statsref::kOls.size(); ++i) {
        const auto& c = statsref::kOls[i];
        const auto n = static_cast<std::size_t>(c.n);
        const auto p = static_cast<std::size_t>(c.p);
        std::vector<std::vector<double>> columns(p, std::vector<double>(n));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t j = 0; j < p; ++j) {
                columns[j][r] = c.x_rowmajor[r * p + j];
            }
        }
        std::vector<std::string> names(p);
        for (std::size_t j = 0; j < p; ++j) {
            names[j] = "x" + std::to_string(j);
        }
        auto fit = stats::ols_regress(names, columns, c.y, opts);
        INFO("dataset ", i, " n = ", n, " p = ", p);
        REQUIRE(fit.coefficients.size() == p + 1);
        REQUIRE(c.beta.size() == p + 1);
        CHECK(fit.n == n);
        CHECK(fit.df_residual == doctest::Approx(static_cast<double>(n - p - 1)));
        for (std::size_t j = 0; j < p + 1; ++j) {
            INFO("coefficient ", j);
            CHECK(rel_close(fit.coefficients[j].estimate, c.beta[j]));
            CHECK(rel_close(fit.coefficients[j].std_error, c.se[j]));
            CHECK(rel_close(fit.coefficients[j].t_value, c.t[j]));
            CHECK(rel_close(fit.coefficients[j].p_value, c.pval[j]));
        }
        CHECK(rel_close(fit.r_squared, c.r2));
        CHECK(rel_close(fit.f_statistic, c.f));
        CHECK(rel_close(fit.f_p_value, c.f_p));
    }
}

TEST_CASE("standardizing predictors keeps inference invariant") {
    const auto& c = statsref::kOls.front();
    const auto n = static_cast<std::size_t>(c.n);
    const auto p = static_cast<std::size_t>(c.p);
    std::vector<std::vector<double>> columns(p, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < p; ++j) {
            columns[j][r] = c.x_rowmajor[r * p + j];
        }
    }
    std::vector<std::string> names(p, "x");
    for (std::size_t j = 0; j < p; ++j) {
        names[j] = "x" + std::to_string(j);
    }
    auto raw = stats::ols_regress(names, columns, c.y, {true, false});
    auto std_fit = stats::ols_regress(names, columns, c.y, {true, true});
    CHECK(std_fit.r_squared == doctest::Approx(raw.r_squared).epsilon(1e-10));
    CHECK(std_fit.f_statistic == doctest::Approx(raw.f_statistic).epsilon(1e-10));
    for (std::size_t j = 1; j <= p; ++j) {
        CHECK(std_fit.coefficients[j].t_value
              == doctest::Approx(raw.coefficients[j].t_value).epsilon(1e-10));
        CHECK(std_fit.coefficients[j].p_value
              == doctest::Approx(raw.coefficients[j].p_value).epsilon(1e-10));
    }
}

TEST_CASE("rank-deficient designs are rejected with the column named") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    std::vector<double> twice = {2.0, 4.0, 6.0, 8.0, 10.0, 12.0};
    std::vector<double> y = {1.1, 2.0, 2.9, 4.2, 5.1, 5.8};
    CHECK_THROWS_WITH_AS(
        stats::ols_regress({"a", "a_doubled"}, {x, twice}, y, {true, false}),
        doctest::Contains("a_doubled"), RankDeficientError);
}

TEST_CASE("coefficient_ci reproduces the textbook t interval") {
    stats::Coefficient c;
    c.name = "slope";
    c.estimate = 1.5;
    c.std_error = 0.2;
    auto [lo, hi] = stats::coefficient_ci(c, 10.0);
    double tcrit = dist::t_ppf(0.975, 10.0);
    CHECK(lo == doctest::Approx(1.5 - tcrit * 0.2));
    CHECK(hi == doctest::Approx(1.5 + tcrit * 0.2));
    auto [lo90, hi90] = stats::coefficient_ci(c, 10.0, 0.90);
    CHECK(lo90 > lo);
    CHECK(hi90 < hi);
}

TEST_CASE("two-proportion z test is antisymmetric and hand-checkable") {
    auto r = stats::proportion_z_test(45.0, 100.0, 30.0, 100.0);
    double pool = 75.0 / 200.0;
    double se = std::sqrt(pool * (1.0 - pool) * (1.0 / 100.0 + 1.0 / 100.0));
    CHECK(r.name == "z");
    CHECK(r.statistic == doctest::Approx((0.45 - 0.30) / se));
    auto flipped = stats::proportion_z_test(30.0, 100.0, 45.0, 100.0);
    CHECK(flipped.statistic == doctest::Approx(-r.statistic));
    CHECK(flipped.p_value == doctest::Approx(r.p_value));

    auto greater = stats::proportion_z_test(45.0, 100.0, 30.0, 100.0, stats::Tail::Greater);
    CHECK(greater.p_value == doctest::Approx(dist::normal_sf(r.statistic)));
    CHECK(r.p_value == doctest::Approx(2.0 * greater.p_value));
}

TEST_CASE("ks uniformity check separates uniform from clumped p-values") {
    std::vector<double> even(200);
    for (std::size_t i = 0; i < even.size(); ++i) {
        even[i] = (static_cast<double>(i) + 0.5) / 200.0;
    }
    auto good = stats::ks_uniform_test(even);
    CHECK(good.name == "D");
    CHECK(good.p_value > 0.5);

    std::vector<double> clumped(200, 0.01);
    auto bad = stats::ks_uniform_test(clumped);
    CHECK(bad.p_value < 1e-6);
}

TEST_CASE("degenerate inputs raise DegenerateSampleError") {
    CHECK_THROWS_AS(stats::paired_t_test({1.0, 2.0}, {1.0}), DegenerateSampleError);
    CHECK_THROWS_AS(stats::paired_t_test({1.0}, {2.0}), DegenerateSampleError);
    CHECK_THROWS_AS(stats::paired_t_test({1.0, 2.0, 3.0}, {0.0, 1.0, 2.0}),
                    DegenerateSampleError);  // constant differences
    CHECK_THROWS_AS(stats::shapiro_wilk({1.0, 2.0}), DegenerateSampleError);
    CHECK_THROWS_AS(stats::shapiro_wilk(std::vector<double>(5001, 0.5)),
                    DegenerateSampleError);
    CHECK_THROWS_AS(stats::shapiro_wilk({3.0, 3.0, 3.0, 3.0}), DegenerateSampleError);
    CHECK_THROWS_AS(stats::anova_oneway({{1.0, 2.0}}), DegenerateSampleError);
    CHECK_THROWS_AS(stats::anova_oneway({{1.0, 1.0}, {1.0, 1.0}}), DegenerateSampleError);
    CHECK_THROWS_AS(stats::levene_test({{1.0, 2.0}, {3.0}}), DegenerateSampleError);
    CHECK_THROWS_AS(stats::proportion_z_test(5.0, 0.0, 1.0, 10.0), DegenerateSampleError);
    CHECK_THROWS_AS(stats::proportion_z_test(11.0, 10.0, 1.0, 10.0), DegenerateSampleError);
    CHECK_THROWS_AS(stats::proportion_z_test(0.0, 10.0, 0.0, 10.0), DegenerateSampleError);
    CHECK_THROWS_AS(stats::ks_uniform_test({}), DegenerateSampleError);
    CHECK_THROWS_AS(stats::ks_uniform_test({0.5, 1.5}), DegenerateSampleError);
    double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(stats::paired_t_test({1.0, nan, 3.0}, {0.0, 1.0, 2.0}),
                    DegenerateSampleError);
}
