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
#include <string>
#include <utility>
#include <vector>

namespace gazekit::stats {

// Hypothesis tests used by the analysis battery. Every routine throws
// DegenerateSampleError when the input is one the test is undefined for
// (too few values, zero variance, ...) instead of returning NaN quietly.

struct TestResult {
    std::string name;  // statistic label: "t", "z", "F", "W", ...
    double statistic = 0.0;
    double df1 = 0.0;  // primary degrees of freedom (0 when not applicable)
    double df2 = 0.0;
    double p_value = 1.0;
};

enum class Tail { TwoSided, Greater, Less };

/// Paired t test on matched samples x, y (difference x - y).
TestResult
paired_t_test(const std::vector<double>& x, const std::vector<double>& y,
              Tail tail = Tail::TwoSided);

/// Shapiro-Wilk normality test, Royston's approximation. Valid for
/// 3 <= n <= 5000; subsample larger inputs first.
TestResult
shapiro_wilk(const std::vector<double>& x);

enum class LeveneCenter { Mean, Median };

/// Levene's test for equal variances; Median gives the Brown-Forsythe
/// variant.
TestResult
levene_test(const std::vector<std::vector<double>>& groups,
            LeveneCenter center = LeveneCenter::Mean);

/// One-way fixed-effects analysis of variance.
TestResult
anova_oneway(const std::vector<std::vector<double>>& groups);

struct TukeyPairResult {
    std::size_t group_a = 0;
    std::size_t group_b = 0;
    double mean_diff = 0.0;  // mean(a) - mean(b)
    double q = 0.0;          // studentized range statistic
    double p_value = 1.0;
};

/// Tukey's honestly-significant-difference test over all group pairs,
/// unequal group sizes allowed (Tukey-Kramer standard error).
std::vector<TukeyPairResult>
tukey_hsd(const std::vector<std::vector<double>>& groups);

/// Two-proportion z test with pooled standard error. Successes may be
/// fractional (rate times n). Tail::Greater tests p1 > p2.
TestResult
proportion_z_test(double successes1, double n1, double successes2, double n2,
                  Tail tail = Tail::TwoSided);

/// Kolmogorov-Smirnov test of p-values against Uniform(0,1), asymptotic
/// null distribution. Used to calibrate the battery under true nulls.
TestResult
ks_uniform_test(const std::vector<double>& pvalues);

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double t_value = 0.0;
    double p_value = 1.0;
};

struct RegressionResult {
    std::vector<Coefficient> coefficients;  // intercept first when present
    double r_squared = 0.0;
    double f_statistic = 0.0;
    double f_p_value = 1.0;
    std::size_t n = 0;
    double df_residual = 0.0;
};

/// Two-sided confidence bounds for a fitted coefficient,
/// estimate +- t(1 - (1-level)/2, df_residual) * std_error.
std::pair<double, double>
coefficient_ci(const Coefficient& c, double df_residual, double level = 0.95);

struct OlsOptions {
    bool intercept = true;
    /// Center and scale predictors to unit variance before fitting. Slope
    /// t statistics, F and R^2 are invariant; estimates are per-sd.
    bool standardize = true;
};

/// Ordinary least squares by Householder QR. `columns` are the predictors
/// (one vector per predictor, all of y's length). A rank-deficient design
/// throws RankDeficientError naming the dependent columns.
RegressionResult
ols_regress(const std::vector<std::string>& names,
            const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
            const OlsOptions& options = {});

}  // namespace gazekit::stats
