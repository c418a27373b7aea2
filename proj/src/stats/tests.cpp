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
#include <numbers>

#include "gazekit/distributions.hpp"
#include "gazekit/errors.hpp"
#include "gazekit/stats.hpp"

namespace gazekit::stats {

namespace {

double
mean_of(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

double
median_of(std::vector<double> x) {
    std::size_t n = x.size();
    auto mid = x.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(x.begin(), mid, x.end());
    double hi = *mid;
    if (n % 2 == 1) {
        return hi;
    }
    auto lo = std::max_element(x.begin(), mid);
    return 0.5 * (*lo + hi);
}

void
check_finite(const std::vector<double>& x, const char* what) {
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw DegenerateSampleError(std::string(what) + " contains a non-finite value");
        }
    }
}

double
two_sided_from_sf(double sf_abs) {
    double p = 2.0 * sf_abs;
    return p > 1.0 ? 1.0 : p;
}

double
tail_p_from_z(double z, Tail tail) {
    switch (tail) {
    case Tail::TwoSided:
        return two_sided_from_sf(dist::normal_sf(std::abs(z)));
    case Tail::Greater:
        return dist::normal_sf(z);
    case Tail::Less:
        return dist::normal_cdf(z);
    }
    throw InvariantError("unknown tail");
}

}  // namespace

TestResult
paired_t_test(const std::vector<double>& x, const std::vector<double>& y, Tail tail) {
    if (x.size() != y.size()) {
        throw DegenerateSampleError("paired t test requires equal-length samples");
    }
    std::size_t n = x.size();
    if (n < 2) {
        throw DegenerateSampleError("paired t test requires at least two pairs");
    }
    check_finite(x, "sample x");
    check_finite(y, "sample y");
    double dbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dbar += x[i] - y[i];
    }
    dbar /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dev = (x[i] - y[i]) - dbar;
        ss += dev * dev;
    }
    if (!(ss > 0.0)) {
        throw DegenerateSampleError("paired differences have zero variance");
    }
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    double df = static_cast<double>(n - 1);
    double t = dbar / (sd / std::sqrt(static_cast<double>(n)));

    TestResult r;
    r.name = "t";
    r.statistic = t;
    r.df1 = df;
    switch (tail) {
    case Tail::TwoSided:
        r.p_value = two_sided_from_sf(dist::t_sf(std::abs(t), df));
        break;
    case Tail::Greater:
        r.p_value = dist::t_sf(t, df);
        break;
    case Tail::Less:
        r.p_value = dist::t_cdf(t, df);
        break;
    }
    return r;
}

TestResult
shapiro_wilk(const std::vector<double>& x) {
    // Royston's AS R94 approximation to the Shapiro-Wilk W test.
    std::size_t n = x.size();
    if (n < 3) {
        throw DegenerateSampleError("shapiro_wilk requires at least 3 values");
    }
    if (n > 5000) {
        throw DegenerateSampleError("shapiro_wilk is calibrated up to n = 5000; subsample");
    }
    check_finite(x, "sample");
    std::vector<double> s(x);
    std::sort(s.begin(), s.end());
    if (!(s.back() - s.front() > 0.0)) {
        throw DegenerateSampleError("sample has zero range");
    }

    const auto nd = static_cast<double>(n);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = dist::normal_ppf((static_cast<double>(i + 1) - 0.375) / (nd + 0.25));
    }
    double ssumm2 = 0.0;
    for (double v : m) {
        ssumm2 += v * v;
    }
    double rsn = 1.0 / std::sqrt(nd);

    std::vector<double> a(n, 0.0);
    if (n == 3) {
        a[0] = -std::numbers::sqrt2 / 2.0;
        a[2] = -a[0];
    } else {
        double u = rsn;
        double cn = m[n - 1] / std::sqrt(ssumm2);
        double an = cn + 0.221157 * u - 0.147981 * u * u - 2.071190 * u * u * u +
                    4.434685 * u * u * u * u - 2.706056 * u * u * u * u * u;
        if (n <= 5) {
            double phi = (ssumm2 - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * an * an);
            a[n - 1] = an;
            a[0] = -an;
            for (std::size_t i = 1; i + 1 < n; ++i) {
                a[i] = m[i] / std::sqrt(phi);
            }
        } else {
            double cn1 = m[n - 2] / std::sqrt(ssumm2);
            double an1 = cn1 + 0.042981 * u - 0.293762 * u * u - 1.752461 * u * u * u +
                         5.682633 * u * u * u * u - 3.582633 * u * u * u * u * u;
            double phi = (ssumm2 - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
                         (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
            a[n - 1] = an;
            a[n - 2] = an1;
            a[0] = -an;
            a[1] = -an1;
            for (std::size_t i = 2; i + 2 < n; ++i) {
                a[i] = m[i] / std::sqrt(phi);
            }
        }
    }

    double xbar = mean_of(s);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += a[i] * s[i];
        double dev = s[i] - xbar;
        den += dev * dev;
    }
    double w = num * num / den;
    if (w > 1.0) {
        w = 1.0;
    }

    double p;
    if (n == 3) {
        p = (6.0 / std::numbers::pi) * (std::asin(std::sqrt(w)) - std::asin(std::sqrt(0.75)));
        p = std::clamp(p, 0.0, 1.0);
    } else if (n <= 11) {
        double gamma = -2.273 + 0.459 * nd;
        double arg = gamma - std::log1p(-w);
        if (!(arg > 0.0)) {
            p = 0.0;  // beyond the approximation's range; W this low is conclusive
        } else {
            double lw = -std::log(arg);
            double mu = 0.5440 - 0.39978 * nd + 0.025054 * nd * nd - 0.0006714 * nd * nd * nd;
            double sigma = std::exp(1.3822 - 0.77857 * nd + 0.062767 * nd * nd -
                                    0.0020322 * nd * nd * nd);
            p = dist::normal_sf((lw - mu) / sigma);
        }
    } else {
        double ln = std::log(nd);
        double lw = std::log1p(-w);
        double mu = -1.5861 - 0.31082 * ln - 0.083751 * ln * ln + 0.0038915 * ln * ln * ln;
        double sigma = std::exp(-0.4803 - 0.082676 * ln + 0.0030302 * ln * ln);
        p = dist::normal_sf((lw - mu) / sigma);
    }

    TestResult r;
    r.name = "W";
    r.statistic = w;
    r.df1 = nd;
    r.p_value = p;
    return r;
}

namespace {

void
check_groups(const std::vector<std::vector<double>>& groups, std::size_t min_size) {
    if (groups.size() < 2) {
        throw DegenerateSampleError("need at least two groups");
    }
    for (const auto& g : groups) {
        if (g.size() < min_size) {
            throw DegenerateSampleError("group too small");
        }
        check_finite(g, "group");
    }
}

}  // namespace

TestResult
levene_test(const std::vector<std::vector<double>>& groups, LeveneCenter center) {
    check_groups(groups, 2);
    std::size_t k = groups.size();
    std::size_t total = 0;
    std::vector<std::vector<double>> z(k);
    for (std::size_t i = 0; i < k; ++i) {
        double c = center == LeveneCenter::Mean ? mean_of(groups[i]) : median_of(groups[i]);
        z[i].reserve(groups[i].size());
        for (double v : groups[i]) {
            z[i].push_back(std::abs(v - c));
        }
        total += groups[i].size();
    }
    double grand = 0.0;
    std::vector<double> zbar(k);
    for (std::size_t i = 0; i < k; ++i) {
        zbar[i] = mean_of(z[i]);
        grand += zbar[i] * static_cast<double>(z[i].size());
    }
    grand /= static_cast<double>(total);

    double between = 0.0;
    double within = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double dev = zbar[i] - grand;
        between += static_cast<double>(z[i].size()) * dev * dev;
        for (double v : z[i]) {
            double d = v - zbar[i];
            within += d * d;
        }
    }
    if (!(within > 0.0)) {
        throw DegenerateSampleError("levene_test: deviations have zero spread");
    }
    double df1 = static_cast<double>(k - 1);
    double df2 = static_cast<double>(total - k);
    double w = (df2 / df1) * (between / within);

    TestResult r;
    r.name = "W_levene";
    r.statistic = w;
    r.df1 = df1;
    r.df2 = df2;
    r.p_value = dist::f_sf(w, df1, df2);
    return r;
}

namespace {

struct AnovaParts {
    double ss_between = 0.0;
    double ss_within = 0.0;
    double df1 = 0.0;
    double df2 = 0.0;
};

AnovaParts
anova_parts(const std::vector<std::vector<double>>& groups) {
    std::size_t k = groups.size();
    std::size_t total = 0;
    double grand = 0.0;
    for (const auto& g : groups) {
        for (double v : g) {
            grand += v;
        }
        total += g.size();
    }
    grand /= static_cast<double>(total);

    AnovaParts parts;
    for (const auto& g : groups) {
        double gm = mean_of(g);
        double dev = gm - grand;
        parts.ss_between += static_cast<double>(g.size()) * dev * dev;
        for (double v : g) {
            double d = v - gm;
            parts.ss_within += d * d;
        }
    }
    parts.df1 = static_cast<double>(k - 1);
    parts.df2 = static_cast<double>(total - k);
    if (!(parts.df2 > 0.0)) {
        throw DegenerateSampleError("no residual degrees of freedom");
    }
    return parts;
}

}  // namespace

TestResult
anova_oneway(const std::vector<std::vector<double>>& groups) {
    check_groups(groups, 1);
    AnovaParts parts = anova_parts(groups);
    if (!(parts.ss_within > 0.0)) {
        throw DegenerateSampleError("anova_oneway: zero within-group variance");
    }
    double f = (parts.ss_between / parts.df1) / (parts.ss_within / parts.df2);

    TestResult r;
    r.name = "F";
    r.statistic = f;
    r.df1 = parts.df1;
    r.df2 = parts.df2;
    r.p_value = dist::f_sf(f, parts.df1, parts.df2);
    return r;
}

std::vector<TukeyPairResult>
tukey_hsd(const std::vector<std::vector<double>>& groups) {
    check_groups(groups, 2);
    AnovaParts parts = anova_parts(groups);
    if (!(parts.ss_within > 0.0)) {
        throw DegenerateSampleError("tukey_hsd: zero within-group variance");
    }
    double s2 = parts.ss_within / parts.df2;
    std::size_t k = groups.size();

    std::vector<double> means(k);
    for (std::size_t i = 0; i < k; ++i) {
        means[i] = mean_of(groups[i]);
    }
    std::vector<TukeyPairResult> out;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            double na = static_cast<double>(groups[i].size());
            double nb = static_cast<double>(groups[j].size());
            double se = std::sqrt(0.5 * s2 * (1.0 / na + 1.0 / nb));
            TukeyPairResult pr;
            pr.group_a = i;
            pr.group_b = j;
            pr.mean_diff = means[i] - means[j];
            pr.q = std::abs(pr.mean_diff) / se;
            pr.p_value =
                dist::studentized_range_sf(pr.q, static_cast<int>(k), parts.df2);
            out.push_back(pr);
        }
    }
    return out;
}

TestResult
proportion_z_test(double successes1, double n1, double successes2, double n2, Tail tail) {
    if (!(n1 > 0.0) || !(n2 > 0.0)) {
        throw DegenerateSampleError("proportion_z_test requires positive sample sizes");
    }
    if (successes1 < 0.0 || successes1 > n1 || successes2 < 0.0 || successes2 > n2) {
        throw DegenerateSampleError("successes outside [0, n]");
    }
    double p1 = successes1 / n1;
    double p2 = successes2 / n2;
    double pooled = (successes1 + successes2) / (n1 + n2);
    double se2 = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2);
    if (!(se2 > 0.0)) {
        throw DegenerateSampleError("pooled proportion is 0 or 1; z undefined");
    }
    double z = (p1 - p2) / std::sqrt(se2);

    TestResult r;
    r.name = "z";
    r.statistic = z;
    r.p_value = tail_p_from_z(z, tail);
    return r;
}

TestResult
ks_uniform_test(const std::vector<double>& pvalues) {
    std::size_t n = pvalues.size();
    if (n < 1) {
        throw DegenerateSampleError("ks_uniform_test requires a non-empty sample");
    }
    check_finite(pvalues, "p-values");
    std::vector<double> s(pvalues);
    std::sort(s.begin(), s.end());
    if (s.front() < 0.0 || s.back() > 1.0) {
        throw DegenerateSampleError("p-values must lie in [0, 1]");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double hi = static_cast<double>(i + 1) / static_cast<double>(n) - s[i];
        double lo = s[i] - static_cast<double>(i) / static_cast<double>(n);
        d = std::max({d, hi, lo});
    }
    TestResult r;
    r.name = "D";
    r.statistic = d;
    r.df1 = static_cast<double>(n);
    r.p_value = dist::kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
    return r;
}

}  // namespace gazekit::stats
