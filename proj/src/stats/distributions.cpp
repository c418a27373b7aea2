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

#include "gazekit/distributions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "gazekit/errors.hpp"

namespace gazekit::dist {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

// 24-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration
// on the Legendre polynomial. Machine-precision nodes without tables.
struct GaussLegendre {
    std::array<double, 24> node{};
    std::array<double, 24> weight{};

    GaussLegendre() {
        const int n = 24;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-15) {
                    break;
                }
            }
            node[static_cast<std::size_t>(i)] = x;
            weight[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre&
gl24() {
    static const GaussLegendre rule;
    return rule;
}

// Integrates fn over [a, b] split into `panels` equal panels, 24-point GL each.
template <typename Fn>
double
panel_integrate(Fn&& fn, double a, double b, int panels) {
    const auto& rule = gl24();
    double total = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h;
        double half = 0.5 * h;
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.node.size(); ++i) {
            acc += rule.weight[i] * fn(mid + half * rule.node[i]);
        }
        total += acc * half;
    }
    return total;
}

double
normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
}

// P(range of k iid standard normals <= r).
double
normal_range_cdf(double r, int k) {
    if (r <= 0.0) {
        return 0.0;
    }
    auto integrand = [r, k](double z) {
        double span = normal_cdf(z) - normal_cdf(z - r);
        return normal_pdf(z) * std::pow(span, k - 1);
    };
    double val = k * panel_integrate(integrand, -9.0, 9.0, 16);
    if (val < 0.0) {
        return 0.0;
    }
    if (val > 1.0) {
        return 1.0;
    }
    return val;
}

// Tail probability P(range of k iid standard normals > r). Computing
// 1 - normal_range_cdf(r, k) would cancel to noise once the tail drops
// below ~1e-10, so integrate the complement directly. Because
// k Int phi(z) Phi(z)^(k-1) dz = 1 exactly, the tail equals
//   k Int phi(z) (Phi(z)^(k-1) - [Phi(z) - Phi(z-r)]^(k-1)) dz
// and the power difference factors without subtraction through
//   a^m - b^m = (a - b) sum_{i<m} a^i b^(m-1-i)  with  a - b = Phi(z-r),
// which erfc evaluates to full relative precision in the left tail.
double
normal_range_sf(double r, int k) {
    if (r <= 0.0) {
        return 1.0;
    }
    auto integrand = [r, k](double z) {
        double a = normal_cdf(z);
        double lower = normal_cdf(z - r);
        double span = a - lower;
        if (span < 0.0) {
            span = 0.0;
        }
        double sum = 0.0;
        for (int i = 0; i <= k - 2; ++i) {
            sum += std::pow(a, i) * std::pow(span, k - 2 - i);
        }
        return normal_pdf(z) * lower * sum;
    };
    // For large r the surviving mass sits in a bump near z = r / 2, so the
    // window has to stretch with r instead of stopping at the usual +-9.
    double hi = std::max(9.0, 0.5 * r + 9.0);
    int panels = std::max(12, static_cast<int>(std::ceil((hi + 9.0) / 1.5)));
    double val = k * panel_integrate(integrand, -9.0, hi, panels);
    if (val < 0.0) {
        return 0.0;
    }
    if (val > 1.0) {
        return 1.0;
    }
    return val;
}

double
beta_cf(double a, double b, double x) {
    // Lentz continued fraction for the incomplete beta.
    const double tiny = 1e-300;
    const double eps = 1e-15;
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) {
        d = tiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            break;
        }
    }
    return h;
}

}  // namespace

double
normal_cdf(double z) {
    return 0.5 * std::erfc(-z / kSqrt2);
}

double
normal_sf(double z) {
    return 0.5 * std::erfc(z / kSqrt2);
}

double
normal_ppf(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw DegenerateSampleError("normal_ppf requires p in (0, 1)");
    }
    // Acklam's rational approximation, then one Halley refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley step against the exact CDF.
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double
incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DegenerateSampleError("incomplete_beta requires positive shape parameters");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double
t_cdf(double t, double df) {
    if (!(df > 0.0)) {
        throw DegenerateSampleError("t_cdf requires df > 0");
    }
    if (std::isnan(t)) {
        return t;
    }
    double x = df / (df + t * t);
    double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

double
t_sf(double t, double df) {
    return t_cdf(-t, df);
}

double
t_ppf(double p, double df) {
    if (!(df > 0.0)) {
        throw DegenerateSampleError("t_ppf requires positive degrees of freedom");
    }
    if (!(p > 0.0) || !(p < 1.0)) {
        throw DegenerateSampleError("t_ppf requires p in (0, 1)");
    }
    if (p == 0.5) {
        return 0.0;
    }
    // Bracket around the normal quantile, then bisect; the CDF is strictly
    // increasing so this is robust for any df.
    double lo = normal_ppf(p);
    double hi = lo;
    double step = std::max(1.0, std::abs(lo));
    while (t_cdf(lo, df) > p) {
        lo -= step;
        step *= 2.0;
    }
    step = std::max(1.0, std::abs(hi));
    while (t_cdf(hi, df) < p) {
        hi += step;
        step *= 2.0;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
        double mid = 0.5 * (lo + hi);
        if (t_cdf(mid, df) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double
f_cdf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) {
        throw DegenerateSampleError("f_cdf requires positive degrees of freedom");
    }
    if (f <= 0.0) {
        return 0.0;
    }
    double x = d1 * f / (d1 * f + d2);
    return incomplete_beta(0.5 * d1, 0.5 * d2, x);
}

double
f_sf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) {
        throw DegenerateSampleError("f_sf requires positive degrees of freedom");
    }
    if (f <= 0.0) {
        return 1.0;
    }
    double x = d2 / (d1 * f + d2);
    return incomplete_beta(0.5 * d2, 0.5 * d1, x);
}

double
studentized_range_cdf(double q, int k, double df) {
    if (k < 2) {
        throw DegenerateSampleError("studentized range requires k >= 2");
    }
    if (!(df > 0.0)) {
        throw DegenerateSampleError("studentized range requires df > 0");
    }
    if (q <= 0.0) {
        return 0.0;
    }
    // Integrate the conditional range probability against the density of the
    // pooled scale s/sigma: f(u) = 2 (nu/2)^(nu/2) / Gamma(nu/2)
    //                              u^(nu-1) exp(-nu u^2 / 2).
    const double nu = df;
    const double log_norm =
        0.5 * nu * std::log(0.5 * nu) - std::lgamma(0.5 * nu) + std::log(2.0);
    auto outer = [&](double u) {
        double logf = log_norm + (nu - 1.0) * std::log(u) - 0.5 * nu * u * u;
        return std::exp(logf) * normal_range_cdf(q * u, k);
    };
    double lo;
    double hi;
    double spread = 12.0 / std::sqrt(2.0 * nu);
    if (nu <= 6.0) {
        lo = 1e-10;
        hi = std::max(4.0, 1.0 + spread);
    } else {
        lo = std::max(1e-10, 1.0 - spread);
        hi = 1.0 + spread;
    }
    double val = panel_integrate(outer, lo, hi, 24);
    if (val < 0.0) {
        return 0.0;
    }
    if (val > 1.0) {
        return 1.0;
    }
    return val;
}

double
studentized_range_sf(double q, int k, double df) {
    if (k < 2) {
        throw DegenerateSampleError("studentized range requires k >= 2");
    }
    if (!(df > 0.0)) {
        throw DegenerateSampleError("studentized range requires df > 0");
    }
    if (q <= 0.0) {
        return 1.0;
    }
    // Same scale mixture as the cdf, but against the stable range tail so
    // small p values keep their relative precision. Tukey tables live in
    // exactly that regime.
    const double nu = df;
    const double log_norm =
        0.5 * nu * std::log(0.5 * nu) - std::lgamma(0.5 * nu) + std::log(2.0);
    auto outer = [&](double u) {
        double logf = log_norm + (nu - 1.0) * std::log(u) - 0.5 * nu * u * u;
        return std::exp(logf) * normal_range_sf(q * u, k);
    };
    double lo;
    double hi;
    double spread = 12.0 / std::sqrt(2.0 * nu);
    if (nu <= 6.0) {
        lo = 1e-10;
        hi = std::max(4.0, 1.0 + spread);
    } else {
        lo = std::max(1e-10, 1.0 - spread);
        hi = 1.0 + spread;
    }
    double val = panel_integrate(outer, lo, hi, 48);
    if (val < 0.0) {
        return 0.0;
    }
    if (val > 1.0) {
        return 1.0;
    }
    return val;
}

double
kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) {
        return 1.0;
    }
    if (lambda < 0.4) {
        // Complement series converges fast for small lambda.
        double sum = 0.0;
        for (int j = 1; j <= 20; ++j) {
            double t = (2.0 * j - 1.0) * kPi / (2.0 * lambda);
            sum += std::exp(-0.5 * t * t);
        }
        double cdf = std::sqrt(2.0 * kPi) / lambda * sum;
        return 1.0 - cdf;
    }
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-16) {
            break;
        }
    }
    double sf = 2.0 * sum;
    if (sf < 0.0) {
        return 0.0;
    }
    if (sf > 1.0) {
        return 1.0;
    }
    return sf;
}

}  // namespace gazekit::dist
