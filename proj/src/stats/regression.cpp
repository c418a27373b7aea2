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
#include <limits>

#include "gazekit/distributions.hpp"
#include "gazekit/errors.hpp"
#include "gazekit/stats.hpp"

namespace gazekit::stats {

namespace {

// Column-major dense matrix, just enough for Householder QR.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // column j at data[j * rows]

    double&
    at(std::size_t r, std::size_t c) {
        return data[c * rows + r];
    }

    double
    at(std::size_t r, std::size_t c) const {
        return data[c * rows + r];
    }
};

}  // namespace

RegressionResult
ols_regress(const std::vector<std::string>& names,
            const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
            const OlsOptions& options) {
    if (names.size() != columns.size()) {
        throw InputError("ols_regress: one name per predictor column required");
    }
    const std::size_t n = y.size();
    const std::size_t p = columns.size();
    for (std::size_t j = 0; j < p; ++j) {
        if (columns[j].size() != n) {
            throw InputError("ols_regress: predictor " + names[j] + " length mismatch");
        }
    }
    const std::size_t m = p + (options.intercept ? 1 : 0);
    if (m == 0) {
        throw InputError("ols_regress: empty design");
    }
    if (n <= m) {
        throw DegenerateSampleError("ols_regress: need more observations than coefficients");
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw DegenerateSampleError("ols_regress: response contains a non-finite value");
        }
    }

    // Assemble the design, optionally standardizing predictors. A constant
    // predictor cannot be scaled and is reported as rank deficiency at once.
    Matrix a;
    a.rows = n;
    a.cols = m;
    a.data.assign(n * m, 0.0);
    std::vector<std::string> coef_names;
    coef_names.reserve(m);
    std::size_t col = 0;
    if (options.intercept) {
        for (std::size_t i = 0; i < n; ++i) {
            a.at(i, 0) = 1.0;
        }
        coef_names.push_back("(intercept)");
        col = 1;
    }
    for (std::size_t j = 0; j < p; ++j, ++col) {
        double shift = 0.0;
        double scale = 1.0;
        for (double v : columns[j]) {
            if (!std::isfinite(v)) {
                throw DegenerateSampleError("ols_regress: predictor " + names[j] +
                                            " contains a non-finite value");
            }
        }
        if (options.standardize) {
            double mean = 0.0;
            for (double v : columns[j]) {
                mean += v;
            }
            mean /= static_cast<double>(n);
            double ss = 0.0;
            for (double v : columns[j]) {
                double d = v - mean;
                ss += d * d;
            }
            if (!(ss > 0.0)) {
                throw RankDeficientError("ols_regress: predictor " + names[j] +
                                             " is constant",
                                         {names[j]});
            }
            shift = mean;
            scale = std::sqrt(ss / static_cast<double>(n - 1));
        }
        for (std::size_t i = 0; i < n; ++i) {
            a.at(i, col) = (columns[j][i] - shift) / scale;
        }
        coef_names.push_back(names[j]);
    }

    // Householder QR, transforming a copy of y alongside.
    std::vector<double> qty(y);
    std::vector<double> col_norm(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ss += a.at(i, j) * a.at(i, j);
        }
        col_norm[j] = std::sqrt(ss);
    }
    double max_norm = *std::max_element(col_norm.begin(), col_norm.end());
    const double rank_tol = 1e-10 * (max_norm > 0.0 ? max_norm : 1.0);

    std::vector<std::string> deficient;
    for (std::size_t j = 0; j < m; ++j) {
        double ss = 0.0;
        for (std::size_t i = j; i < n; ++i) {
            ss += a.at(i, j) * a.at(i, j);
        }
        double norm = std::sqrt(ss);
        if (norm <= rank_tol) {
            deficient.push_back(coef_names[j]);
            continue;
        }
        double alpha = a.at(j, j) > 0.0 ? -norm : norm;
        double v0 = a.at(j, j) - alpha;
        // Householder vector is (v0, a[j+1..n-1, j]); beta = -1 / (alpha * v0).
        double beta = -1.0 / (alpha * v0);
        std::vector<double> v(n - j);
        v[0] = v0;
        for (std::size_t i = j + 1; i < n; ++i) {
            v[i - j] = a.at(i, j);
        }
        a.at(j, j) = alpha;
        for (std::size_t i = j + 1; i < n; ++i) {
            a.at(i, j) = 0.0;
        }
        for (std::size_t jj = j + 1; jj < m; ++jj) {
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) {
                dot += v[i - j] * a.at(i, jj);
            }
            double f = beta * dot;
            for (std::size_t i = j; i < n; ++i) {
                a.at(i, jj) -= f * v[i - j];
            }
        }
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) {
            dot += v[i - j] * qty[i];
        }
        double f = beta * dot;
        for (std::size_t i = j; i < n; ++i) {
            qty[i] -= f * v[i - j];
        }
    }
    if (!deficient.empty()) {
        std::string msg = "ols_regress: design is rank deficient; dependent columns:";
        for (const auto& name : deficient) {
            msg += " " + name;
        }
        throw RankDeficientError(msg, deficient);
    }

    // Back-substitute R beta = Q'y.
    std::vector<double> beta(m, 0.0);
    for (std::size_t jr = m; jr-- > 0;) {
        double s = qty[jr];
        for (std::size_t jc = jr + 1; jc < m; ++jc) {
            s -= a.at(jr, jc) * beta[jc];
        }
        beta[jr] = s / a.at(jr, jr);
    }

    double rss = 0.0;
    for (std::size_t i = m; i < n; ++i) {
        rss += qty[i] * qty[i];
    }
    double df_resid = static_cast<double>(n - m);
    if (!(rss > 0.0)) {
        throw DegenerateSampleError("ols_regress: residual sum of squares is zero");
    }
    double s2 = rss / df_resid;

    // R^{-1} by back-substitution, then cov = s2 * R^{-1} R^{-T}.
    Matrix rinv;
    rinv.rows = m;
    rinv.cols = m;
    rinv.data.assign(m * m, 0.0);
    for (std::size_t jc = 0; jc < m; ++jc) {
        rinv.at(jc, jc) = 1.0 / a.at(jc, jc);
        for (std::size_t jr = jc; jr-- > 0;) {
            double s = 0.0;
            for (std::size_t kk = jr + 1; kk <= jc; ++kk) {
                s += a.at(jr, kk) * rinv.at(kk, jc);
            }
            rinv.at(jr, jc) = -s / a.at(jr, jr);
        }
    }

    RegressionResult result;
    result.n = n;
    result.df_residual = df_resid;
    result.coefficients.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double var = 0.0;
        for (std::size_t kk = j; kk < m; ++kk) {
            var += rinv.at(j, kk) * rinv.at(j, kk);
        }
        Coefficient& c = result.coefficients[j];
        c.name = coef_names[j];
        c.estimate = beta[j];
        c.std_error = std::sqrt(s2 * var);
        c.t_value = c.estimate / c.std_error;
        c.p_value = std::min(1.0, 2.0 * dist::t_sf(std::abs(c.t_value), df_resid));
    }

    double tss = 0.0;
    if (options.intercept) {
        double ybar = 0.0;
        for (double v : y) {
            ybar += v;
        }
        ybar /= static_cast<double>(n);
        for (double v : y) {
            double d = v - ybar;
            tss += d * d;
        }
    } else {
        for (double v : y) {
            tss += v * v;
        }
    }
    if (!(tss > 0.0)) {
        throw DegenerateSampleError("ols_regress: response has zero variance");
    }
    result.r_squared = 1.0 - rss / tss;

    double df_model = static_cast<double>(options.intercept ? m - 1 : m);
    if (df_model > 0.0) {
        double msm = (tss - rss) / df_model;
        result.f_statistic = msm / s2;
        result.f_p_value = dist::f_sf(result.f_statistic, df_model, df_resid);
    } else {
        result.f_statistic = std::numeric_limits<double>::quiet_NaN();
        result.f_p_value = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

std::pair<double, double>
coefficient_ci(const Coefficient& c, double df_residual, double level) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw DegenerateSampleError("confidence level must be in (0, 1)");
    }
    double q = dist::t_ppf(1.0 - (1.0 - level) / 2.0, df_residual);
    return {c.estimate - q * c.std_error, c.estimate + q * c.std_error};
}

}  // namespace gazekit::stats
