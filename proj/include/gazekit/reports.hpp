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

#include <optional>
#include <string>
#include <vector>

#include "gazekit/annotation.hpp"
#include "gazekit/components.hpp"
#include "gazekit/config.hpp"
#include "gazekit/events.hpp"
#include "gazekit/stats.hpp"

namespace gazekit::report {

/// Weekly dwell table for one gaze target.
struct TargetWeekly {
    std::string target;
    std::vector<WeeklyAggregate> weeks;
};

/// Output of the session-battery: weekly descriptives plus the hypothesis
/// tests that apply to the data at hand. Tests whose preconditions fail
/// (single week, missing clinical scores, ...) stay unset and the reason is
/// appended to `notices` instead of inventing numbers.
struct AnalyzeReport {
    Role subject = Role::Child;
    std::vector<std::string> targets;
    int n_participants = 0;
    int n_sessions = 0;
    int n_weeks = 0;  // weeks actually present in the data
    std::vector<TargetWeekly> weekly;

    /// Per-participant mean log dwell, week 1 vs the final week.
    std::optional<stats::TestResult> paired_first_last;
    /// Normality of those paired differences.
    std::optional<stats::TestResult> shapiro_diff;
    /// Session-level mean log dwell across weeks.
    std::optional<stats::TestResult> anova_weeks;
    std::optional<stats::TestResult> levene_weeks;
    std::vector<stats::TukeyPairResult> tukey_weeks;
    /// Week number behind each ANOVA / Levene / Tukey group index.
    std::vector<int> week_group_labels;
    /// Share of session time on the analyzed targets, week 1 vs final week.
    std::optional<stats::TestResult> time_share_z;
    /// Session mean log dwell regressed on week index (raw scale, so the
    /// week coefficient is log-seconds per week).
    std::optional<stats::RegressionResult> week_trend;
    /// Participant mean log dwell regressed on the clinical covariates.
    std::optional<stats::RegressionResult> covariates;

    std::vector<std::string> notices;
};

/// Runs the battery over a cohort of session records.
AnalyzeReport
analyze_sessions(const std::vector<SessionRecord>& sessions, const io::AnalyzeParams& params);

// Deterministic report emitters. `config_hash` is embedded verbatim so any
// report names the configuration that produced it. The *_json variants
// return a serialized JSON document.

std::string
metrics_text(const MetricsReport& m, const std::string& config_hash);
std::string
metrics_json(const MetricsReport& m, const std::string& config_hash);

std::string
components_text(const std::vector<ComponentEvent>& components, const JaResult& ja,
                const std::string& config_hash);
std::string
components_json(const std::vector<ComponentEvent>& components, const JaResult& ja,
                const std::string& config_hash);

std::string
analyze_text(const AnalyzeReport& r, const std::string& config_hash);
std::string
analyze_json(const AnalyzeReport& r, const std::string& config_hash);

}  // namespace gazekit::report
