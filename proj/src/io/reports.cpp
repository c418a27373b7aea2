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

#include "gazekit/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gazekit/errors.hpp"

namespace gazekit::report {

namespace {

using nlohmann::json;

std::string
fnum(double v, const char* spec = "%.4f") {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string
fp(double p) {
    return fnum(p, "%.4g");
}

// "t(12) = 2.31, p = 0.039" with the df part matching what the test has.
std::string
test_line(const stats::TestResult& t) {
    std::ostringstream os;
    os << t.name;
    if (t.df1 > 0.0 && t.df2 > 0.0) {
        os << "(" << fnum(t.df1, "%g") << ", " << fnum(t.df2, "%g") << ")";
    } else if (t.df1 > 0.0) {
        os << "(" << fnum(t.df1, "%g") << ")";
    }
    os << " = " << fnum(t.statistic) << ", p = " << fp(t.p_value);
    return os.str();
}

json
test_json(const stats::TestResult& t) {
    return {{"name", t.name},
            {"statistic", t.statistic},
            {"df1", t.df1},
            {"df2", t.df2},
            {"p_value", t.p_value}};
}

json
regression_json(const stats::RegressionResult& r) {
    json coeffs = json::array();
    for (const auto& c : r.coefficients) {
        coeffs.push_back({{"name", c.name},
                          {"estimate", c.estimate},
                          {"std_error", c.std_error},
                          {"t_value", c.t_value},
                          {"p_value", c.p_value}});
    }
    return {{"coefficients", coeffs}, {"r_squared", r.r_squared},
            {"f_statistic", r.f_statistic}, {"f_p_value", r.f_p_value},
            {"n", r.n},           {"df_residual", r.df_residual}};
}

std::string
confusion_row(const std::string& label, const ConfusionMetrics& c) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "  %-14s %7.0f %7.0f %7.0f %7.0f %9.0f  %6s %6s %6s %6s %6s %6s", label.c_str(),
                  c.n, c.tp, c.fp, c.fn, c.tn, fnum(c.sensitivity).c_str(),
                  fnum(c.specificity).c_str(), fnum(c.ppv).c_str(), fnum(c.npv).c_str(),
                  fnum(c.f1).c_str(), fnum(c.auc).c_str());
    return buf;
}

json
confusion_json(const ConfusionMetrics& c) {
    return {{"n", c.n},
            {"tp", c.tp},
            {"fp", c.fp},
            {"fn", c.fn},
            {"tn", c.tn},
            {"sensitivity", c.sensitivity},
            {"specificity", c.specificity},
            {"ppv", c.ppv},
            {"npv", c.npv},
            {"f1", c.f1},
            {"auc", c.auc}};
}

void
confusion_table(std::ostringstream& os, const std::map<ComponentKind, ConfusionMetrics>& rows,
                const ConfusionMetrics& overall) {
    os << "  kind                 n      tp      fp      fn        tn    sens   spec    ppv"
          "    npv     f1    auc\n";
    for (const auto& [kind, metrics] : rows) {
        os << confusion_row(std::string(component_name(kind)), metrics) << '\n';
    }
    os << confusion_row("overall", overall) << '\n';
}

// Session dwell series used by every weekly contrast: per-session mean log
// dwell on the analyzed targets plus the time actually spent there.
struct SessionRow {
    int week = 0;
    std::string participant;
    double mean_log = std::numeric_limits<double>::quiet_NaN();
    double target_seconds = 0.0;
    double total_seconds = 0.0;
};

}  // namespace

AnalyzeReport
analyze_sessions(const std::vector<SessionRecord>& sessions, const io::AnalyzeParams& params) {
    if (sessions.empty()) {
        throw InputError("analyze: no sessions given");
    }
    AnalyzeReport r;
    r.subject = params.subject;
    r.n_sessions = static_cast<int>(sessions.size());

    std::set<std::string> tset;
    if (params.targets.empty()) {
        for (const auto& s : sessions) {
            for (const auto& ev : s.events) {
                if (ev.person == params.subject && is_object_target(ev.target)) {
                    tset.insert(ev.target);
                }
            }
        }
    } else {
        for (const auto& t : params.targets) {
            if (!is_object_target(t)) {
                throw InputError("analyze: '" + t + "' is not an object target");
            }
            tset.insert(t);
        }
    }
    r.targets.assign(tset.begin(), tset.end());

    std::set<std::string> pids;
    std::set<int> weeks_present;
    for (const auto& s : sessions) {
        if (s.week_index < 1) {
            throw InputError("analyze: session with week_index < 1");
        }
        pids.insert(s.participant_id);
        weeks_present.insert(s.week_index);
    }
    r.n_participants = static_cast<int>(pids.size());
    r.n_weeks = static_cast<int>(weeks_present.size());

    if (r.targets.empty()) {
        r.notices.push_back("subject has no object-target events; battery skipped");
        return r;
    }

    for (const auto& t : r.targets) {
        r.weekly.push_back({t, aggregate_weekly(sessions, params.subject, t)});
    }

    std::vector<SessionRow> rows;
    rows.reserve(sessions.size());
    for (const auto& s : sessions) {
        SessionRow row;
        row.week = s.week_index;
        row.participant = s.participant_id;
        double sum_log = 0.0;
        int n_log = 0;
        for (const auto& ev : s.events) {
            if (ev.person != params.subject) {
                continue;
            }
            row.total_seconds += ev.duration;
            if (tset.count(ev.target) && ev.duration > 0.0) {
                row.target_seconds += ev.duration;
                sum_log += std::log(ev.duration);
                ++n_log;
            }
        }
        if (n_log > 0) {
            row.mean_log = sum_log / static_cast<double>(n_log);
        }
        rows.push_back(std::move(row));
    }

    const int w_first = *weeks_present.begin();
    const int w_last = *weeks_present.rbegin();

    if (weeks_present.size() < 2) {
        r.notices.push_back("single week of data: weekly contrasts skipped");
    } else {
        // Paired first-vs-final week contrast on participant means.
        std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_pid;
        for (const auto& row : rows) {
            if (std::isnan(row.mean_log)) {
                continue;
            }
            if (row.week == w_first) {
                by_pid[row.participant].first.push_back(row.mean_log);
            } else if (row.week == w_last) {
                by_pid[row.participant].second.push_back(row.mean_log);
            }
        }
        std::vector<double> first_means;
        std::vector<double> last_means;
        for (const auto& [pid, pair] : by_pid) {
            if (!pair.first.empty() && !pair.second.empty()) {
                auto mean = [](const std::vector<double>& v) {
                    double s = 0.0;
                    for (double x : v) {
                        s += x;
                    }
                    return s / static_cast<double>(v.size());
                };
                first_means.push_back(mean(pair.first));
                last_means.push_back(mean(pair.second));
            }
        }
        if (first_means.size() >= 3) {
            try {
                r.paired_first_last = stats::paired_t_test(first_means, last_means);
                std::vector<double> diffs(first_means.size());
                for (std::size_t i = 0; i < diffs.size(); ++i) {
                    diffs[i] = first_means[i] - last_means[i];
                }
                r.shapiro_diff = stats::shapiro_wilk(diffs);
            } catch (const DegenerateSampleError& e) {
                r.notices.push_back(std::string("paired contrast skipped: ") + e.what());
            }
        } else {
            r.notices.push_back(
                "fewer than 3 participants observed in both first and final week; "
                "paired contrast skipped");
        }

        // Session-level contrasts across all weeks.
        std::vector<std::vector<double>> groups;
        std::vector<int> labels;
        for (int w : weeks_present) {
            std::vector<double> g;
            for (const auto& row : rows) {
                if (row.week == w && !std::isnan(row.mean_log)) {
                    g.push_back(row.mean_log);
                }
            }
            if (g.size() >= 2) {
                groups.push_back(std::move(g));
                labels.push_back(w);
            }
        }
        if (groups.size() >= 2) {
            r.week_group_labels = labels;
            try {
                r.anova_weeks = stats::anova_oneway(groups);
                r.levene_weeks = stats::levene_test(groups);
                r.tukey_weeks = stats::tukey_hsd(groups);
            } catch (const DegenerateSampleError& e) {
                r.notices.push_back(std::string("week ANOVA skipped: ") + e.what());
            }
        } else {
            r.notices.push_back("fewer than two weeks with 2+ usable sessions; "
                                "ANOVA across weeks skipped");
        }

        // Share of time on the analyzed targets, first vs final week.
        double obj1 = 0.0;
        double all1 = 0.0;
        double obj2 = 0.0;
        double all2 = 0.0;
        for (const auto& row : rows) {
            if (row.week == w_first) {
                obj1 += row.target_seconds;
                all1 += row.total_seconds;
            } else if (row.week == w_last) {
                obj2 += row.target_seconds;
                all2 += row.total_seconds;
            }
        }
        try {
            r.time_share_z = stats::proportion_z_test(obj1, all1, obj2, all2);
        } catch (const DegenerateSampleError& e) {
            r.notices.push_back(std::string("time-share z skipped: ") + e.what());
        }

        // Linear week trend on session means, raw scale so the slope reads
        // as log-seconds per week.
        std::vector<double> y;
        std::vector<double> week_col;
        for (const auto& row : rows) {
            if (!std::isnan(row.mean_log)) {
                y.push_back(row.mean_log);
                week_col.push_back(static_cast<double>(row.week));
            }
        }
        if (y.size() >= 3) {
            try {
                stats::OlsOptions opt;
                opt.standardize = false;
                r.week_trend = stats::ols_regress({"week"}, {week_col}, y, opt);
            } catch (const InputError& e) {
                r.notices.push_back(std::string("week trend regression skipped: ") + e.what());
            }
        } else {
            r.notices.push_back("fewer than 3 usable sessions; week trend skipped");
        }
    }

    // Clinical covariate regression on participant means.
    {
        std::map<std::string, std::pair<double, int>> acc;
        for (const auto& row : rows) {
            if (!std::isnan(row.mean_log)) {
                auto& a = acc[row.participant];
                a.first += row.mean_log;
                a.second += 1;
            }
        }
        std::map<std::string, const ParticipantProfile*> profiles;
        bool all_clinical = true;
        for (const auto& s : sessions) {
            if (s.clinical.has_value()) {
                profiles.emplace(s.participant_id, &*s.clinical);
            } else {
                all_clinical = false;
            }
        }
        const std::vector<std::string>& names = ParticipantProfile::covariate_names();
        if (!all_clinical) {
            r.notices.push_back("clinical covariate regression skipped: "
                                "sessions without clinical scores");
        } else if (acc.size() < names.size() + 2) {
            r.notices.push_back("clinical covariate regression skipped: "
                                "fewer participants than covariates + 2");
        } else {
            std::vector<double> y;
            std::vector<std::vector<double>> cols(names.size());
            for (const auto& [pid, a] : acc) {
                y.push_back(a.first / static_cast<double>(a.second));
                auto vals = profiles.at(pid)->covariates();
                for (std::size_t i = 0; i < vals.size(); ++i) {
                    cols[i].push_back(vals[i]);
                }
            }
            try {
                r.covariates = stats::ols_regress(names, cols, y);
            } catch (const InputError& e) {
                r.notices.push_back(std::string("clinical covariate regression skipped: ") +
                                    e.what());
            }
        }
    }
    return r;
}

std::string
metrics_text(const MetricsReport& m, const std::string& config_hash) {
    std::ostringstream os;
    os << "gaze agreement report\n";
    os << "config: " << config_hash << "\n\n";
    os << "event level\n";
    confusion_table(os, m.event_level, m.overall_event);
    os << "\nbin level (" << fnum(kAnnotationQuantum, "%g") << " s bins)\n";
    confusion_table(os, m.bin_level, m.overall_bin);
    os << "\nframe agreement: " << fnum(m.frame_agreement) << '\n';
    return os.str();
}

std::string
metrics_json(const MetricsReport& m, const std::string& config_hash) {
    json j;
    j["config"] = config_hash;
    for (const auto& [kind, metrics] : m.event_level) {
        j["event_level"][std::string(component_name(kind))] = confusion_json(metrics);
    }
    for (const auto& [kind, metrics] : m.bin_level) {
        j["bin_level"][std::string(component_name(kind))] = confusion_json(metrics);
    }
    j["overall_event"] = confusion_json(m.overall_event);
    j["overall_bin"] = confusion_json(m.overall_bin);
    j["frame_agreement"] = m.frame_agreement;
    return j.dump(2);
}

std::string
components_text(const std::vector<ComponentEvent>& components, const JaResult& ja,
                const std::string& config_hash) {
    std::ostringstream os;
    os << "component report\n";
    os << "config: " << config_hash << "\n\n";

    std::map<ComponentKind, std::pair<int, double>> counts;
    for (const auto& c : components) {
        auto& [n, seconds] = counts[c.kind];
        n += 1;
        seconds += c.duration;
    }
    os << "components\n";
    for (ComponentKind kind : {ComponentKind::Individual, ComponentKind::Shared,
                               ComponentKind::Mutual, ComponentKind::NoDetection}) {
        auto it = counts.find(kind);
        int n = it == counts.end() ? 0 : it->second.first;
        double secs = it == counts.end() ? 0.0 : it->second.second;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "  %-14s %6d events  %10.3f s",
                      std::string(component_name(kind)).c_str(), n, secs);
        os << buf << '\n';
    }

    os << "\njoint attention\n";
    os << "  episodes: " << ja.episodes.size() << '\n';
    os << "  suppressed simultaneous shifts: " << ja.suppressed_ties << '\n';
    double latency_sum = 0.0;
    for (const auto& ep : ja.episodes) {
        latency_sum += ep.follow_latency;
    }
    if (!ja.episodes.empty()) {
        os << "  mean follow latency: "
           << fnum(latency_sum / static_cast<double>(ja.episodes.size())) << " s\n";
    }
    for (const auto& ep : ja.episodes) {
        os << "  leader=" << role_name(ep.leader) << " follower=" << role_name(ep.follower)
           << " target=" << ep.target << " mutual_start=" << fnum(ep.mutual_start, "%.3f")
           << " latency=" << fnum(ep.follow_latency, "%.3f")
           << " shared=[" << fnum(ep.shared_start, "%.3f") << ", "
           << fnum(ep.shared_start + ep.shared_duration, "%.3f") << ")\n";
    }
    return os.str();
}

std::string
components_json(const std::vector<ComponentEvent>& components, const JaResult& ja,
                const std::string& config_hash) {
    json j;
    j["config"] = config_hash;
    std::map<ComponentKind, std::pair<int, double>> counts;
    for (const auto& c : components) {
        auto& [n, seconds] = counts[c.kind];
        n += 1;
        seconds += c.duration;
    }
    for (ComponentKind kind : {ComponentKind::Individual, ComponentKind::Shared,
                               ComponentKind::Mutual, ComponentKind::NoDetection}) {
        auto it = counts.find(kind);
        j["components"][std::string(component_name(kind))] = {
            {"events", it == counts.end() ? 0 : it->second.first},
            {"seconds", it == counts.end() ? 0.0 : it->second.second}};
    }
    j["joint_attention"]["suppressed_ties"] = ja.suppressed_ties;
    j["joint_attention"]["episodes"] = json::array();
    for (const auto& ep : ja.episodes) {
        j["joint_attention"]["episodes"].push_back(
            {{"leader", std::string(role_name(ep.leader))},
             {"follower", std::string(role_name(ep.follower))},
             {"target", ep.target},
             {"mutual_start", ep.mutual_start},
             {"mutual_duration", ep.mutual_duration},
             {"follow_latency", ep.follow_latency},
             {"shared_start", ep.shared_start},
             {"shared_duration", ep.shared_duration}});
    }
    return j.dump(2);
}

std::string
analyze_text(const AnalyzeReport& r, const std::string& config_hash) {
    std::ostringstream os;
    os << "analysis report\n";
    os << "config: " << config_hash << "\n\n";
    os << "subject: " << role_name(r.subject) << "\n";
    os << "targets:";
    for (const auto& t : r.targets) {
        os << ' ' << t;
    }
    os << "\nsessions: " << r.n_sessions << "  participants: " << r.n_participants
       << "  weeks: " << r.n_weeks << "\n";

    os << "\nweekly dwell\n";
    os << "  target       week  sessions  events  mean_instances  mean_duration_s"
          "  var_log_duration\n";
    for (const auto& tw : r.weekly) {
        for (const auto& w : tw.weeks) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "  %-12s %4d  %8d  %6d  %14s  %15s  %16s",
                          tw.target.c_str(), w.week, w.n_sessions, w.n_events,
                          fnum(w.mean_instances).c_str(), fnum(w.mean_duration).c_str(),
                          fnum(w.var_log_duration).c_str());
            os << buf << '\n';
        }
    }

    os << "\ntests (dwell = mean log seconds per session)\n";
    if (r.shapiro_diff) {
        os << "  normality of paired diffs:  " << test_line(*r.shapiro_diff) << '\n';
    }
    if (r.paired_first_last) {
        os << "  paired t, first vs final week:  " << test_line(*r.paired_first_last) << '\n';
    }
    if (r.anova_weeks) {
        os << "  anova across weeks:  " << test_line(*r.anova_weeks) << '\n';
    }
    if (r.levene_weeks) {
        os << "  levene across weeks:  " << test_line(*r.levene_weeks) << '\n';
    }
    for (const auto& pair : r.tukey_weeks) {
        os << "    tukey w" << r.week_group_labels[pair.group_a] << " vs w"
           << r.week_group_labels[pair.group_b] << ": diff = " << fnum(pair.mean_diff)
           << ", q = " << fnum(pair.q) << ", p = " << fp(pair.p_value) << '\n';
    }
    if (r.time_share_z) {
        os << "  target time share, first vs final week:  " << test_line(*r.time_share_z)
           << '\n';
    }
    if (r.week_trend) {
        const auto& coeffs = r.week_trend->coefficients;
        for (const auto& c : coeffs) {
            if (c.name == "week") {
                os << "  week trend: beta = " << fnum(c.estimate)
                   << " log-s/week, se = " << fnum(c.std_error) << ", t = " << fnum(c.t_value)
                   << ", p = " << fp(c.p_value) << ", r2 = " << fnum(r.week_trend->r_squared)
                   << '\n';
            }
        }
    }
    if (r.covariates) {
        os << "  clinical covariates: F = " << fnum(r.covariates->f_statistic)
           << ", p = " << fp(r.covariates->f_p_value)
           << ", r2 = " << fnum(r.covariates->r_squared) << '\n';
        for (const auto& c : r.covariates->coefficients) {
            os << "    " << c.name << ": beta = " << fnum(c.estimate) << ", t = "
               << fnum(c.t_value) << ", p = " << fp(c.p_value) << '\n';
        }
    }
    if (!r.notices.empty()) {
        os << "\nnotices\n";
        for (const auto& n : r.notices) {
            os << "  - " << n << '\n';
        }
    }
    return os.str();
}

std::string
analyze_json(const AnalyzeReport& r, const std::string& config_hash) {
    json j;
    j["config"] = config_hash;
    j["subject"] = std::string(role_name(r.subject));
    j["targets"] = r.targets;
    j["n_sessions"] = r.n_sessions;
    j["n_participants"] = r.n_participants;
    j["n_weeks"] = r.n_weeks;
    j["weekly"] = json::array();
    for (const auto& tw : r.weekly) {
        json weeks = json::array();
        for (const auto& w : tw.weeks) {
            weeks.push_back({{"week", w.week},
                             {"n_sessions", w.n_sessions},
                             {"n_events", w.n_events},
                             {"mean_instances", w.mean_instances},
                             {"mean_duration", w.mean_duration},
                             {"var_log_duration", w.var_log_duration}});
        }
        j["weekly"].push_back({{"target", tw.target}, {"weeks", weeks}});
    }
    if (r.shapiro_diff) {
        j["shapiro_diff"] = test_json(*r.shapiro_diff);
    }
    if (r.paired_first_last) {
        j["paired_first_last"] = test_json(*r.paired_first_last);
    }
    if (r.anova_weeks) {
        j["anova_weeks"] = test_json(*r.anova_weeks);
    }
    if (r.levene_weeks) {
        j["levene_weeks"] = test_json(*r.levene_weeks);
    }
    if (!r.tukey_weeks.empty()) {
        j["tukey_weeks"] = json::array();
        for (const auto& pair : r.tukey_weeks) {
            j["tukey_weeks"].push_back({{"week_a", r.week_group_labels[pair.group_a]},
                                        {"week_b", r.week_group_labels[pair.group_b]},
                                        {"mean_diff", pair.mean_diff},
                                        {"q", pair.q},
                                        {"p_value", pair.p_value}});
        }
    }
    if (r.time_share_z) {
        j["time_share_z"] = test_json(*r.time_share_z);
    }
    if (r.week_trend) {
        j["week_trend"] = regression_json(*r.week_trend);
    }
    if (r.covariates) {
        j["covariates"] = regression_json(*r.covariates);
    }
    j["notices"] = r.notices;
    return j.dump(2);
}

}  // namespace gazekit::report
