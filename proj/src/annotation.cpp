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

#include "gazekit/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "gazekit/errors.hpp"

namespace gazekit {

AnnotationEvent
quantize_annotation(Role person, const std::string& target, double raw_start, double raw_end) {
    if (!std::isfinite(raw_start) || !std::isfinite(raw_end) || raw_end <= raw_start) {
        throw InputError("annotation span must be finite and non-empty");
    }
    if (target.empty()) {
        throw InputError("annotation with empty target");
    }
    AnnotationEvent ev;
    ev.person = person;
    ev.target = target;
    ev.start = std::floor(raw_start / kAnnotationQuantum) * kAnnotationQuantum;
    ev.end = std::ceil(raw_end / kAnnotationQuantum) * kAnnotationQuantum;
    if (ev.end <= ev.start) {
        ev.end = ev.start + kAnnotationQuantum;
    }
    return ev;
}

std::map<Role, std::vector<GazeEvent>>
events_from_annotations(const std::vector<AnnotationEvent>& annotations) {
    std::map<Role, std::vector<AnnotationEvent>> by_person;
    for (const auto& a : annotations) {
        if (a.end <= a.start) {
            throw InputError("annotation with empty span");
        }
        by_person[a.person].push_back(a);
    }
    std::map<Role, std::vector<GazeEvent>> out;
    for (auto& [person, list] : by_person) {
        std::sort(list.begin(), list.end(), [](const AnnotationEvent& a, const AnnotationEvent& b) {
            return std::tie(a.start, a.end) < std::tie(b.start, b.end);
        });
        std::vector<GazeEvent>& events = out[person];
        double prev_end = -std::numeric_limits<double>::infinity();
        for (const auto& a : list) {
            double start = std::max(a.start, prev_end);
            if (a.end <= start) {
                continue;  // fully swallowed by the previous annotation
            }
            if (!events.empty() && events.back().target == a.target &&
                start <= events.back().end() + 1e-9) {
                GazeEvent& last = events.back();
                last.duration = std::max(last.duration, a.end - last.start);
            } else {
                GazeEvent ev;
                ev.person = person;
                ev.target = a.target;
                ev.start = start;
                ev.duration = a.end - start;
                events.push_back(std::move(ev));
            }
            prev_end = events.back().end();
        }
    }
    return out;
}

namespace {

std::string
participants_key(const std::set<Role>& participants) {
    std::string key;
    for (Role r : participants) {
        if (!key.empty()) {
            key += '+';
        }
        key += role_name(r);
    }
    return key;
}

}  // namespace

EvalEvent
to_eval(const GazeEvent& ev) {
    EvalEvent e;
    e.who = role_name(ev.person);
    e.kind = ev.target == kNoDetection ? ComponentKind::NoDetection : ComponentKind::Individual;
    e.target = ev.target == kNoDetection ? std::string() : ev.target;
    e.start = ev.start;
    e.end = ev.end();
    e.score = ev.score;
    return e;
}

EvalEvent
to_eval(const ComponentEvent& ev) {
    EvalEvent e;
    e.who = participants_key(ev.participants);
    e.kind = ev.kind;
    e.target = ev.target.value_or("");
    e.start = ev.start;
    e.end = ev.end();
    e.score = ev.score;
    return e;
}

std::vector<EvalEvent>
to_eval(const std::vector<ComponentEvent>& components) {
    std::vector<EvalEvent> out;
    out.reserve(components.size());
    for (const auto& c : components) {
        out.push_back(to_eval(c));
    }
    return out;
}

namespace {

double
interval_iou(double s1, double e1, double s2, double e2) {
    double inter = std::min(e1, e2) - std::max(s1, s2);
    if (inter <= 0.0) {
        return 0.0;
    }
    double uni = std::max(e1, e2) - std::min(s1, s2);
    return inter / uni;
}

void
check_spans_overlap(const std::vector<EvalEvent>& detected,
                    const std::vector<EvalEvent>& annotated) {
    if (detected.empty() || annotated.empty()) {
        return;
    }
    auto span = [](const std::vector<EvalEvent>& v) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& e : v) {
            lo = std::min(lo, e.start);
            hi = std::max(hi, e.end);
        }
        return std::make_pair(lo, hi);
    };
    auto [dlo, dhi] = span(detected);
    auto [alo, ahi] = span(annotated);
    if (std::min(dhi, ahi) <= std::max(dlo, alo)) {
        throw ClockMismatchError("detected and annotated spans do not overlap in time");
    }
}

}  // namespace

AlignResult
align_events(const std::vector<EvalEvent>& detected, const std::vector<EvalEvent>& annotated,
             const MatchRule& rule) {
    if (!(rule.iou_threshold > 0.0) || rule.iou_threshold > 1.0) {
        throw InputError("iou_threshold must be in (0, 1]");
    }
    check_spans_overlap(detected, annotated);

    struct Pair {
        double iou;
        std::size_t d;
        std::size_t a;
    };
    // Group by comparison key so only like events can match.
    std::map<std::tuple<std::string, ComponentKind, std::string>, std::vector<std::size_t>>
        annotated_by_key;
    for (std::size_t i = 0; i < annotated.size(); ++i) {
        annotated_by_key[{annotated[i].who, annotated[i].kind, annotated[i].target}].push_back(i);
    }
    std::vector<Pair> candidates;
    for (std::size_t d = 0; d < detected.size(); ++d) {
        auto it = annotated_by_key.find({detected[d].who, detected[d].kind, detected[d].target});
        if (it == annotated_by_key.end()) {
            continue;
        }
        for (std::size_t a : it->second) {
            double iou =
                interval_iou(detected[d].start, detected[d].end, annotated[a].start,
                             annotated[a].end);
            if (iou >= rule.iou_threshold) {
                candidates.push_back({iou, d, a});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Pair& x, const Pair& y) {
        if (x.iou != y.iou) {
            return x.iou > y.iou;
        }
        return std::tie(x.d, x.a) < std::tie(y.d, y.a);
    });

    AlignResult result;
    std::vector<bool> d_taken(detected.size(), false);
    std::vector<bool> a_taken(annotated.size(), false);
    for (const auto& c : candidates) {
        if (d_taken[c.d] || a_taken[c.a]) {
            continue;
        }
        d_taken[c.d] = true;
        a_taken[c.a] = true;
        result.matches.push_back({c.d, c.a, c.iou});
    }
    for (std::size_t d = 0; d < detected.size(); ++d) {
        if (!d_taken[d]) {
            result.unmatched_detected.push_back(d);
        }
    }
    for (std::size_t a = 0; a < annotated.size(); ++a) {
        if (!a_taken[a]) {
            result.unmatched_annotated.push_back(a);
        }
    }
    return result;
}

double
mann_whitney_auc(const std::vector<double>& positive_scores,
                 const std::vector<double>& negative_scores) {
    if (positive_scores.empty() || negative_scores.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    // Midrank formulation: AUC = (R_pos - P(P+1)/2) / (P*N).
    struct Tagged {
        double score;
        bool positive;
    };
    std::vector<Tagged> all;
    all.reserve(positive_scores.size() + negative_scores.size());
    for (double s : positive_scores) {
        if (std::isnan(s)) {
            throw InputError("mann_whitney_auc: NaN score");
        }
        all.push_back({s, true});
    }
    for (double s : negative_scores) {
        if (std::isnan(s)) {
            throw InputError("mann_whitney_auc: NaN score");
        }
        all.push_back({s, false});
    }
    std::sort(all.begin(), all.end(),
              [](const Tagged& a, const Tagged& b) { return a.score < b.score; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].score == all[i].score) {
            ++j;
        }
        double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t t = i; t < j; ++t) {
            if (all[t].positive) {
                rank_sum_pos += midrank;
            }
        }
        i = j;
    }
    double np = static_cast<double>(positive_scores.size());
    double nn = static_cast<double>(negative_scores.size());
    double u = rank_sum_pos - np * (np + 1.0) / 2.0;
    return u / (np * nn);
}

namespace {

void
fill_rates(ConfusionMetrics& m) {
    auto rate = [](double num, double den) {
        return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
    };
    m.sensitivity = rate(m.tp, m.tp + m.fn);
    m.specificity = rate(m.tn, m.tn + m.fp);
    m.ppv = rate(m.tp, m.tp + m.fp);
    m.npv = rate(m.tn, m.tn + m.fn);
    m.f1 = rate(2.0 * m.tp, 2.0 * m.tp + m.fp + m.fn);
    m.n = m.tp + m.fn;
}

const ComponentKind kAllKinds[] = {ComponentKind::Individual, ComponentKind::Shared,
                                   ComponentKind::Mutual, ComponentKind::NoDetection};

}  // namespace

MetricsReport
compute_metrics(const std::vector<EvalEvent>& detected, const std::vector<EvalEvent>& annotated,
                const MatchRule& rule) {
    AlignResult align = align_events(detected, annotated, rule);
    MetricsReport report;

    // Event level. The negative universe for one kind is every other
    // comparison unit in play: annotated events of other kinds plus false
    // detections of other kinds.
    double universe = static_cast<double>(annotated.size() + align.unmatched_detected.size());
    std::map<ComponentKind, std::vector<double>> pos_scores;
    std::map<ComponentKind, std::vector<double>> neg_scores;
    for (ComponentKind k : kAllKinds) {
        report.event_level[k] = ConfusionMetrics{};
    }
    for (const auto& m : align.matches) {
        ComponentKind k = detected[m.detected].kind;
        report.event_level[k].tp += 1.0;
        if (!std::isnan(detected[m.detected].score)) {
            pos_scores[k].push_back(detected[m.detected].score);
        }
    }
    for (std::size_t d : align.unmatched_detected) {
        ComponentKind k = detected[d].kind;
        report.event_level[k].fp += 1.0;
        if (!std::isnan(detected[d].score)) {
            neg_scores[k].push_back(detected[d].score);
        }
    }
    for (std::size_t a : align.unmatched_annotated) {
        report.event_level[annotated[a].kind].fn += 1.0;
    }
    ConfusionMetrics overall_event;
    std::vector<double> all_pos;
    std::vector<double> all_neg;
    for (ComponentKind k : kAllKinds) {
        ConfusionMetrics& m = report.event_level[k];
        m.tn = universe - m.tp - m.fp - m.fn;
        fill_rates(m);
        m.auc = mann_whitney_auc(pos_scores[k], neg_scores[k]);
        overall_event.tp += m.tp;
        overall_event.fp += m.fp;
        overall_event.fn += m.fn;
        overall_event.tn += m.tn;
        all_pos.insert(all_pos.end(), pos_scores[k].begin(), pos_scores[k].end());
        all_neg.insert(all_neg.end(), neg_scores[k].begin(), neg_scores[k].end());
    }
    fill_rates(overall_event);
    overall_event.auc = mann_whitney_auc(all_pos, all_neg);
    report.overall_event = overall_event;

    // Bin level: presence of each kind at quantum bin centers, per `who`.
    if (!annotated.empty() || !detected.empty()) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& e : annotated) {
            lo = std::min(lo, e.start);
            hi = std::max(hi, e.end);
        }
        for (const auto& e : detected) {
            lo = std::min(lo, e.start);
            hi = std::max(hi, e.end);
        }
        auto first_bin = static_cast<long long>(std::floor(lo / kAnnotationQuantum));
        auto last_bin = static_cast<long long>(std::ceil(hi / kAnnotationQuantum));
        const std::size_t n_bins = static_cast<std::size_t>(last_bin - first_bin);

        std::map<ComponentKind, ConfusionMetrics> bin;
        std::map<ComponentKind, std::vector<double>> bin_pos;
        std::map<ComponentKind, std::vector<double>> bin_neg;
        for (ComponentKind k : kAllKinds) {
            bin[k] = ConfusionMetrics{};
        }

        for (ComponentKind k : kAllKinds) {
            std::set<std::string> whos;
            for (const auto& e : detected) {
                if (e.kind == k) {
                    whos.insert(e.who);
                }
            }
            for (const auto& e : annotated) {
                if (e.kind == k) {
                    whos.insert(e.who);
                }
            }
            for (const auto& who : whos) {
                std::vector<char> d_active(n_bins, 0);
                std::vector<char> a_active(n_bins, 0);
                std::vector<double> d_score(n_bins,
                                            std::numeric_limits<double>::quiet_NaN());
                auto mark = [&](const EvalEvent& e, std::vector<char>& active,
                                std::vector<double>* score) {
                    auto b0 = static_cast<long long>(
                        std::floor(e.start / kAnnotationQuantum + 0.5));
                    auto b1 = static_cast<long long>(
                        std::floor(e.end / kAnnotationQuantum + 0.5));
                    for (long long b = b0; b < b1; ++b) {
                        double center = (static_cast<double>(b) + 0.5) * kAnnotationQuantum;
                        if (center <= e.start || center >= e.end) {
                            continue;
                        }
                        auto idx = static_cast<std::size_t>(b - first_bin);
                        if (idx >= n_bins) {
                            continue;
                        }
                        active[idx] = 1;
                        if (score != nullptr) {
                            double& s = (*score)[idx];
                            if (std::isnan(s) || e.score > s) {
                                s = e.score;
                            }
                        }
                    }
                };
                for (const auto& e : detected) {
                    if (e.kind == k && e.who == who) {
                        mark(e, d_active, &d_score);
                    }
                }
                for (const auto& e : annotated) {
                    if (e.kind == k && e.who == who) {
                        mark(e, a_active, nullptr);
                    }
                }
                for (std::size_t b = 0; b < n_bins; ++b) {
                    if (d_active[b] && a_active[b]) {
                        bin[k].tp += 1.0;
                        if (!std::isnan(d_score[b])) {
                            bin_pos[k].push_back(d_score[b]);
                        }
                    } else if (d_active[b] && !a_active[b]) {
                        bin[k].fp += 1.0;
                        if (!std::isnan(d_score[b])) {
                            bin_neg[k].push_back(d_score[b]);
                        }
                    } else if (!d_active[b] && a_active[b]) {
                        bin[k].fn += 1.0;
                    } else {
                        bin[k].tn += 1.0;
                    }
                }
            }
        }
        ConfusionMetrics overall_bin;
        std::vector<double> all_bin_pos;
        std::vector<double> all_bin_neg;
        for (ComponentKind k : kAllKinds) {
            ConfusionMetrics& m = bin[k];
            fill_rates(m);
            m.auc = mann_whitney_auc(bin_pos[k], bin_neg[k]);
            overall_bin.tp += m.tp;
            overall_bin.fp += m.fp;
            overall_bin.fn += m.fn;
            overall_bin.tn += m.tn;
            all_bin_pos.insert(all_bin_pos.end(), bin_pos[k].begin(), bin_pos[k].end());
            all_bin_neg.insert(all_bin_neg.end(), bin_neg[k].begin(), bin_neg[k].end());
        }
        fill_rates(overall_bin);
        overall_bin.auc = mann_whitney_auc(all_bin_pos, all_bin_neg);
        report.bin_level = std::move(bin);
        report.overall_bin = overall_bin;

        // Person-level frame agreement over annotated bins: the Individual
        // target (or no_detection) each side assigns to the bin center.
        std::set<std::string> persons;
        for (const auto& e : annotated) {
            if (e.kind == ComponentKind::Individual || e.kind == ComponentKind::NoDetection) {
                persons.insert(e.who);
            }
        }
        double agree = 0.0;
        double total = 0.0;
        for (const auto& who : persons) {
            std::vector<std::string> d_label(n_bins);
            std::vector<std::string> a_label(n_bins);
            auto paint = [&](const EvalEvent& e, std::vector<std::string>& label) {
                auto b0 = static_cast<long long>(std::floor(e.start / kAnnotationQuantum + 0.5));
                auto b1 = static_cast<long long>(std::floor(e.end / kAnnotationQuantum + 0.5));
                for (long long b = b0; b < b1; ++b) {
                    double center = (static_cast<double>(b) + 0.5) * kAnnotationQuantum;
                    if (center <= e.start || center >= e.end) {
                        continue;
                    }
                    auto idx = static_cast<std::size_t>(b - first_bin);
                    if (idx < n_bins) {
                        label[idx] = e.kind == ComponentKind::NoDetection ? kNoDetection
                                                                          : e.target;
                    }
                }
            };
            for (const auto& e : detected) {
                if ((e.kind == ComponentKind::Individual ||
                     e.kind == ComponentKind::NoDetection) &&
                    e.who == who) {
                    paint(e, d_label);
                }
            }
            for (const auto& e : annotated) {
                if ((e.kind == ComponentKind::Individual ||
                     e.kind == ComponentKind::NoDetection) &&
                    e.who == who) {
                    paint(e, a_label);
                }
            }
            for (std::size_t b = 0; b < n_bins; ++b) {
                if (a_label[b].empty()) {
                    continue;
                }
                total += 1.0;
                if (a_label[b] == d_label[b]) {
                    agree += 1.0;
                }
            }
        }
        if (total > 0.0) {
            report.frame_agreement = agree / total;
        }
    }
    return report;
}

SubjectComparison
compare_subjects(double caregiver_correct, double caregiver_total, double child_correct,
                 double child_total, const std::vector<double>& caregiver_session_acc,
                 const std::vector<double>& child_session_acc) {
    SubjectComparison out;
    out.z = stats::proportion_z_test(caregiver_correct, caregiver_total, child_correct,
                                     child_total, stats::Tail::Greater);
    out.anova = stats::anova_oneway({caregiver_session_acc, child_session_acc});
    return out;
}

}  // namespace gazekit
