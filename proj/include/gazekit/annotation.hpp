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

#include <map>
#include <string>
#include <vector>

#include "gazekit/components.hpp"
#include "gazekit/stats.hpp"

namespace gazekit {

/// Annotation timestamps are kept on a quarter-second grid.
inline constexpr double kAnnotationQuantum = 0.25;

/// One human-annotated span: person looked at target over [start, end).
struct AnnotationEvent {
    Role person = Role::Child;
    std::string target;
    double start = 0.0;
    double end = 0.0;
};

/// Snaps a raw annotation onto the quantum grid: start floors, end ceils,
/// so the annotated span never shrinks. Throws InputError when the raw span
/// is empty or reversed.
AnnotationEvent
quantize_annotation(Role person, const std::string& target, double raw_start, double raw_end);

/// Converts per-person annotations into gaze-event lists suitable for
/// classify(). Overlaps introduced by quantization are resolved by trimming
/// the later event's start; gaps stay gaps (unannotated time is unknown, not
/// no_detection).
std::map<Role, std::vector<GazeEvent>>
events_from_annotations(const std::vector<AnnotationEvent>& annotations);

/// Uniform comparison record for alignment: `who` is the person name, or the
/// sorted participant names joined with '+' for multi-person components.
struct EvalEvent {
    std::string who;
    ComponentKind kind = ComponentKind::Individual;
    std::string target;  // empty for Mutual
    double start = 0.0;
    double end = 0.0;
    double score = std::numeric_limits<double>::quiet_NaN();
};

EvalEvent
to_eval(const GazeEvent& ev);

EvalEvent
to_eval(const ComponentEvent& ev);

std::vector<EvalEvent>
to_eval(const std::vector<ComponentEvent>& components);

struct MatchRule {
    /// Minimum interval intersection-over-union for two events to match.
    double iou_threshold = 0.5;
};

struct EventMatch {
    std::size_t detected = 0;   // index into the detected list
    std::size_t annotated = 0;  // index into the annotated list
    double iou = 0.0;
};

struct AlignResult {
    std::vector<EventMatch> matches;
    std::vector<std::size_t> unmatched_detected;
    std::vector<std::size_t> unmatched_annotated;
};

/// One-to-one greedy alignment by descending IoU, restricted to events with
/// equal (who, kind, target). Throws ClockMismatchError when both lists are
/// non-empty but their time spans do not intersect at all.
AlignResult
align_events(const std::vector<EvalEvent>& detected, const std::vector<EvalEvent>& annotated,
             const MatchRule& rule);

/// Probability that a random positive scores above a random negative, ties
/// counted half; the area under the ROC curve traced by sweeping a threshold
/// over the scores. NaN when either side is empty.
double
mann_whitney_auc(const std::vector<double>& positive_scores,
                 const std::vector<double>& negative_scores);

struct ConfusionMetrics {
    double n = 0.0;  // annotated positives backing this row
    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    double tn = 0.0;
    double sensitivity = std::numeric_limits<double>::quiet_NaN();
    double specificity = std::numeric_limits<double>::quiet_NaN();
    double ppv = std::numeric_limits<double>::quiet_NaN();
    double npv = std::numeric_limits<double>::quiet_NaN();
    double f1 = std::numeric_limits<double>::quiet_NaN();
    double auc = std::numeric_limits<double>::quiet_NaN();
};

struct MetricsReport {
    /// Whole events as the unit: matched = true positive.
    std::map<ComponentKind, ConfusionMetrics> event_level;
    /// Quantum bins as the unit: presence of the kind at the bin center.
    std::map<ComponentKind, ConfusionMetrics> bin_level;
    ConfusionMetrics overall_event;  // micro-average over kinds
    ConfusionMetrics overall_bin;
    /// Fraction of annotated person-bins whose person-level label
    /// (Individual target or no_detection) agrees with the detection.
    double frame_agreement = std::numeric_limits<double>::quiet_NaN();
};

/// Full agreement table between detected and annotated components.
MetricsReport
compute_metrics(const std::vector<EvalEvent>& detected,
                const std::vector<EvalEvent>& annotated, const MatchRule& rule);

struct SubjectComparison {
    stats::TestResult z;      // one-tailed: caregiver accuracy > child accuracy
    stats::TestResult anova;  // per-session accuracies, caregiver vs child
};

/// Compares detection accuracy between subjects, event-weighted (z on pooled
/// counts) and session-weighted (one-way ANOVA on per-session accuracies).
SubjectComparison
compare_subjects(double caregiver_correct, double caregiver_total, double child_correct,
                 double child_total, const std::vector<double>& caregiver_session_acc,
                 const std::vector<double>& child_session_acc);

}  // namespace gazekit
