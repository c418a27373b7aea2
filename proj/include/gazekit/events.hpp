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

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gazekit/geometry.hpp"
#include "gazekit/profile.hpp"

namespace gazekit {

/// A maximal run of frames on one target by one person. `target` is a scene
/// target name, "other", or "no_detection". Covers [start, start + duration).
struct GazeEvent {
    Role person = Role::Child;
    std::string target;
    double start = 0.0;
    double duration = 0.0;
    /// Mean angular margin of the contributing valid frames, degrees.
    /// NaN when no frame carried a margin.
    double score = std::numeric_limits<double>::quiet_NaN();

    double
    end() const {
        return start + duration;
    }
};

struct CompressParams {
    /// Nominal spacing of the frame clock, seconds. Each frame covers one
    /// period, so a run of k frames lasts k * frame_period.
    double frame_period = 1.0 / 30.0;
    /// Target-less runs up to this long are absorbed when sandwiched between
    /// runs on the same target (tracking flicker).
    double gap_tolerance = 0.2;
    /// Events shorter than this are relabeled as no_detection instead of
    /// counting as glances.
    double min_duration = 0.1;
};

/// Compresses a labeled frame stream into maximal events. Timestamps must be
/// non-decreasing (UnorderedInputError otherwise). Holes in the frame clock
/// longer than 1.5 periods become explicit no_detection spans, so the events
/// always tile [first_frame, last_frame + period) exactly: every span of the
/// session is covered by exactly one event and adjacent events never share a
/// target.
std::vector<GazeEvent>
compress(Role person, const std::vector<LabeledFrame>& labels, const CompressParams& params);

/// Inverse of compress for contiguous event lists: renders events back into
/// a frame stream at `frame_rate`. no_detection events become target-less
/// frames, so compress(expand(E)) with zero tolerances reproduces E exactly
/// when E's boundaries sit on the frame grid.
std::vector<LabeledFrame>
expand(const std::vector<GazeEvent>& events, double frame_rate);

/// Median positive timestamp step, a robust frame-period estimate.
/// Throws DegenerateSampleError when no positive step exists.
double
infer_frame_period(const std::vector<LabeledFrame>& labels);

/// Compares event lists field by field with an absolute time tolerance.
bool
events_equal(const std::vector<GazeEvent>& a, const std::vector<GazeEvent>& b,
             double tol = 1e-9);

/// One recorded session of one participant.
struct SessionRecord {
    std::string participant_id;
    int session_index = 1;  // ordinal within the participant, 1-based
    int day_index = 1;      // calendar day of the program, 1-based
    int week_index = 1;     // derived from day_index
    double frame_rate = 30.0;
    std::vector<GazeEvent> events;  // sorted by (person, start)
    std::optional<ParticipantProfile> clinical;
};

/// Calendar week of a program day: days 1..7 are week 1 and so on, with the
/// final week absorbing the remainder days (day 30 stays in week n_weeks).
int
week_of_day(int day_index, int n_weeks = 4);

struct WeeklyAggregate {
    int week = 0;
    int n_sessions = 0;
    /// Events matching (person, target), summed over the week's sessions.
    int n_events = 0;
    /// Mean per-session event count; sessions without matches count as zero.
    double mean_instances = std::numeric_limits<double>::quiet_NaN();
    double mean_duration = std::numeric_limits<double>::quiet_NaN();
    /// Sample variance of log durations; NaN below two events.
    double var_log_duration = std::numeric_limits<double>::quiet_NaN();
};

/// Per-week instance counts and duration summaries for one (person, target)
/// pair. Every week from 1 to the maximum seen is reported; weeks with no
/// sessions keep n_sessions == 0 and NaN summaries rather than being imputed.
std::vector<WeeklyAggregate>
aggregate_weekly(const std::vector<SessionRecord>& sessions, Role person,
                 const std::string& target);

}  // namespace gazekit
