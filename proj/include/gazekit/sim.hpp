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
#include <map>
#include <string>
#include <vector>

#include "gazekit/components.hpp"
#include "gazekit/events.hpp"

namespace gazekit {

// Synthetic triadic sessions with known ground truth. All state changes are
// snapped to the frame grid (times are integer frame counts internally), so
// with zero sensor noise the analysis pipeline can recover the planted
// events exactly rather than approximately.

/// The robot's scripted loop: face the child, cue the screen, cue the
/// caregiver, repeat.
struct ProtocolScript {
    double dwell_face_child = 2.0;     // seconds per state, lognormal-jittered
    double dwell_cue_screen = 6.0;
    double dwell_cue_caregiver = 2.0;
    double dwell_jitter_log = 0.15;    // sigma of the log dwell jitter
    double session_length = 1800.0;    // seconds
    double frame_rate = 30.0;
};

/// Linear-in-week shifts applied to an agent's parameters before a session
/// is generated (multiplied by week_index - 1).
struct WeekEffect {
    std::map<std::string, double> dwell_log_shift;  // per target, log-seconds
    double follow_probability_shift = 0.0;
    double off_task_rate_shift = 0.0;
};

/// Behavioral model of one human agent.
struct AgentParams {
    /// Probability of orienting to each robot state change.
    double follow_probability = 0.85;
    double follow_latency_mean = 0.8;   // seconds
    double follow_latency_sigma = 0.25; // truncated at one frame
    /// Spontaneous off-task glances ("other"), events per minute.
    double off_task_rate_per_min = 2.0;
    /// Baseline attention mix over target names; the next baseline target is
    /// drawn from these weights excluding the current target.
    std::map<std::string, double> attention_weights;
    /// Mean log dwell per target, log-seconds; targets missing here dwell
    /// exp(0) = 1 s on average.
    std::map<std::string, double> dwell_log_mean;
    double dwell_log_sigma = 0.5;
    /// Angular gaze noise: each frame's direction is rotated by
    /// N(0, sigma) degrees around a random perpendicular axis.
    double gaze_noise_deg = 0.0;
    /// Probability a frame is dropped by the tracker (valid = false).
    double dropout_rate = 0.0;
    WeekEffect week_effect;
};

AgentParams
default_child_params();

AgentParams
default_caregiver_params();

/// A plain three-target tabletop layout used by tests and the CLI when no
/// scene file is given.
SceneLayout
default_scene();

/// One robot state change and whether the child responded to it.
struct CueRecord {
    std::string state;       // "face_child" | "cue_screen" | "cue_caregiver"
    double time = 0.0;       // when the robot switched, seconds
    std::string cue_target;  // where the child is expected to orient
    bool followed = false;
    double response_time = 0.0;  // child switch time when followed
};

struct GroundTruth {
    /// Exactly where everyone looked, as events; includes the robot's log.
    std::map<Role, std::vector<GazeEvent>> events;
    /// classify() of the exact events; recorded for convenience.
    std::vector<ComponentEvent> components;
    /// Robot state changes with the child's planted responses.
    std::vector<CueRecord> cues;
};

struct SimResult {
    /// Tracker-style frame streams for child and caregiver.
    std::map<Role, std::vector<FrameObservation>> frames;
    GroundTruth truth;
};

/// Simulates one session. Deterministic in (params, scene, seed).
/// `with_frames` false skips frame synthesis and leaves only events, which
/// is much faster for statistics-only cohorts.
SimResult
simulate_session(const ProtocolScript& script, const AgentParams& child,
                 const AgentParams& caregiver, const SceneLayout& scene, std::uint64_t seed,
                 bool with_frames = true, const ClassifyParams& classify_params = {});

struct CohortSpec {
    int n_participants = 13;
    int n_weeks = 4;
    int sessions_per_participant = 24;  // spread evenly over the weeks
    ProtocolScript script;
    AgentParams child;
    AgentParams caregiver;
    /// Participant-level lognormal jitter applied to follow probability and
    /// off-task rate (not to dwell means, which carry the planted effects).
    double participant_jitter = 0.15;
    bool with_frames = false;
};

struct SimulatedSession {
    SessionRecord record;  // events = ground-truth events
    GroundTruth truth;
    std::uint64_t seed = 0;
    /// Effective parameters of this session (participant jitter and week
    /// effects applied), so the session can be re-simulated verbatim, e.g.
    /// to synthesize its frame streams later.
    AgentParams child_params;
    AgentParams caregiver_params;
};

struct SimulatedParticipant {
    std::string id;
    ParticipantProfile profile;
    AgentParams child_params;  // after participant jitter, before week shifts
    std::vector<SimulatedSession> sessions;
};

struct Cohort {
    std::vector<SimulatedParticipant> participants;
};

/// Generates a full cohort. Session seeds derive from
/// (master_seed, participant, session), so any session can be regenerated
/// alone and participants are independent streams.
Cohort
generate_cohort(const CohortSpec& spec, const SceneLayout& scene, std::uint64_t master_seed);

/// Clinical profile drawn from the intake-score distributions, clamped to
/// instrument ranges.
ParticipantProfile
sample_profile(std::uint64_t seed);

}  // namespace gazekit
