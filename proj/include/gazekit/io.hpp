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

#include "gazekit/annotation.hpp"
#include "gazekit/components.hpp"
#include "gazekit/events.hpp"
#include "gazekit/geometry.hpp"
#include "gazekit/profile.hpp"

namespace gazekit::io {

// File formats. All readers throw InputError with the path, line number and
// an explanation on malformed input; writers are deterministic byte-for-byte
// for equal inputs. Doubles are written with "%.17g" so values survive a
// round trip exactly.

/// Per-frame tracker stream. Header columns, any order, extras ignored:
/// timestamp_s, face_index, gaze_dir_x, gaze_dir_y, gaze_dir_z,
/// head_x, head_y, head_z, confidence, valid.
std::vector<FrameObservation>
read_frames_csv(const std::string& path);

void
write_frames_csv(const std::string& path, const std::vector<FrameObservation>& frames);

/// Gaze events. Header: person, target, start_s, duration_s and optionally
/// score. person must parse as child | caregiver | robot.
std::vector<GazeEvent>
read_events_csv(const std::string& path);

void
write_events_csv(const std::string& path, const std::vector<GazeEvent>& events);

/// Component events. Header: participants, kind, target, start_s,
/// duration_s, score; participants joined with '+', target empty for
/// mutual gaze and no_detection rows.
std::vector<ComponentEvent>
read_components_csv(const std::string& path);

void
write_components_csv(const std::string& path, const std::vector<ComponentEvent>& components);

/// Cohort session events in long form. Header: participant_id,
/// session_index, day_index, week_index, frame_rate, person, target,
/// start_s, duration_s, score. Rows group into one SessionRecord per
/// (participant_id, session_index); events are sorted by (person, start).
std::vector<SessionRecord>
read_sessions_csv(const std::string& path);

void
write_sessions_csv(const std::string& path, const std::vector<SessionRecord>& sessions);

/// Clinical intake scores. Header: participant_id plus the nine covariate
/// columns (ados_css, adir_social, adir_comm, adir_rrb, adir_dev,
/// das_verbal, das_nonverbal, das_spatial, das_gca).
std::map<std::string, ParticipantProfile>
read_profiles_csv(const std::string& path);

void
write_profiles_csv(const std::string& path,
                   const std::map<std::string, ParticipantProfile>& profiles);

/// Scene layout JSON: targets (name + xyz), seats (role + xyz),
/// cone_half_angle_deg, optional frame_note.
SceneLayout
read_scene_json(const std::string& path);

void
write_scene_json(const std::string& path, const SceneLayout& scene);

/// Annotation timeline export: tab-separated with header
/// tier, annotation, start_ms, end_ms. Tiers are person names; times are
/// integer milliseconds and convert to seconds on read.
std::vector<AnnotationEvent>
read_annotations_tsv(const std::string& path);

void
write_annotations_tsv(const std::string& path, const std::vector<AnnotationEvent>& spans);

/// Formats a double as the CSV writers do.
std::string
format_double(double v);

}  // namespace gazekit::io
