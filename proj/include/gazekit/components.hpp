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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gazekit/events.hpp"

namespace gazekit {

enum class ComponentKind { Individual, Shared, Mutual, NoDetection };

std::string_view
component_name(ComponentKind k);

ComponentKind
parse_component(std::string_view s);

/// One classified span of the session's gaze structure.
///  - Individual: one person on one target (any non-no_detection target).
///  - Shared: two or more people on the same object target simultaneously;
///    the interval is the intersection of the contributing events.
///  - Mutual: two people looking at each other; symmetric in the pair.
///  - NoDetection: one person with no usable gaze estimate.
struct ComponentEvent {
    ComponentKind kind = ComponentKind::Individual;
    std::set<Role> participants;
    /// Target name for Individual / Shared; empty for Mutual / NoDetection.
    std::optional<std::string> target;
    double start = 0.0;
    double duration = 0.0;
    /// Detection confidence: the contributing events' score (Individual) or
    /// the weakest contributing score (Shared / Mutual).
    double score = std::numeric_limits<double>::quiet_NaN();

    double
    end() const {
        return start + duration;
    }
};

/// True when the target names a single physical object someone else can
/// join on: anything but "other", "no_detection" and the human participants.
/// The robot counts; it is a thing in the room.
bool
is_object_target(const std::string& target);

struct ClassifyParams {
    /// Minimum joint span for Shared and Mutual components, seconds.
    double min_overlap = 0.25;
};

/// Classifies per-person event lists into components. Event lists must be
/// per-person non-overlapping and sorted by start (UnorderedInputError
/// otherwise). Shared and Mutual components are built pairwise; shared
/// intervals equal across pairs for one target merge their participant sets.
/// Targets "other" and "no_detection" and person names never form Shared
/// components: "other" is a catch-all that does not identify one object.
std::vector<ComponentEvent>
classify(const std::map<Role, std::vector<GazeEvent>>& events_by_person,
         const ClassifyParams& params);

/// A completed joint-attention episode: mutual gaze, then the leader moves
/// to an object target and the follower arrives within the latency window
/// while the leader is still there.
struct JointAttentionEpisode {
    Role leader = Role::Child;
    Role follower = Role::Child;
    double mutual_start = 0.0;
    double mutual_duration = 0.0;
    std::string target;
    /// Follower arrival minus leader shift, in [0, latency_window].
    double follow_latency = 0.0;
    double shared_start = 0.0;
    double shared_duration = 0.0;
};

struct JaParams {
    double min_overlap = 0.25;
    /// How long after the leader's shift the follower may arrive, seconds.
    double latency_window = 3.0;
};

struct JaResult {
    std::vector<JointAttentionEpisode> episodes;
    /// Mutual spans where both people left for objects at the exact same
    /// instant; no leader exists, so no episode is emitted.
    int suppressed_ties = 0;
};

/// Detects joint-attention episodes. For each Mutual span between A and B:
/// whoever first leaves it directly for an object target is the leader (a
/// shift means the contributing event is immediately followed by an event on
/// an object target). The other person follows by arriving on the same
/// target within latency_window of the shift and before the leader leaves
/// it. Exact shift ties are suppressed and counted instead of guessed.
JaResult
detect_joint_attention(const std::map<Role, std::vector<GazeEvent>>& events_by_person,
                       const JaParams& params);

/// Counts cue-following responses: for every Mutual span between a subject
/// and cue_source, the subject's first event on cue_target starting within
/// latency_window after the mutual span ends counts once. Summed over all
/// subjects other than cue_source and cue_target.
int
gaze_following_count(const std::map<Role, std::vector<GazeEvent>>& events_by_person,
                     Role cue_source, Role cue_target, const JaParams& params);

}  // namespace gazekit
