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

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazekit {

// Conventions used throughout: positions are meters in a right-handed camera
// frame (x right, y down, z away from the camera), angles are degrees, time
// is seconds on the recording clock.

/// Catch-all target for a valid gaze that missed every labeled candidate.
inline constexpr const char* kOtherTarget = "other";
/// Target name standing in for spans with no usable gaze estimate.
inline constexpr const char* kNoDetection = "no_detection";

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double
    dot(const Vec3& o) const {
        return x * o.x + y * o.y + z * o.z;
    }

    double
    norm() const {
        return std::sqrt(dot(*this));
    }

    Vec3
    operator-(const Vec3& o) const {
        return {x - o.x, y - o.y, z - o.z};
    }

    Vec3
    operator+(const Vec3& o) const {
        return {x + o.x, y + o.y, z + o.z};
    }

    Vec3
    operator*(double s) const {
        return {x * s, y * s, z * s};
    }

    Vec3
    normalized() const;

    Vec3
    cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }

    bool
    finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

/// Angle between two directions, degrees in [0, 180].
double
angle_between_deg(const Vec3& a, const Vec3& b);

enum class Role { Child, Caregiver, Robot };

std::string_view
role_name(Role r);

/// Parses "child" / "caregiver" / "robot" (case sensitive). Throws InputError
/// on anything else.
Role
parse_role(std::string_view s);

struct SceneTarget {
    std::string name;
    Vec3 position;
};

/// Static description of one recording setup: where the labeled targets sit,
/// where each person is seated, and how wide the visual cone is.
struct SceneLayout {
    std::vector<SceneTarget> targets;
    std::map<Role, Vec3> seats;
    double cone_half_angle_deg = 10.0;
    std::string frame_note;

    const SceneTarget*
    find_target(std::string_view name) const;

    /// Enforces the layout contract: half angle in (0, 90], child and
    /// caregiver seats present, all positions finite and pairwise distinct,
    /// target names unique, non-empty and not clashing with role names.
    void
    validate() const;
};

/// One face track on one frame, as produced by an upstream face/gaze tracker.
struct FrameObservation {
    double timestamp = 0.0;
    int face_index = -1;
    Vec3 gaze_direction;  // unit length when valid
    Vec3 head_position;   // meters; all-zero means the tracker had no estimate
    double confidence = 0.0;
    bool valid = false;
};

/// Result of the visual-cone test for a single observation.
struct TargetHit {
    /// Winning target name; empty when nothing fell inside the cone.
    std::optional<std::string> target;
    /// Cone half angle minus the angular distance to the nearest candidate,
    /// degrees. Positive iff a hit; doubles as a detection confidence score.
    double margin_deg = std::numeric_limits<double>::quiet_NaN();
};

enum class RoleRule {
    /// Exactly two faces: the one further to the image right (larger x) is
    /// the child. One face falls back to seat proximity; more than two is
    /// ambiguous.
    HorizontalOrder,
    /// Greedy nearest-seat assignment; works for any number of faces.
    SeatProximity,
    /// face_index -> role, honored verbatim.
    ExplicitMap,
};

struct RolePolicy {
    RoleRule rule = RoleRule::HorizontalOrder;
    std::map<int, Role> explicit_map;
};

struct RoleAssignment {
    /// At most one observation per role; only Child / Caregiver appear here.
    std::map<Role, FrameObservation> assigned;
    /// Faces left over after assignment. Kept for bookkeeping, not analyzed.
    std::vector<FrameObservation> unassigned;
};

/// Assigns the faces detected on one frame to person roles.
/// Throws AmbiguousRolesError when the policy cannot decide.
RoleAssignment
assign_roles(const std::vector<FrameObservation>& faces, const RolePolicy& policy,
             const SceneLayout& scene);

/// Runs the visual-cone test for one observation. Candidates are every
/// static target plus every other person (named by role). The nearest
/// candidate inside the cone wins; exact angular ties go to the
/// lexicographically smaller name. `person_positions` supplies where other
/// people actually are this frame; roles absent from it fall back to their
/// seat. Throws InvalidObservationError if obs is marked invalid or breaks
/// the observation contract.
TargetHit
infer_target(const FrameObservation& obs, Role viewer, const SceneLayout& scene,
             const std::map<Role, Vec3>& person_positions = {});

/// One frame of the labeled gaze stream. `target` empty means no usable
/// estimate this frame (invalid/missing observation). A valid frame whose
/// gaze missed every labeled candidate gets the catch-all target "other"
/// with its (negative) margin kept as the score.
struct LabeledFrame {
    double timestamp = 0.0;
    std::optional<std::string> target;
    double margin_deg = std::numeric_limits<double>::quiet_NaN();
};

/// Labels whole per-role streams at once. All streams must be on a common
/// clock: equal length and pairwise equal timestamps (ClockMismatchError
/// otherwise), timestamps non-decreasing (UnorderedInputError otherwise).
/// When another person's head position is valid on a frame it is used as
/// that person's position, otherwise their seat is used. Runs on the batch
/// kernels, so cost is O(frames x candidates).
std::map<Role, std::vector<LabeledFrame>>
label_stream(const std::map<Role, std::vector<FrameObservation>>& streams,
             const SceneLayout& scene);

}  // namespace gazekit
