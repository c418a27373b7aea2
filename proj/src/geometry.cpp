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

#include "gazekit/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "gazekit/errors.hpp"
#include "gazekit/kernels.hpp"

namespace gazekit {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
// A head estimate of exactly (0,0,0) is the trackers' "no estimate" marker.
bool
usable_head(const Vec3& head) {
    return head.finite() && (head.x != 0.0 || head.y != 0.0 || head.z != 0.0);
}

// Gaze directions must arrive unit length; allow fp slack from serialization.
bool
usable_gaze(const Vec3& g) {
    if (!g.finite()) {
        return false;
    }
    double n = g.norm();
    return std::abs(n - 1.0) <= 1e-3;
}

}  // namespace

Vec3
Vec3::normalized() const {
    double n = norm();
    if (!(n > 1e-12)) {
        throw InvariantError("cannot normalize a near-zero vector");
    }
    return {x / n, y / n, z / n};
}

double
angle_between_deg(const Vec3& a, const Vec3& b) {
    double na = a.norm();
    double nb = b.norm();
    if (!(na > 1e-12) || !(nb > 1e-12)) {
        throw InvariantError("angle between degenerate vectors");
    }
    double c = a.dot(b) / (na * nb);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c) * kRadToDeg;
}

std::string_view
role_name(Role r) {
    switch (r) {
    case Role::Child:
        return "child";
    case Role::Caregiver:
        return "caregiver";
    case Role::Robot:
        return "robot";
    }
    throw InvariantError("unknown role value");
}

Role
parse_role(std::string_view s) {
    if (s == "child") {
        return Role::Child;
    }
    if (s == "caregiver") {
        return Role::Caregiver;
    }
    if (s == "robot") {
        return Role::Robot;
    }
    throw InputError("unknown role name: " + std::string(s));
}

const SceneTarget*
SceneLayout::find_target(std::string_view name) const {
    for (const auto& t : targets) {
        if (t.name == name) {
            return &t;
        }
    }
    return nullptr;
}

void
SceneLayout::validate() const {
    if (!(cone_half_angle_deg > 0.0) || cone_half_angle_deg > 90.0) {
        throw InputError("cone_half_angle_deg must be in (0, 90]");
    }
    if (!seats.count(Role::Child) || !seats.count(Role::Caregiver)) {
        throw InputError("scene must declare child and caregiver seats");
    }
    for (const auto& [role, pos] : seats) {
        if (!pos.finite()) {
            throw InputError("seat position for " + std::string(role_name(role)) +
                             " is not finite");
        }
    }
    for (const auto& t : targets) {
        if (t.name.empty()) {
            throw InputError("scene target with empty name");
        }
        if (t.name == "child" || t.name == "caregiver" || t.name == "other" ||
            t.name == "no_detection") {
            throw InputError("scene target name is reserved: " + t.name);
        }
        if (!t.position.finite()) {
            throw InputError("scene target position not finite: " + t.name);
        }
    }
    auto too_close = [](const Vec3& a, const Vec3& b) { return (a - b).norm() < 1e-9; };
    for (std::size_t i = 0; i < targets.size(); ++i) {
        for (std::size_t j = i + 1; j < targets.size(); ++j) {
            if (targets[i].name == targets[j].name) {
                throw InputError("duplicate scene target name: " + targets[i].name);
            }
            if (too_close(targets[i].position, targets[j].position)) {
                throw InputError("scene targets " + targets[i].name + " and " +
                                 targets[j].name + " share a position");
            }
        }
    }
    // Seats must not coincide with each other or with a static target;
    // a candidate sitting on top of a viewer has no direction.
    for (auto it = seats.begin(); it != seats.end(); ++it) {
        for (auto jt = std::next(it); jt != seats.end(); ++jt) {
            if (too_close(it->second, jt->second)) {
                throw InputError("two seats share a position");
            }
        }
        for (const auto& t : targets) {
            if (too_close(it->second, t.position)) {
                throw InputError("seat coincides with target: " + t.name);
            }
        }
    }
}

namespace {

void
check_face(const FrameObservation& f) {
    if (!std::isfinite(f.timestamp) || !f.head_position.finite()) {
        throw InvalidObservationError("face observation with non-finite fields");
    }
}

RoleAssignment
assign_by_seats(const std::vector<FrameObservation>& faces, const SceneLayout& scene) {
    RoleAssignment out;
    std::vector<bool> taken(faces.size(), false);
    std::vector<Role> open{Role::Child, Role::Caregiver};
    while (!open.empty()) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_face = faces.size();
        std::size_t best_role = open.size();
        bool tie = false;
        for (std::size_t fi = 0; fi < faces.size(); ++fi) {
            if (taken[fi] || !usable_head(faces[fi].head_position)) {
                continue;
            }
            for (std::size_t ri = 0; ri < open.size(); ++ri) {
                double d = (faces[fi].head_position - scene.seats.at(open[ri])).norm();
                if (d < best) {
                    best = d;
                    best_face = fi;
                    best_role = ri;
                    tie = false;
                } else if (d == best) {
                    tie = true;
                }
            }
        }
        if (best_face == faces.size()) {
            break;  // no assignable faces left
        }
        if (tie) {
            throw AmbiguousRolesError("faces equidistant from seats");
        }
        out.assigned[open[best_role]] = faces[best_face];
        taken[best_face] = true;
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(best_role));
    }
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        if (!taken[fi]) {
            out.unassigned.push_back(faces[fi]);
        }
    }
    return out;
}

}  // namespace

RoleAssignment
assign_roles(const std::vector<FrameObservation>& faces, const RolePolicy& policy,
             const SceneLayout& scene) {
    for (const auto& f : faces) {
        check_face(f);
    }
    RoleAssignment out;
    switch (policy.rule) {
    case RoleRule::ExplicitMap: {
        for (const auto& f : faces) {
            auto it = policy.explicit_map.find(f.face_index);
            if (it == policy.explicit_map.end()) {
                out.unassigned.push_back(f);
                continue;
            }
            if (it->second == Role::Robot) {
                throw InputError("explicit role map cannot assign a face to the robot");
            }
            if (out.assigned.count(it->second)) {
                throw AmbiguousRolesError("two faces mapped to role " +
                                          std::string(role_name(it->second)));
            }
            out.assigned[it->second] = f;
        }
        return out;
    }
    case RoleRule::SeatProximity:
        return assign_by_seats(faces, scene);
    case RoleRule::HorizontalOrder: {
        if (faces.empty()) {
            return out;
        }
        if (faces.size() == 1) {
            return assign_by_seats(faces, scene);
        }
        if (faces.size() > 2) {
            throw AmbiguousRolesError("more than two faces under the horizontal-order policy");
        }
        const auto& a = faces[0];
        const auto& b = faces[1];
        if (!usable_head(a.head_position) || !usable_head(b.head_position) ||
            a.head_position.x == b.head_position.x) {
            throw AmbiguousRolesError("cannot order faces horizontally");
        }
        if (a.head_position.x > b.head_position.x) {
            out.assigned[Role::Child] = a;
            out.assigned[Role::Caregiver] = b;
        } else {
            out.assigned[Role::Child] = b;
            out.assigned[Role::Caregiver] = a;
        }
        return out;
    }
    }
    throw InvariantError("unknown role rule");
}

namespace {

struct Candidate {
    std::string name;
    bool is_person = false;
    Role person = Role::Child;
    Vec3 fixed;
};

// Candidate list for one viewer: static targets plus the other people,
// sorted by name so that "first wins" equals the lexicographic tie-break.
std::vector<Candidate>
candidates_for(Role viewer, const SceneLayout& scene, bool include_robot_person) {
    std::vector<Candidate> cands;
    for (const auto& t : scene.targets) {
        cands.push_back({t.name, false, Role::Child, t.position});
    }
    std::vector<Role> persons{Role::Child, Role::Caregiver};
    if (include_robot_person) {
        persons.push_back(Role::Robot);
    }
    for (Role r : persons) {
        if (r == viewer) {
            continue;
        }
        // A static target with the same name wins over the person entry;
        // standard layouts declare the robot as a static target.
        if (scene.find_target(role_name(r)) != nullptr) {
            continue;
        }
        cands.push_back({std::string(role_name(r)), true, r, {}});
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& x, const Candidate& y) { return x.name < y.name; });
    return cands;
}

Vec3
gaze_origin(const FrameObservation& obs, Role viewer, const SceneLayout& scene) {
    if (usable_head(obs.head_position)) {
        return obs.head_position;
    }
    auto it = scene.seats.find(viewer);
    if (it == scene.seats.end()) {
        throw InputError("no head estimate and no seat for viewer " +
                         std::string(role_name(viewer)));
    }
    return it->second;
}

}  // namespace

TargetHit
infer_target(const FrameObservation& obs, Role viewer, const SceneLayout& scene,
             const std::map<Role, Vec3>& person_positions) {
    if (!obs.valid) {
        throw InvalidObservationError("infer_target on an invalid observation");
    }
    if (!usable_gaze(obs.gaze_direction)) {
        throw InvalidObservationError("valid observation with a non-unit gaze direction");
    }
    Vec3 gaze = obs.gaze_direction.normalized();
    Vec3 origin = gaze_origin(obs, viewer, scene);

    auto cands = candidates_for(viewer, scene, person_positions.count(Role::Robot) > 0);
    TargetHit hit;
    double best_angle = std::numeric_limits<double>::infinity();
    std::string best_name;
    for (const auto& c : cands) {
        Vec3 pos = c.fixed;
        if (c.is_person) {
            auto it = person_positions.find(c.person);
            if (it != person_positions.end() && it->second.finite()) {
                pos = it->second;
            } else {
                auto st = scene.seats.find(c.person);
                if (st == scene.seats.end()) {
                    continue;
                }
                pos = st->second;
            }
        }
        Vec3 ray = pos - origin;
        if (ray.norm() < 1e-9) {
            continue;
        }
        double ang = angle_between_deg(gaze, ray);
        if (ang < best_angle) {
            best_angle = ang;
            best_name = c.name;
        }
    }
    if (!best_name.empty()) {
        hit.margin_deg = scene.cone_half_angle_deg - best_angle;
        if (hit.margin_deg >= 0.0) {
            hit.target = best_name;
        }
    }
    return hit;
}

namespace {

void
check_common_clock(const std::map<Role, std::vector<FrameObservation>>& streams) {
    const std::vector<FrameObservation>* ref = nullptr;
    Role ref_role = Role::Child;
    for (const auto& [role, stream] : streams) {
        for (std::size_t i = 1; i < stream.size(); ++i) {
            if (stream[i].timestamp < stream[i - 1].timestamp) {
                std::ostringstream os;
                os << "timestamps step backwards in " << role_name(role) << " stream at row "
                   << i;
                throw UnorderedInputError(os.str());
            }
        }
        if (ref == nullptr) {
            ref = &stream;
            ref_role = role;
            continue;
        }
        if (stream.size() != ref->size()) {
            throw ClockMismatchError("streams differ in length; not on a common clock");
        }
        for (std::size_t i = 0; i < stream.size(); ++i) {
            if (stream[i].timestamp != (*ref)[i].timestamp) {
                std::ostringstream os;
                os << "streams " << role_name(ref_role) << " and " << role_name(role)
                   << " disagree on the clock at row " << i;
                throw ClockMismatchError(os.str());
            }
        }
    }
}

}  // namespace

std::map<Role, std::vector<LabeledFrame>>
label_stream(const std::map<Role, std::vector<FrameObservation>>& streams,
             const SceneLayout& scene) {
    scene.validate();
    check_common_clock(streams);

    std::map<Role, std::vector<LabeledFrame>> out;
    for (const auto& [viewer, stream] : streams) {
        const std::size_t n = stream.size();
        std::vector<LabeledFrame> labels(n);
        if (n == 0) {
            out.emplace(viewer, std::move(labels));
            continue;
        }

        std::vector<double> gx(n), gy(n), gz(n), ox(n), oy(n), oz(n);
        std::vector<char> ok(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& obs = stream[i];
            labels[i].timestamp = obs.timestamp;
            if (!obs.valid) {
                gx[i] = 0.0;
                gy[i] = 0.0;
                gz[i] = 1.0;
            } else {
                if (!usable_gaze(obs.gaze_direction)) {
                    std::ostringstream os;
                    os << "row " << i << " of " << role_name(viewer)
                       << " stream is marked valid but has a non-unit gaze direction";
                    throw InvalidObservationError(os.str());
                }
                Vec3 g = obs.gaze_direction.normalized();
                gx[i] = g.x;
                gy[i] = g.y;
                gz[i] = g.z;
                ok[i] = 1;
            }
            Vec3 origin = usable_head(obs.head_position) ? obs.head_position
                                                         : scene.seats.at(viewer);
            ox[i] = origin.x;
            oy[i] = origin.y;
            oz[i] = origin.z;
        }

        auto cands = candidates_for(viewer, scene, false);
        std::vector<double> px(n), py(n), pz(n), cand(n);
        std::vector<double> best_val(n, -4.0);
        std::vector<std::int32_t> best_idx(n, -1);
        for (std::size_t k = 0; k < cands.size(); ++k) {
            const auto& c = cands[k];
            if (c.is_person) {
                const Vec3 seat = scene.seats.at(c.person);
                auto it = streams.find(c.person);
                for (std::size_t i = 0; i < n; ++i) {
                    Vec3 pos = seat;
                    if (it != streams.end() && usable_head(it->second[i].head_position)) {
                        pos = it->second[i].head_position;
                    }
                    px[i] = pos.x;
                    py[i] = pos.y;
                    pz[i] = pos.z;
                }
            } else {
                std::fill(px.begin(), px.end(), c.fixed.x);
                std::fill(py.begin(), py.end(), c.fixed.y);
                std::fill(pz.begin(), pz.end(), c.fixed.z);
            }
            kernels::cos_to_point(gx.data(), gy.data(), gz.data(), ox.data(), oy.data(),
                                  oz.data(), px.data(), py.data(), pz.data(), cand.data(), n);
            kernels::argmax_update(cand.data(), static_cast<std::int32_t>(k), best_val.data(),
                                   best_idx.data(), n);
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (!ok[i]) {
                continue;  // stays target-less with NaN margin
            }
            if (best_idx[i] < 0) {
                labels[i].target = kOtherTarget;
                labels[i].margin_deg = scene.cone_half_angle_deg - 180.0;
                continue;
            }
            double c = std::clamp(best_val[i], -1.0, 1.0);
            double ang = std::acos(c) * kRadToDeg;
            double margin = scene.cone_half_angle_deg - ang;
            labels[i].margin_deg = margin;
            labels[i].target =
                margin >= 0.0 ? cands[static_cast<std::size_t>(best_idx[i])].name : kOtherTarget;
        }
        out.emplace(viewer, std::move(labels));
    }
    return out;
}

}  // namespace gazekit
