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

#include <fstream>

#include "gazekit/errors.hpp"
#include "gazekit/io.hpp"
#include "json_util.hpp"

namespace gazekit::io {

namespace {

using nlohmann::json;

Vec3
vec3_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number()) {
        throw InputError(what + " must be a [x, y, z] number triple");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json
vec3_to(const Vec3& v) {
    return json::array({v.x, v.y, v.z});
}

}  // namespace

namespace detail {

SceneLayout
scene_from_json(const json& j, const std::string& context) {
    if (!j.is_object()) {
        throw InputError(context + ": scene must be a JSON object");
    }
    SceneLayout scene;
    for (const auto& [key, value] : j.items()) {
        if (key == "cone_half_angle_deg") {
            if (!value.is_number()) {
                throw InputError(context + ": cone_half_angle_deg must be a number");
            }
            scene.cone_half_angle_deg = value.get<double>();
        } else if (key == "frame_note") {
            if (!value.is_string()) {
                throw InputError(context + ": frame_note must be a string");
            }
            scene.frame_note = value.get<std::string>();
        } else if (key == "targets") {
            if (!value.is_array()) {
                throw InputError(context + ": targets must be an array");
            }
            for (const auto& t : value) {
                if (!t.is_object() || !t.contains("name") || !t.contains("position") ||
                    !t["name"].is_string()) {
                    throw InputError(context + ": each target needs a name and a position");
                }
                SceneTarget target;
                target.name = t["name"].get<std::string>();
                target.position = vec3_from(t["position"], context + ": target position");
                scene.targets.push_back(std::move(target));
            }
        } else if (key == "seats") {
            if (!value.is_object()) {
                throw InputError(context + ": seats must be an object keyed by role");
            }
            for (const auto& [role_key, pos] : value.items()) {
                Role role = parse_role(role_key);
                scene.seats[role] = vec3_from(pos, context + ": seat " + role_key);
            }
        } else {
            throw InputError(context + ": unknown scene key " + key);
        }
    }
    try {
        scene.validate();
    } catch (const InputError& e) {
        throw InputError(context + ": " + e.what());
    }
    return scene;
}

json
scene_to_json(const SceneLayout& scene) {
    json j;
    j["cone_half_angle_deg"] = scene.cone_half_angle_deg;
    if (!scene.frame_note.empty()) {
        j["frame_note"] = scene.frame_note;
    }
    j["targets"] = json::array();
    for (const auto& t : scene.targets) {
        j["targets"].push_back({{"name", t.name}, {"position", vec3_to(t.position)}});
    }
    j["seats"] = json::object();
    for (const auto& [role, pos] : scene.seats) {
        j["seats"][role_name(role)] = vec3_to(pos);
    }
    return j;
}

}  // namespace detail

SceneLayout
read_scene_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError(path + ": cannot open for reading");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return detail::scene_from_json(j, path);
}

void
write_scene_json(const std::string& path, const SceneLayout& scene) {
    std::ofstream out(path);
    if (!out) {
        throw InputError(path + ": cannot open for writing");
    }
    out << detail::scene_to_json(scene).dump(2) << '\n';
}

}  // namespace gazekit::io
