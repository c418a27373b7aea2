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

#include "gazekit/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "gazekit/errors.hpp"
#include "gazekit/io.hpp"
#include "gazekit/util.hpp"
#include "json_util.hpp"

namespace gazekit::io {

namespace {

using nlohmann::json;
using Handlers = std::map<std::string, std::function<void(const json&)>>;

void
walk(const json& j, const std::string& ctx, const Handlers& handlers) {
    if (!j.is_object()) {
        throw InputError(ctx + " must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        auto it = handlers.find(key);
        if (it == handlers.end()) {
            throw InputError(ctx + ": unknown key " + key);
        }
        it->second(value);
    }
}

double
as_number(const json& v, const std::string& ctx) {
    if (!v.is_number()) {
        throw InputError(ctx + " must be a number");
    }
    return v.get<double>();
}

int
as_int(const json& v, const std::string& ctx) {
    if (!v.is_number_integer()) {
        throw InputError(ctx + " must be an integer");
    }
    return v.get<int>();
}

bool
as_bool(const json& v, const std::string& ctx) {
    if (!v.is_boolean()) {
        throw InputError(ctx + " must be true or false");
    }
    return v.get<bool>();
}

std::string
as_string(const json& v, const std::string& ctx) {
    if (!v.is_string()) {
        throw InputError(ctx + " must be a string");
    }
    return v.get<std::string>();
}

std::map<std::string, double>
as_number_map(const json& v, const std::string& ctx) {
    if (!v.is_object()) {
        throw InputError(ctx + " must be an object of numbers");
    }
    std::map<std::string, double> out;
    for (const auto& [key, value] : v.items()) {
        out[key] = as_number(value, ctx + "." + key);
    }
    return out;
}

void
parse_week_effect(const json& j, const std::string& ctx, WeekEffect& w) {
    walk(j, ctx,
         {{"dwell_log_shift",
           [&](const json& v) { w.dwell_log_shift = as_number_map(v, ctx + ".dwell_log_shift"); }},
          {"follow_probability_shift",
           [&](const json& v) {
               w.follow_probability_shift = as_number(v, ctx + ".follow_probability_shift");
           }},
          {"off_task_rate_shift", [&](const json& v) {
               w.off_task_rate_shift = as_number(v, ctx + ".off_task_rate_shift");
           }}});
}

void
parse_agent(const json& j, const std::string& ctx, AgentParams& a) {
    walk(j, ctx,
         {{"follow_probability",
           [&](const json& v) { a.follow_probability = as_number(v, ctx + ".follow_probability"); }},
          {"follow_latency_mean",
           [&](const json& v) { a.follow_latency_mean = as_number(v, ctx + ".follow_latency_mean"); }},
          {"follow_latency_sigma",
           [&](const json& v) {
               a.follow_latency_sigma = as_number(v, ctx + ".follow_latency_sigma");
           }},
          {"off_task_rate_per_min",
           [&](const json& v) {
               a.off_task_rate_per_min = as_number(v, ctx + ".off_task_rate_per_min");
           }},
          {"attention_weights",
           [&](const json& v) { a.attention_weights = as_number_map(v, ctx + ".attention_weights"); }},
          {"dwell_log_mean",
           [&](const json& v) { a.dwell_log_mean = as_number_map(v, ctx + ".dwell_log_mean"); }},
          {"dwell_log_sigma",
           [&](const json& v) { a.dwell_log_sigma = as_number(v, ctx + ".dwell_log_sigma"); }},
          {"gaze_noise_deg",
           [&](const json& v) { a.gaze_noise_deg = as_number(v, ctx + ".gaze_noise_deg"); }},
          {"dropout_rate",
           [&](const json& v) { a.dropout_rate = as_number(v, ctx + ".dropout_rate"); }},
          {"week_effect", [&](const json& v) {
               parse_week_effect(v, ctx + ".week_effect", a.week_effect);
           }}});
}

void
parse_script(const json& j, const std::string& ctx, ProtocolScript& s) {
    walk(j, ctx,
         {{"dwell_face_child",
           [&](const json& v) { s.dwell_face_child = as_number(v, ctx + ".dwell_face_child"); }},
          {"dwell_cue_screen",
           [&](const json& v) { s.dwell_cue_screen = as_number(v, ctx + ".dwell_cue_screen"); }},
          {"dwell_cue_caregiver",
           [&](const json& v) {
               s.dwell_cue_caregiver = as_number(v, ctx + ".dwell_cue_caregiver");
           }},
          {"dwell_jitter_log",
           [&](const json& v) { s.dwell_jitter_log = as_number(v, ctx + ".dwell_jitter_log"); }},
          {"session_length",
           [&](const json& v) { s.session_length = as_number(v, ctx + ".session_length"); }},
          {"frame_rate",
           [&](const json& v) { s.frame_rate = as_number(v, ctx + ".frame_rate"); }}});
}

json
week_effect_to_json(const WeekEffect& w) {
    json j;
    j["dwell_log_shift"] = w.dwell_log_shift;
    j["follow_probability_shift"] = w.follow_probability_shift;
    j["off_task_rate_shift"] = w.off_task_rate_shift;
    return j;
}

json
agent_to_json(const AgentParams& a) {
    json j;
    j["follow_probability"] = a.follow_probability;
    j["follow_latency_mean"] = a.follow_latency_mean;
    j["follow_latency_sigma"] = a.follow_latency_sigma;
    j["off_task_rate_per_min"] = a.off_task_rate_per_min;
    j["attention_weights"] = a.attention_weights;
    j["dwell_log_mean"] = a.dwell_log_mean;
    j["dwell_log_sigma"] = a.dwell_log_sigma;
    j["gaze_noise_deg"] = a.gaze_noise_deg;
    j["dropout_rate"] = a.dropout_rate;
    j["week_effect"] = week_effect_to_json(a.week_effect);
    return j;
}

json
script_to_json(const ProtocolScript& s) {
    json j;
    j["dwell_face_child"] = s.dwell_face_child;
    j["dwell_cue_screen"] = s.dwell_cue_screen;
    j["dwell_cue_caregiver"] = s.dwell_cue_caregiver;
    j["dwell_jitter_log"] = s.dwell_jitter_log;
    j["session_length"] = s.session_length;
    j["frame_rate"] = s.frame_rate;
    return j;
}

}  // namespace

RunConfig
default_config() {
    RunConfig c;
    c.scene = default_scene();
    c.compress.frame_period = 0.0;  // infer from timestamps
    c.sim.child = default_child_params();
    c.sim.caregiver = default_caregiver_params();
    return c;
}

RunConfig
load_config(const std::string& path) {
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

    RunConfig c = default_config();
    bool cone_override = false;
    double cone_value = 0.0;

    walk(j, path,
         {{"scene",
           [&](const json& v) {
               if (v.is_string()) {
                   c.scene_path = v.get<std::string>();
                   c.scene = read_scene_json(c.scene_path);
               } else {
                   c.scene = detail::scene_from_json(v, path + ": scene");
               }
           }},
          {"cone_half_angle_deg",
           [&](const json& v) {
               cone_value = as_number(v, path + ": cone_half_angle_deg");
               cone_override = true;
           }},
          {"compress",
           [&](const json& v) {
               walk(v, path + ": compress",
                    {{"frame_period",
                      [&](const json& x) { c.compress.frame_period = as_number(x, "frame_period"); }},
                     {"gap_tolerance",
                      [&](const json& x) { c.compress.gap_tolerance = as_number(x, "gap_tolerance"); }},
                     {"min_duration", [&](const json& x) {
                          c.compress.min_duration = as_number(x, "min_duration");
                      }}});
           }},
          {"classify",
           [&](const json& v) {
               walk(v, path + ": classify",
                    {{"min_overlap", [&](const json& x) {
                         c.classify.min_overlap = as_number(x, "min_overlap");
                     }}});
           }},
          {"joint_attention",
           [&](const json& v) {
               walk(v, path + ": joint_attention",
                    {{"min_overlap",
                      [&](const json& x) { c.ja.min_overlap = as_number(x, "min_overlap"); }},
                     {"latency_window", [&](const json& x) {
                          c.ja.latency_window = as_number(x, "latency_window");
                      }}});
           }},
          {"match",
           [&](const json& v) {
               walk(v, path + ": match",
                    {{"iou_threshold", [&](const json& x) {
                         c.match.iou_threshold = as_number(x, "iou_threshold");
                     }}});
           }},
          {"analyze",
           [&](const json& v) {
               walk(v, path + ": analyze",
                    {{"subject",
                      [&](const json& x) { c.analyze.subject = parse_role(as_string(x, "subject")); }},
                     {"targets",
                      [&](const json& x) {
                          if (!x.is_array()) {
                              throw InputError(path + ": analyze.targets must be an array");
                          }
                          c.analyze.targets.clear();
                          for (const auto& t : x) {
                              c.analyze.targets.push_back(as_string(t, "analyze.targets entry"));
                          }
                      }},
                     {"n_weeks",
                      [&](const json& x) { c.analyze.n_weeks = as_int(x, "n_weeks"); }},
                     {"alpha", [&](const json& x) { c.analyze.alpha = as_number(x, "alpha"); }}});
           }},
          {"sim",
           [&](const json& v) {
               walk(v, path + ": sim",
                    {{"n_participants",
                      [&](const json& x) { c.sim.n_participants = as_int(x, "n_participants"); }},
                     {"n_weeks", [&](const json& x) { c.sim.n_weeks = as_int(x, "n_weeks"); }},
                     {"sessions_per_participant",
                      [&](const json& x) {
                          c.sim.sessions_per_participant = as_int(x, "sessions_per_participant");
                      }},
                     {"participant_jitter",
                      [&](const json& x) {
                          c.sim.participant_jitter = as_number(x, "participant_jitter");
                      }},
                     {"with_frames",
                      [&](const json& x) { c.sim.with_frames = as_bool(x, "with_frames"); }},
                     {"script",
                      [&](const json& x) { parse_script(x, path + ": sim.script", c.sim.script); }},
                     {"child",
                      [&](const json& x) { parse_agent(x, path + ": sim.child", c.sim.child); }},
                     {"caregiver", [&](const json& x) {
                          parse_agent(x, path + ": sim.caregiver", c.sim.caregiver);
                      }}});
           }},
          {"seed",
           [&](const json& v) {
               if (!v.is_number_unsigned() && !v.is_number_integer()) {
                   throw InputError(path + ": seed must be a non-negative integer");
               }
               if (v.is_number_integer() && v.get<long long>() < 0) {
                   throw InputError(path + ": seed must be a non-negative integer");
               }
               c.seed = v.get<std::uint64_t>();
           }},
          {"jobs", [&](const json& v) { c.jobs = as_int(v, path + ": jobs"); }}});

    if (cone_override) {
        c.scene.cone_half_angle_deg = cone_value;
    }
    c.scene.validate();
    if (c.jobs < 1) {
        throw InputError(path + ": jobs must be at least 1");
    }
    return c;
}

std::string
dump_config(const RunConfig& c) {
    json j;
    j["scene"] = detail::scene_to_json(c.scene);
    j["compress"] = {{"frame_period", c.compress.frame_period},
                     {"gap_tolerance", c.compress.gap_tolerance},
                     {"min_duration", c.compress.min_duration}};
    j["classify"] = {{"min_overlap", c.classify.min_overlap}};
    j["joint_attention"] = {{"min_overlap", c.ja.min_overlap},
                            {"latency_window", c.ja.latency_window}};
    j["match"] = {{"iou_threshold", c.match.iou_threshold}};
    j["analyze"] = {{"subject", role_name(c.analyze.subject)},
                    {"targets", c.analyze.targets},
                    {"n_weeks", c.analyze.n_weeks},
                    {"alpha", c.analyze.alpha}};
    j["sim"] = {{"n_participants", c.sim.n_participants},
                {"n_weeks", c.sim.n_weeks},
                {"sessions_per_participant", c.sim.sessions_per_participant},
                {"participant_jitter", c.sim.participant_jitter},
                {"with_frames", c.sim.with_frames},
                {"script", script_to_json(c.sim.script)},
                {"child", agent_to_json(c.sim.child)},
                {"caregiver", agent_to_json(c.sim.caregiver)}};
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    return j.dump(2);
}

std::string
config_fingerprint(const RunConfig& c) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(dump_config(c))));
    return buf;
}

}  // namespace gazekit::io
