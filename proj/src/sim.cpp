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

#include "gazekit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gazekit/errors.hpp"
#include "gazekit/util.hpp"

namespace gazekit {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct StateDef {
    const char* name;
    const char* robot_target;
    const char* child_response;
    const char* caregiver_response;
};

// The A -> B -> C protocol loop and how each agent reacts to a state entry.
const StateDef kStates[3] = {
    {"face_child", "child", "robot", "child"},
    {"cue_screen", "screen", "screen", "screen"},
    {"cue_caregiver", "caregiver", "caregiver", "robot"},
};

struct Transition {
    std::int64_t frame = 0;
    int state = 0;
};

struct Forced {
    std::int64_t frame = 0;
    std::string target;
    bool is_cue = false;
    std::size_t cue_index = 0;  // into the CueRecord list when is_cue
};

struct Seg {
    std::int64_t start = 0;
    std::string target;
};

double
clamp01(double v) {
    return std::clamp(v, 0.0, 1.0);
}

std::int64_t
dwell_frames(std::mt19937_64& rng, const AgentParams& p, const std::string& target,
             double frame_rate) {
    double mu = 0.0;
    auto it = p.dwell_log_mean.find(target);
    if (it != p.dwell_log_mean.end()) {
        mu = it->second;
    }
    std::normal_distribution<double> z(0.0, 1.0);
    double seconds = std::exp(mu + p.dwell_log_sigma * z(rng));
    auto frames = static_cast<std::int64_t>(std::llround(seconds * frame_rate));
    return std::max<std::int64_t>(1, frames);
}

std::string
pick_baseline(std::mt19937_64& rng, const AgentParams& p, const std::string& current) {
    double total = 0.0;
    for (const auto& [name, w] : p.attention_weights) {
        if (name != current && w > 0.0) {
            total += w;
        }
    }
    if (!(total > 0.0)) {
        // Nowhere else to go; stay put.
        return current.empty() ? p.attention_weights.begin()->first : current;
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double r = u(rng);
    for (const auto& [name, w] : p.attention_weights) {
        if (name == current || !(w > 0.0)) {
            continue;
        }
        if (r < w) {
            return name;
        }
        r -= w;
    }
    return p.attention_weights.rbegin()->first;
}

// Applies the per-week linear drift to a copy of the agent parameters.
AgentParams
apply_week(const AgentParams& base, int week_index) {
    AgentParams p = base;
    double w = static_cast<double>(week_index - 1);
    for (const auto& [target, shift] : base.week_effect.dwell_log_shift) {
        p.dwell_log_mean[target] += shift * w;
    }
    p.follow_probability = clamp01(p.follow_probability +
                                   base.week_effect.follow_probability_shift * w);
    p.off_task_rate_per_min =
        std::max(0.0, p.off_task_rate_per_min + base.week_effect.off_task_rate_shift * w);
    return p;
}

struct AgentBuild {
    std::vector<Seg> segs;  // final merged timeline, frame units
    std::vector<std::pair<std::size_t, std::int64_t>> responses;  // cue index -> frame
};

AgentBuild
build_agent_timeline(std::mt19937_64& rng, const AgentParams& p,
                     const std::vector<Transition>& transitions, bool is_child,
                     std::int64_t n_frames, double frame_rate) {
    std::vector<Forced> forced;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> z(0.0, 1.0);

    std::vector<std::pair<std::size_t, std::int64_t>> responses;
    for (std::size_t ci = 0; ci < transitions.size(); ++ci) {
        const Transition& tr = transitions[ci];
        if (unit(rng) >= p.follow_probability) {
            continue;
        }
        double latency = p.follow_latency_mean + p.follow_latency_sigma * z(rng);
        auto lat_frames = static_cast<std::int64_t>(std::llround(latency * frame_rate));
        lat_frames = std::max<std::int64_t>(1, lat_frames);
        std::int64_t at = tr.frame + lat_frames;
        if (at >= n_frames) {
            continue;
        }
        const StateDef& st = kStates[tr.state];
        Forced f;
        f.frame = at;
        f.target = is_child ? st.child_response : st.caregiver_response;
        f.is_cue = true;
        f.cue_index = ci;
        forced.push_back(std::move(f));
        responses.emplace_back(ci, at);
    }

    if (p.off_task_rate_per_min > 0.0) {
        std::exponential_distribution<double> gap(p.off_task_rate_per_min / 60.0);
        double t = gap(rng);
        while (t * frame_rate < static_cast<double>(n_frames)) {
            auto frame = static_cast<std::int64_t>(std::llround(t * frame_rate));
            if (frame >= 1 && frame < n_frames) {
                Forced f;
                f.frame = frame;
                f.target = kOtherTarget;
                forced.push_back(std::move(f));
            }
            t += gap(rng);
        }
    }

    // Cue responses win over an off-task glance landing on the same frame.
    std::stable_sort(forced.begin(), forced.end(), [](const Forced& a, const Forced& b) {
        if (a.frame != b.frame) {
            return a.frame < b.frame;
        }
        return !a.is_cue && b.is_cue;
    });

    std::vector<Seg> segs;
    auto switch_to = [&segs](std::int64_t frame, const std::string& target) {
        if (!segs.empty() && segs.back().start == frame) {
            segs.back().target = target;
            return;
        }
        if (!segs.empty() && segs.back().target == target) {
            return;
        }
        segs.push_back({frame, target});
    };

    std::string current = pick_baseline(rng, p, "");
    segs.push_back({0, current});
    std::int64_t dwell_end = dwell_frames(rng, p, current, frame_rate);
    std::size_t fi = 0;
    while (true) {
        std::int64_t next_forced =
            fi < forced.size() ? forced[fi].frame : std::numeric_limits<std::int64_t>::max();
        if (dwell_end >= n_frames && next_forced >= n_frames) {
            break;
        }
        if (next_forced <= dwell_end) {
            current = forced[fi].target;
            switch_to(next_forced, current);
            dwell_end = next_forced + dwell_frames(rng, p, current, frame_rate);
            ++fi;
        } else {
            std::int64_t at = dwell_end;
            current = pick_baseline(rng, p, current);
            switch_to(at, current);
            dwell_end = at + dwell_frames(rng, p, current, frame_rate);
        }
    }

    // Merge the zero-length and duplicate-neighbor artifacts of overrides.
    std::vector<Seg> merged;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        std::int64_t end = i + 1 < segs.size() ? segs[i + 1].start : n_frames;
        if (end <= segs[i].start || segs[i].start >= n_frames) {
            continue;
        }
        if (!merged.empty() && merged.back().target == segs[i].target) {
            continue;
        }
        merged.push_back(segs[i]);
    }

    AgentBuild out;
    out.segs = std::move(merged);
    out.responses = std::move(responses);
    return out;
}

std::vector<GazeEvent>
segs_to_events(Role person, const std::vector<Seg>& segs, std::int64_t n_frames,
               double period) {
    std::vector<GazeEvent> events;
    events.reserve(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        std::int64_t end = i + 1 < segs.size() ? segs[i + 1].start : n_frames;
        GazeEvent ev;
        ev.person = person;
        ev.target = segs[i].target;
        ev.start = static_cast<double>(segs[i].start) * period;
        ev.duration = static_cast<double>(end - segs[i].start) * period;
        events.push_back(std::move(ev));
    }
    return events;
}

const std::string&
target_at(const std::vector<Seg>& segs, std::int64_t frame) {
    // Last segment with start <= frame.
    std::size_t lo = 0;
    std::size_t hi = segs.size();
    while (lo + 1 < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (segs[mid].start <= frame) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return segs[lo].target;
}

Vec3
rotate_about(const Vec3& v, const Vec3& axis_unit, double angle_rad) {
    // Rodrigues rotation; axis must be unit length.
    double c = std::cos(angle_rad);
    double s = std::sin(angle_rad);
    Vec3 kxv = axis_unit.cross(v);
    double kdv = axis_unit.dot(v);
    return v * c + kxv * s + axis_unit * (kdv * (1.0 - c));
}

// A direction from `seat` that stays far from every labeled candidate; where
// off-task gaze points. Deterministic grid search for the widest clearance.
Vec3
off_target_point(const SceneLayout& scene, Role agent) {
    const Vec3 seat = scene.seats.at(agent);
    std::vector<Vec3> cand_dirs;
    for (const auto& t : scene.targets) {
        cand_dirs.push_back((t.position - seat).normalized());
    }
    for (const auto& [role, pos] : scene.seats) {
        if (role != agent) {
            cand_dirs.push_back((pos - seat).normalized());
        }
    }
    double best_clear = -1.0;
    Vec3 best_dir{0.0, 0.0, 1.0};
    for (int iel = -80; iel <= 80; iel += 10) {
        double el = iel * kDegToRad;
        for (int iaz = 0; iaz < 360; iaz += 10) {
            double az = iaz * kDegToRad;
            Vec3 dir{std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az)};
            double clear = 1e9;
            for (const auto& cd : cand_dirs) {
                clear = std::min(clear, angle_between_deg(dir, cd));
            }
            if (clear > best_clear) {
                best_clear = clear;
                best_dir = dir;
            }
        }
    }
    if (best_clear < 2.0 * scene.cone_half_angle_deg) {
        throw InputError("scene too crowded to aim off-target gaze away from all targets");
    }
    return seat + best_dir * 2.0;
}

Vec3
resolve_target_pos(const std::string& target, const SceneLayout& scene,
                   const Vec3& other_point) {
    if (target == kOtherTarget) {
        return other_point;
    }
    const SceneTarget* st = scene.find_target(target);
    if (st != nullptr) {
        return st->position;
    }
    Role r = parse_role(target);
    auto it = scene.seats.find(r);
    if (it == scene.seats.end()) {
        throw InputError("no seat for gaze target " + target);
    }
    return it->second;
}

void
validate_agent(const AgentParams& p, const SceneLayout& scene, Role self) {
    if (p.attention_weights.empty()) {
        throw InputError("agent needs a non-empty attention mix");
    }
    for (const auto& [name, w] : p.attention_weights) {
        if (w < 0.0) {
            throw InputError("negative attention weight for " + name);
        }
        if (name == role_name(self)) {
            throw InputError("agent cannot attend to itself");
        }
        if (name != kOtherTarget && scene.find_target(name) == nullptr) {
            Role r = parse_role(name);  // throws on unknown names
            if (!scene.seats.count(r)) {
                throw InputError("attention target without a seat: " + name);
            }
        }
    }
    if (p.follow_probability < 0.0 || p.follow_probability > 1.0) {
        throw InputError("follow_probability must be in [0, 1]");
    }
    if (p.dwell_log_sigma < 0.0 || p.gaze_noise_deg < 0.0 || p.off_task_rate_per_min < 0.0) {
        throw InputError("agent parameters must be non-negative");
    }
    if (p.dropout_rate < 0.0 || p.dropout_rate >= 1.0) {
        throw InputError("dropout_rate must be in [0, 1)");
    }
}

std::vector<FrameObservation>
synthesize_frames(std::mt19937_64& rng, const AgentParams& p, const std::vector<Seg>& segs,
                  const SceneLayout& scene, Role agent, int face_index, std::int64_t n_frames,
                  double period) {
    const Vec3 seat = scene.seats.at(agent);
    const Vec3 other_point = off_target_point(scene, agent);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> phi(0.0, 2.0 * std::numbers::pi);

    std::vector<FrameObservation> frames;
    frames.reserve(static_cast<std::size_t>(n_frames));
    std::size_t seg_i = 0;
    for (std::int64_t i = 0; i < n_frames; ++i) {
        while (seg_i + 1 < segs.size() && segs[seg_i + 1].start <= i) {
            ++seg_i;
        }
        const std::string& target = segs[seg_i].target;
        Vec3 pos = resolve_target_pos(target, scene, other_point);
        Vec3 dir = (pos - seat).normalized();
        if (p.gaze_noise_deg > 0.0) {
            // Perpendicular basis for the noise axis.
            Vec3 ref = std::abs(dir.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{0.0, 1.0, 0.0};
            Vec3 e1 = dir.cross(ref).normalized();
            Vec3 e2 = dir.cross(e1);
            double a = phi(rng);
            Vec3 axis = e1 * std::cos(a) + e2 * std::sin(a);
            double theta = p.gaze_noise_deg * z(rng) * kDegToRad;
            dir = rotate_about(dir, axis, theta).normalized();
        }
        FrameObservation obs;
        obs.timestamp = static_cast<double>(i) * period;
        obs.face_index = face_index;
        obs.gaze_direction = dir;
        obs.head_position = seat;
        obs.confidence = 1.0;
        obs.valid = true;
        if (p.dropout_rate > 0.0 && unit(rng) < p.dropout_rate) {
            obs.valid = false;
            obs.confidence = 0.0;
        }
        frames.push_back(obs);
    }
    return frames;
}

}  // namespace

AgentParams
default_child_params() {
    AgentParams p;
    p.follow_probability = 0.85;
    p.follow_latency_mean = 0.8;
    p.follow_latency_sigma = 0.25;
    p.off_task_rate_per_min = 2.0;
    p.attention_weights = {{"robot", 0.32}, {"screen", 0.30}, {"caregiver", 0.14},
                           {kOtherTarget, 0.24}};
    p.dwell_log_mean = {{"robot", std::log(1.6)},
                        {"screen", std::log(2.4)},
                        {"caregiver", std::log(1.1)},
                        {kOtherTarget, std::log(1.0)}};
    p.dwell_log_sigma = 0.5;
    return p;
}

AgentParams
default_caregiver_params() {
    AgentParams p;
    p.follow_probability = 0.6;
    p.follow_latency_mean = 1.0;
    p.follow_latency_sigma = 0.3;
    p.off_task_rate_per_min = 1.0;
    p.attention_weights = {{"child", 0.42}, {"robot", 0.2}, {"screen", 0.24},
                           {kOtherTarget, 0.14}};
    p.dwell_log_mean = {{"child", std::log(2.2)},
                        {"robot", std::log(1.4)},
                        {"screen", std::log(2.0)},
                        {kOtherTarget, std::log(0.9)}};
    p.dwell_log_sigma = 0.45;
    return p;
}

SceneLayout
default_scene() {
    SceneLayout scene;
    scene.targets = {{"robot", {0.0, -0.1, 1.9}}, {"screen", {0.0, 0.35, 2.1}}};
    scene.seats = {{Role::Child, {0.35, 0.05, 1.1}}, {Role::Caregiver, {-0.4, 0.0, 1.25}}};
    scene.cone_half_angle_deg = 10.0;
    scene.frame_note = "camera origin, x right, y down, z forward";
    return scene;
}

SimResult
simulate_session(const ProtocolScript& script, const AgentParams& child,
                 const AgentParams& caregiver, const SceneLayout& scene, std::uint64_t seed,
                 bool with_frames, const ClassifyParams& classify_params) {
    scene.validate();
    if (!(script.frame_rate > 0.0) || !(script.session_length > 0.0)) {
        throw InputError("protocol needs positive frame_rate and session_length");
    }
    if (!(script.dwell_face_child > 0.0) || !(script.dwell_cue_screen > 0.0) ||
        !(script.dwell_cue_caregiver > 0.0) || script.dwell_jitter_log < 0.0) {
        throw InputError("protocol dwells must be positive");
    }
    validate_agent(child, scene, Role::Child);
    validate_agent(caregiver, scene, Role::Caregiver);

    const double fr = script.frame_rate;
    const double period = 1.0 / fr;
    const auto n_frames = static_cast<std::int64_t>(std::llround(script.session_length * fr));
    if (n_frames < 2) {
        throw InputError("session too short for the frame rate");
    }

    // Independent deterministic sub-streams so frame synthesis never
    // perturbs the event draws.
    std::mt19937_64 rng_robot(splitmix64(seed ^ 0x1));
    std::mt19937_64 rng_child(splitmix64(seed ^ 0x2));
    std::mt19937_64 rng_caregiver(splitmix64(seed ^ 0x3));
    std::mt19937_64 rng_frames_child(splitmix64(seed ^ 0x4));
    std::mt19937_64 rng_frames_caregiver(splitmix64(seed ^ 0x5));

    // Robot script timeline.
    std::vector<Seg> robot_segs;
    std::vector<Transition> transitions;
    {
        const double base_dwell[3] = {script.dwell_face_child, script.dwell_cue_screen,
                                      script.dwell_cue_caregiver};
        std::normal_distribution<double> z(0.0, 1.0);
        std::int64_t t = 0;
        int state = 0;
        while (t < n_frames) {
            double seconds = base_dwell[state];
            if (script.dwell_jitter_log > 0.0) {
                seconds *= std::exp(script.dwell_jitter_log * z(rng_robot));
            }
            auto frames = std::max<std::int64_t>(
                1, static_cast<std::int64_t>(std::llround(seconds * fr)));
            robot_segs.push_back({t, kStates[state].robot_target});
            transitions.push_back({t, state});
            t += frames;
            state = (state + 1) % 3;
        }
    }

    AgentBuild child_build =
        build_agent_timeline(rng_child, child, transitions, true, n_frames, fr);
    AgentBuild caregiver_build =
        build_agent_timeline(rng_caregiver, caregiver, transitions, false, n_frames, fr);

    SimResult result;
    result.truth.events[Role::Child] = segs_to_events(Role::Child, child_build.segs, n_frames,
                                                      period);
    result.truth.events[Role::Caregiver] =
        segs_to_events(Role::Caregiver, caregiver_build.segs, n_frames, period);
    result.truth.events[Role::Robot] = segs_to_events(Role::Robot, robot_segs, n_frames,
                                                      period);

    // Cue records, with the child's follow flag verified against the final
    // timeline (a response can be pre-empted by a later override).
    std::map<std::size_t, std::int64_t> child_resp;
    for (const auto& [ci, frame] : child_build.responses) {
        child_resp[ci] = frame;
    }
    for (std::size_t ci = 0; ci < transitions.size(); ++ci) {
        const Transition& tr = transitions[ci];
        CueRecord rec;
        rec.state = kStates[tr.state].name;
        rec.time = static_cast<double>(tr.frame) * period;
        rec.cue_target = kStates[tr.state].child_response;
        auto it = child_resp.find(ci);
        if (it != child_resp.end() &&
            target_at(child_build.segs, it->second) == rec.cue_target) {
            rec.followed = true;
            rec.response_time = static_cast<double>(it->second) * period;
        }
        result.truth.cues.push_back(std::move(rec));
    }

    result.truth.components = classify(result.truth.events, classify_params);

    if (with_frames) {
        result.frames[Role::Child] = synthesize_frames(rng_frames_child, child,
                                                       child_build.segs, scene, Role::Child, 0,
                                                       n_frames, period);
        result.frames[Role::Caregiver] =
            synthesize_frames(rng_frames_caregiver, caregiver, caregiver_build.segs, scene,
                              Role::Caregiver, 1, n_frames, period);
    }
    return result;
}

ParticipantProfile
sample_profile(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    auto draw = [&](double mean, double sd, double lo, double hi) {
        return std::clamp(mean + sd * z(rng), lo, hi);
    };
    ParticipantProfile p;
    p.ados_css = std::round(draw(7.3, 2.0, 4.0, 10.0));
    p.adir_social = std::round(draw(18.3, 6.9, 10.0, 30.0));
    p.adir_comm = std::round(draw(16.6, 4.7, 8.0, 26.0));
    p.adir_rrb = std::round(draw(3.6, 0.8, 3.0, 12.0));
    p.adir_dev = std::round(draw(3.4, 0.7, 1.0, 5.0));
    p.das_verbal = std::round(draw(91.8, 25.9, 30.0, 170.0));
    p.das_nonverbal = std::round(draw(95.2, 15.7, 30.0, 170.0));
    p.das_spatial = std::round(draw(94.2, 16.0, 30.0, 170.0));
    p.das_gca = std::round(draw(93.1, 19.6, 70.0, 170.0));
    return p;
}

Cohort
generate_cohort(const CohortSpec& spec, const SceneLayout& scene, std::uint64_t master_seed) {
    if (spec.n_participants < 1 || spec.n_weeks < 1 || spec.sessions_per_participant < 1) {
        throw InputError("cohort dimensions must be positive");
    }
    Cohort cohort;
    cohort.participants.reserve(static_cast<std::size_t>(spec.n_participants));
    const int total_days = 7 * spec.n_weeks;

    for (int pi = 0; pi < spec.n_participants; ++pi) {
        SimulatedParticipant part;
        {
            std::ostringstream os;
            os << "P" << (pi + 1 < 10 ? "0" : "") << (pi + 1);
            part.id = os.str();
        }
        const std::uint64_t pseed = derive_seed(master_seed, static_cast<std::uint64_t>(pi), 0);
        part.profile = sample_profile(splitmix64(pseed ^ 0x9e37));

        part.child_params = spec.child;
        AgentParams caregiver_params = spec.caregiver;
        if (spec.participant_jitter > 0.0) {
            std::mt19937_64 rng(splitmix64(pseed ^ 0x51f0));
            std::normal_distribution<double> z(0.0, 1.0);
            part.child_params.follow_probability =
                clamp01(part.child_params.follow_probability *
                        std::exp(spec.participant_jitter * z(rng)));
            part.child_params.off_task_rate_per_min *=
                std::exp(spec.participant_jitter * z(rng));
            caregiver_params.follow_probability = clamp01(
                caregiver_params.follow_probability * std::exp(spec.participant_jitter * z(rng)));
            caregiver_params.off_task_rate_per_min *=
                std::exp(spec.participant_jitter * z(rng));
        }

        for (int s = 1; s <= spec.sessions_per_participant; ++s) {
            int day = 1 + static_cast<int>((static_cast<long long>(s - 1) * total_days) /
                                           spec.sessions_per_participant);
            day = std::min(day, total_days);
            int week = week_of_day(day, spec.n_weeks);

            AgentParams child_s = apply_week(part.child_params, week);
            AgentParams caregiver_s = apply_week(caregiver_params, week);
            std::uint64_t sseed = derive_seed(master_seed, static_cast<std::uint64_t>(pi),
                                              static_cast<std::uint64_t>(s));

            SimulatedSession sess;
            sess.seed = sseed;
            sess.child_params = child_s;
            sess.caregiver_params = caregiver_s;
            SimResult sim = simulate_session(spec.script, child_s, caregiver_s, scene, sseed,
                                             spec.with_frames);
            sess.truth = std::move(sim.truth);

            SessionRecord rec;
            rec.participant_id = part.id;
            rec.session_index = s;
            rec.day_index = day;
            rec.week_index = week;
            rec.frame_rate = spec.script.frame_rate;
            rec.clinical = part.profile;
            for (const auto& [role, evs] : sess.truth.events) {
                rec.events.insert(rec.events.end(), evs.begin(), evs.end());
            }
            std::sort(rec.events.begin(), rec.events.end(),
                      [](const GazeEvent& a, const GazeEvent& b) {
                          if (a.person != b.person) {
                              return a.person < b.person;
                          }
                          return a.start < b.start;
                      });
            sess.record = std::move(rec);
            part.sessions.push_back(std::move(sess));
        }
        cohort.participants.push_back(std::move(part));
    }
    return cohort;
}

}  // namespace gazekit
