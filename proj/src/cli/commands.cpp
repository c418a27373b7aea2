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

#include "gazekit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "gazekit/errors.hpp"
#include "gazekit/io.hpp"
#include "gazekit/reports.hpp"
#include "gazekit/sim.hpp"
#include "gazekit/util.hpp"

namespace gazekit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void
ensure_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw InputError(out_dir + ": cannot create output directory: " + ec.message());
    }
}

/// Writes through a temp file and renames, so readers never see a partial
/// file and interrupted runs leave no truncated outputs behind.
void
write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw InputError(tmp + ": cannot open for writing");
        }
        out << content;
        if (!out) {
            throw InputError(tmp + ": write failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw InputError(path + ": cannot move output into place: " + ec.message());
    }
}

template <typename WriteFn>
void
write_atomic(const std::string& path, WriteFn&& fn) {
    const std::string tmp = path + ".tmp";
    fn(tmp);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw InputError(path + ": cannot move output into place: " + ec.message());
    }
}

std::map<Role, std::vector<GazeEvent>>
group_by_person(const std::vector<GazeEvent>& events) {
    std::map<Role, std::vector<GazeEvent>> by_person;
    for (const auto& ev : events) {
        by_person[ev.person].push_back(ev);
    }
    return by_person;
}

}  // namespace

io::RunConfig
resolve_config(const std::string& config_path, const Overrides& o) {
    io::RunConfig c =
        config_path.empty() ? io::default_config() : io::load_config(config_path);
    if (!o.scene_path.empty()) {
        c.scene = io::read_scene_json(o.scene_path);
        c.scene_path = o.scene_path;
    }
    if (o.seed) {
        c.seed = *o.seed;
    }
    if (o.jobs) {
        if (*o.jobs < 1) {
            throw InputError("--jobs must be at least 1");
        }
        c.jobs = *o.jobs;
    }
    if (o.cone_half_angle_deg) {
        c.scene.cone_half_angle_deg = *o.cone_half_angle_deg;
        c.scene.validate();
    }
    if (o.gap_tolerance) {
        c.compress.gap_tolerance = *o.gap_tolerance;
    }
    if (o.min_duration) {
        c.compress.min_duration = *o.min_duration;
    }
    if (o.min_overlap) {
        c.classify.min_overlap = *o.min_overlap;
        c.ja.min_overlap = *o.min_overlap;
    }
    if (o.latency_window) {
        c.ja.latency_window = *o.latency_window;
    }
    if (o.iou_threshold) {
        c.match.iou_threshold = *o.iou_threshold;
    }
    return c;
}

int
cmd_extract(const io::RunConfig& config, const std::map<Role, std::string>& frame_csvs,
            const std::string& out_dir) {
    if (frame_csvs.empty()) {
        throw InputError("extract: no frame streams given");
    }
    ensure_dir(out_dir);
    const std::string hash = io::config_fingerprint(config);

    std::map<Role, std::vector<FrameObservation>> streams;
    for (const auto& [role, path] : frame_csvs) {
        streams[role] = io::read_frames_csv(path);
        if (streams[role].empty()) {
            throw InputError(path + ": no frames");
        }
    }

    auto labeled = label_stream(streams, config.scene);

    json summary;
    summary["config"] = hash;
    for (const auto& [role, labels] : labeled) {
        CompressParams params = config.compress;
        if (!(params.frame_period > 0.0)) {
            params.frame_period = infer_frame_period(labels);
        }
        std::vector<GazeEvent> events = compress(role, labels, params);
        const std::string out_path =
            (fs::path(out_dir) / ("events_" + std::string(role_name(role)) + ".csv")).string();
        write_atomic(out_path, [&](const std::string& p) { io::write_events_csv(p, events); });

        double total = 0.0;
        for (const auto& ev : events) {
            total += ev.duration;
        }
        json s;
        s["frames"] = labels.size();
        s["frame_period"] = params.frame_period;
        s["events"] = events.size();
        s["events_file"] = out_path;
        s["span_seconds"] = total;
        summary["streams"][std::string(role_name(role))] = s;
        std::cout << "extract: " << role_name(role) << ": " << labels.size() << " frames -> "
                  << events.size() << " events (" << out_path << ")\n";
    }
    write_text((fs::path(out_dir) / "extract.json").string(), summary.dump(2) + "\n");
    return 0;
}

int
cmd_classify(const io::RunConfig& config, const std::string& events_csv,
             const std::string& out_dir) {
    ensure_dir(out_dir);
    const std::string hash = io::config_fingerprint(config);

    std::vector<GazeEvent> events = io::read_events_csv(events_csv);
    auto by_person = group_by_person(events);

    std::vector<ComponentEvent> components = classify(by_person, config.classify);
    JaResult ja = detect_joint_attention(by_person, config.ja);

    write_atomic((fs::path(out_dir) / "components.csv").string(),
                 [&](const std::string& p) { io::write_components_csv(p, components); });
    write_text((fs::path(out_dir) / "components.txt").string(),
               report::components_text(components, ja, hash));
    write_text((fs::path(out_dir) / "components.json").string(),
               report::components_json(components, ja, hash));

    std::cout << "classify: " << events.size() << " events -> " << components.size()
              << " components, " << ja.episodes.size() << " joint-attention episodes\n";
    return 0;
}

int
cmd_evaluate(const io::RunConfig& config, const std::string& detected_events_csv,
             const std::string& annotations_tsv, const std::string& out_dir) {
    ensure_dir(out_dir);
    const std::string hash = io::config_fingerprint(config);

    auto detected_by_person = group_by_person(io::read_events_csv(detected_events_csv));
    auto annotated_by_person = events_from_annotations(io::read_annotations_tsv(annotations_tsv));

    std::vector<EvalEvent> detected =
        to_eval(classify(detected_by_person, config.classify));
    std::vector<EvalEvent> annotated =
        to_eval(classify(annotated_by_person, config.classify));

    MetricsReport metrics = compute_metrics(detected, annotated, config.match);
    write_text((fs::path(out_dir) / "agreement.txt").string(),
               report::metrics_text(metrics, hash));
    write_text((fs::path(out_dir) / "agreement.json").string(),
               report::metrics_json(metrics, hash));

    std::cout << "evaluate: " << detected.size() << " detected vs " << annotated.size()
              << " annotated components; overall event F1 = " << metrics.overall_event.f1
              << "\n";
    return 0;
}

int
cmd_analyze(const io::RunConfig& config, const std::string& sessions_csv,
            const std::string& profiles_csv, const std::string& out_dir) {
    ensure_dir(out_dir);
    const std::string hash = io::config_fingerprint(config);

    std::vector<SessionRecord> sessions = io::read_sessions_csv(sessions_csv);
    if (!profiles_csv.empty()) {
        auto profiles = io::read_profiles_csv(profiles_csv);
        for (auto& s : sessions) {
            auto it = profiles.find(s.participant_id);
            if (it != profiles.end()) {
                s.clinical = it->second;
            }
        }
    }

    report::AnalyzeReport r = report::analyze_sessions(sessions, config.analyze);
    write_text((fs::path(out_dir) / "analysis.txt").string(), report::analyze_text(r, hash));
    write_text((fs::path(out_dir) / "analysis.json").string(), report::analyze_json(r, hash));

    std::cout << "analyze: " << r.n_sessions << " sessions, " << r.n_participants
              << " participants, " << r.n_weeks << " weeks\n";
    return 0;
}

int
cmd_simulate(const io::RunConfig& config, const std::string& out_dir) {
    ensure_dir(out_dir);
    const std::string hash = io::config_fingerprint(config);

    CohortSpec spec = config.sim;
    spec.with_frames = false;  // frames go straight to disk below
    Cohort cohort = generate_cohort(spec, config.scene, config.seed);

    std::vector<SessionRecord> sessions;
    std::map<std::string, ParticipantProfile> profiles;
    for (const auto& part : cohort.participants) {
        profiles[part.id] = part.profile;
        for (const auto& sess : part.sessions) {
            sessions.push_back(sess.record);
        }
    }
    write_atomic((fs::path(out_dir) / "sessions.csv").string(),
                 [&](const std::string& p) { io::write_sessions_csv(p, sessions); });
    write_atomic((fs::path(out_dir) / "profiles.csv").string(),
                 [&](const std::string& p) { io::write_profiles_csv(p, profiles); });
    write_atomic((fs::path(out_dir) / "scene.json").string(),
                 [&](const std::string& p) { io::write_scene_json(p, config.scene); });

    json manifest;
    manifest["config"] = hash;
    manifest["config_full"] = json::parse(io::dump_config(config));
    manifest["master_seed"] = config.seed;
    manifest["participants"] = json::array();
    for (const auto& part : cohort.participants) {
        json p;
        p["id"] = part.id;
        p["follow_probability"] = part.child_params.follow_probability;
        p["off_task_rate_per_min"] = part.child_params.off_task_rate_per_min;
        json sess = json::array();
        for (const auto& s : part.sessions) {
            json one;
            one["session_index"] = s.record.session_index;
            one["day_index"] = s.record.day_index;
            one["week_index"] = s.record.week_index;
            one["seed"] = s.seed;
            one["events"] = s.record.events.size();
            one["cues"] = s.truth.cues.size();
            int followed = 0;
            for (const auto& cue : s.truth.cues) {
                followed += cue.followed ? 1 : 0;
            }
            one["cues_followed"] = followed;
            sess.push_back(std::move(one));
        }
        p["sessions"] = std::move(sess);
        manifest["participants"].push_back(std::move(p));
    }
    // The planted trends, spelled out so recovery tests can read them back.
    manifest["planted"]["child_week_effect"] = manifest["config_full"]["sim"]["child"]["week_effect"];
    manifest["planted"]["caregiver_week_effect"] =
        manifest["config_full"]["sim"]["caregiver"]["week_effect"];
    write_text((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");

    if (config.sim.with_frames) {
        const fs::path frames_dir = fs::path(out_dir) / "frames";
        ensure_dir(frames_dir.string());
        struct Job {
            const SimulatedParticipant* part;
            const SimulatedSession* sess;
        };
        std::vector<Job> jobs;
        for (const auto& part : cohort.participants) {
            for (const auto& sess : part.sessions) {
                jobs.push_back({&part, &sess});
            }
        }
        // Sessions re-simulate independently from their stored seeds, so
        // frame synthesis parallelizes without sharing state.
        parallel_for(jobs.size(), static_cast<unsigned>(config.jobs), [&](std::size_t i) {
            const auto& [part, sess] = jobs[i];
            SimResult sim =
                simulate_session(config.sim.script, sess->child_params, sess->caregiver_params,
                                 config.scene, sess->seed, true, config.classify);
            for (const auto& [role, frames] : sim.frames) {
                std::string name = part->id + "_s" + std::to_string(sess->record.session_index) +
                                   "_" + std::string(role_name(role)) + ".csv";
                write_atomic((frames_dir / name).string(), [&](const std::string& p) {
                    io::write_frames_csv(p, frames);
                });
            }
        });
        std::cout << "simulate: wrote frame streams for " << jobs.size() << " sessions\n";
    }

    std::cout << "simulate: " << cohort.participants.size() << " participants, "
              << sessions.size() << " sessions -> " << out_dir << "\n";
    return 0;
}

}  // namespace gazekit::cli
