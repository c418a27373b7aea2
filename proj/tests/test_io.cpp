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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "gazekit/config.hpp"
#include "gazekit/errors.hpp"
#include "gazekit/io.hpp"
#include "gazekit/sim.hpp"

using namespace gazekit;
namespace fs = std::filesystem;

namespace {

/// Self-cleaning scratch directory for reader/writer tests.
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path()
               / ("gazekit_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void
write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string
read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("frame csv round-trips bit-exact doubles") {
    TempDir tmp;
    std::vector<FrameObservation> frames;
    std::mt19937_64 rng(0x10);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        FrameObservation f;
        f.timestamp = i / 30.0 + u(rng) * 1e-9;
        f.face_index = i % 3;
        f.gaze_direction = {u(rng), u(rng), u(rng)};
        f.head_position = {u(rng), u(rng), u(rng)};
        f.confidence = std::abs(u(rng));
        f.valid = i % 7 != 0;
        frames.push_back(f);
    }
    auto path = tmp.file("frames.csv");
    io::write_frames_csv(path, frames);
    auto back = io::read_frames_csv(path);
    REQUIRE(back.size() == frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        CHECK(back[i].timestamp == frames[i].timestamp);
        CHECK(back[i].face_index == frames[i].face_index);
        CHECK(back[i].gaze_direction.x == frames[i].gaze_direction.x);
        CHECK(back[i].gaze_direction.y == frames[i].gaze_direction.y);
        CHECK(back[i].gaze_direction.z == frames[i].gaze_direction.z);
        CHECK(back[i].head_position.x == frames[i].head_position.x);
        CHECK(back[i].confidence == frames[i].confidence);
        CHECK(back[i].valid == frames[i].valid);
    }

    // Equal input, equal bytes.
    auto path2 = tmp.file("frames2.csv");
    io::write_frames_csv(path2, frames);
    CHECK(read_text(path) == read_text(path2));
}

TEST_CASE("frame csv accepts shuffled headers and ignores extras") {
    TempDir tmp;
    auto path = tmp.file("frames.csv");
    write_text(path,
               "valid,confidence,head_z,head_y,head_x,gaze_dir_z,gaze_dir_y,gaze_dir_x,"
               "face_index,timestamp_s,extra_junk\n"
               "1,0.9,1.0,0.1,0.2,0.7,0.1,0.7,0,0.033,ignored\n");
    auto frames = io::read_frames_csv(path);
    REQUIRE(frames.size() == 1);
    CHECK(frames[0].timestamp == doctest::Approx(0.033));
    CHECK(frames[0].valid);
    CHECK(frames[0].gaze_direction.z == doctest::Approx(0.7));
}

TEST_CASE("frame csv reports the offending path and line") {
    TempDir tmp;
    auto path = tmp.file("bad.csv");
    write_text(path,
               "timestamp_s,face_index,gaze_dir_x,gaze_dir_y,gaze_dir_z,head_x,head_y,"
               "head_z,confidence,valid\n"
               "0.0,0,0,0,1,0,0,0,0.9,1\n"
               "0.033,0,0,0,oops,0,0,0,0.9,1\n");
    CHECK_THROWS_WITH_AS(io::read_frames_csv(path), doctest::Contains(":3:"), InputError);
    CHECK_THROWS_AS(io::read_frames_csv(tmp.file("missing.csv")), InputError);

    auto short_path = tmp.file("short.csv");
    write_text(short_path, "timestamp_s,face_index\n0.0,0\n");
    CHECK_THROWS_WITH_AS(io::read_frames_csv(short_path), doctest::Contains("gaze_dir_x"),
                         InputError);
}

TEST_CASE("event csv round-trips and the score column is optional") {
    TempDir tmp;
    std::vector<GazeEvent> events;
    GazeEvent e;
    e.person = Role::Child;
    e.target = "robot";
    e.start = 0.1;
    e.duration = 1.9;
    e.score = 7.25;
    events.push_back(e);
    e.person = Role::Caregiver;
    e.target = kNoDetection;
    e.start = 2.0;
    e.duration = 0.5;
    e.score = std::numeric_limits<double>::quiet_NaN();
    events.push_back(e);

    auto path = tmp.file("events.csv");
    io::write_events_csv(path, events);
    auto back = io::read_events_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].person == Role::Child);
    CHECK(back[0].target == "robot");
    CHECK(back[0].start == 0.1);
    CHECK(back[0].duration == 1.9);
    CHECK(back[0].score == 7.25);
    CHECK(back[1].target == kNoDetection);
    CHECK(std::isnan(back[1].score));

    auto bare = tmp.file("bare.csv");
    write_text(bare, "person,target,start_s,duration_s\nchild,robot,0.5,1.5\n");
    auto parsed = io::read_events_csv(bare);
    REQUIRE(parsed.size() == 1);
    CHECK(std::isnan(parsed[0].score));

    auto bad = tmp.file("bad.csv");
    write_text(bad, "person,target,start_s,duration_s\ngrandparent,robot,0.5,1.5\n");
    CHECK_THROWS_WITH_AS(io::read_events_csv(bad), doctest::Contains("grandparent"),
                         InputError);
}

TEST_CASE("component csv carries participant sets and optional targets") {
    TempDir tmp;
    std::vector<ComponentEvent> comps;
    ComponentEvent c;
    c.kind = ComponentKind::Mutual;
    c.participants = {Role::Child, Role::Caregiver};
    c.start = 1.0;
    c.duration = 0.75;
    c.score = 3.5;
    comps.push_back(c);
    c.kind = ComponentKind::Shared;
    c.target = "robot";
    c.start = 2.0;
    comps.push_back(c);
    c.kind = ComponentKind::Individual;
    c.participants = {Role::Child};
    c.target = "screen";
    c.start = 4.0;
    comps.push_back(c);

    auto path = tmp.file("components.csv");
    io::write_components_csv(path, comps);
    auto back = io::read_components_csv(path);
    REQUIRE(back.size() == 3);
    CHECK(back[0].kind == ComponentKind::Mutual);
    CHECK(back[0].participants == std::set<Role>{Role::Child, Role::Caregiver});
    CHECK_FALSE(back[0].target.has_value());
    CHECK(back[1].target == std::optional<std::string>("robot"));
    CHECK(back[2].participants == std::set<Role>{Role::Child});
}

TEST_CASE("session csv groups rows back into records") {
    TempDir tmp;
    std::vector<SessionRecord> sessions;
    std::mt19937_64 rng(0x5e55);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int p = 0; p < 2; ++p) {
        for (int s = 1; s <= 2; ++s) {
            SessionRecord rec;
            rec.participant_id = p == 0 ? "P01" : "P02";
            rec.session_index = s;
            rec.day_index = 1 + (s - 1) * 9;
            rec.week_index = week_of_day(rec.day_index);
            double t = 0.0;
            for (int i = 0; i < 8; ++i) {
                GazeEvent e;
                e.person = i % 2 == 0 ? Role::Child : Role::Caregiver;
                e.target = i % 3 == 0 ? "robot" : "screen";
                e.start = t;
                e.duration = u(rng);
                t += e.duration;
                rec.events.push_back(e);
            }
            std::sort(rec.events.begin(), rec.events.end(),
                      [](const GazeEvent& a, const GazeEvent& b) {
                          return std::tie(a.person, a.start) < std::tie(b.person, b.start);
                      });
            sessions.push_back(std::move(rec));
        }
    }

    auto path = tmp.file("sessions.csv");
    io::write_sessions_csv(path, sessions);
    auto back = io::read_sessions_csv(path);
    REQUIRE(back.size() == sessions.size());
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        CHECK(back[i].participant_id == sessions[i].participant_id);
        CHECK(back[i].session_index == sessions[i].session_index);
        CHECK(back[i].day_index == sessions[i].day_index);
        CHECK(back[i].week_index == sessions[i].week_index);
        CHECK(events_equal(back[i].events, sessions[i].events, 0.0));
    }
}

TEST_CASE("profile csv round-trips the covariate table") {
    TempDir tmp;
    std::map<std::string, ParticipantProfile> profiles;
    profiles["P01"] = sample_profile(1);
    profiles["P02"] = sample_profile(2);
    auto path = tmp.file("profiles.csv");
    io::write_profiles_csv(path, profiles);
    auto back = io::read_profiles_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back.at("P01").covariates() == profiles.at("P01").covariates());
    CHECK(back.at("P02").covariates() == profiles.at("P02").covariates());

    auto bad = tmp.file("bad.csv");
    write_text(bad, "participant_id,ados_css\nP01,5\n");
    CHECK_THROWS_AS(io::read_profiles_csv(bad), InputError);
}

TEST_CASE("scene json round-trips and rejects unknown keys") {
    TempDir tmp;
    auto scene = default_scene();
    auto path = tmp.file("scene.json");
    io::write_scene_json(path, scene);
    auto back = io::read_scene_json(path);
    CHECK(back.cone_half_angle_deg == scene.cone_half_angle_deg);
    REQUIRE(back.targets.size() == scene.targets.size());
    for (std::size_t i = 0; i < scene.targets.size(); ++i) {
        CHECK(back.targets[i].name == scene.targets[i].name);
        CHECK(back.targets[i].position.x == scene.targets[i].position.x);
    }
    CHECK(back.seats.size() == scene.seats.size());

    auto bad = tmp.file("bad.json");
    write_text(bad, R"({"targets": [], "cone_half_angle_deg": 10, "surprise": 1})");
    CHECK_THROWS_WITH_AS(io::read_scene_json(bad), doctest::Contains("surprise"), InputError);

    auto broken = tmp.file("broken.json");
    write_text(broken, "{ not json");
    CHECK_THROWS_AS(io::read_scene_json(broken), InputError);
}

TEST_CASE("annotation tsv converts milliseconds and quantizes on read") {
    TempDir tmp;
    auto path = tmp.file("ann.tsv");
    write_text(path,
               "tier\tannotation\tstart_ms\tend_ms\n"
               "child_gaze\trobot\t1300\t2100\n"
               "Caregiver Gaze\tchild\t0\t250\n");
    auto spans = io::read_annotations_tsv(path);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].person == Role::Child);
    CHECK(spans[0].target == "robot");
    CHECK(spans[0].start == doctest::Approx(1.25));
    CHECK(spans[0].end == doctest::Approx(2.25));
    CHECK(spans[1].person == Role::Caregiver);
    CHECK(spans[1].end == doctest::Approx(0.25));

    // Quantized spans survive a write/read cycle unchanged.
    auto out = tmp.file("out.tsv");
    io::write_annotations_tsv(out, spans);
    auto again = io::read_annotations_tsv(out);
    REQUIRE(again.size() == 2);
    CHECK(again[0].start == spans[0].start);
    CHECK(again[0].end == spans[0].end);

    auto headerless = tmp.file("headerless.tsv");
    write_text(headerless, "child\trobot\t0\t500\n");
    CHECK_THROWS_AS(io::read_annotations_tsv(headerless), InputError);

    auto badtier = tmp.file("badtier.tsv");
    write_text(badtier,
               "tier\tannotation\tstart_ms\tend_ms\n"
               "children\trobot\t0\t500\n");
    CHECK_THROWS_WITH_AS(io::read_annotations_tsv(badtier), doctest::Contains("children"),
                         InputError);
}

TEST_CASE("config dump is canonical and fingerprints are stable") {
    auto config = io::default_config();
    auto dump1 = io::dump_config(config);
    auto dump2 = io::dump_config(config);
    CHECK(dump1 == dump2);
    auto fp = io::config_fingerprint(config);
    CHECK(fp.size() == 16);
    CHECK(fp.find_first_not_of("0123456789abcdef") == std::string::npos);

    // Loading the dump back reproduces the identical fingerprint.
    TempDir tmp;
    auto path = tmp.file("config.json");
    write_text(path, dump1);
    auto loaded = io::load_config(path);
    CHECK(io::config_fingerprint(loaded) == fp);

    // A changed knob changes the fingerprint.
    config.classify.min_overlap = 0.4;
    CHECK(io::config_fingerprint(config) != fp);
}

TEST_CASE("config files may be partial but never misspelled") {
    TempDir tmp;
    auto path = tmp.file("partial.json");
    write_text(path, R"({"classify": {"min_overlap": 0.4}, "seed": 7})");
    auto config = io::load_config(path);
    CHECK(config.classify.min_overlap == 0.4);
    CHECK(config.seed == 7);
    // Everything else keeps its default.
    auto defaults = io::default_config();
    CHECK(config.compress.gap_tolerance == defaults.compress.gap_tolerance);
    CHECK(config.ja.latency_window == defaults.ja.latency_window);

    auto typo = tmp.file("typo.json");
    write_text(typo, R"({"clasify": {"min_overlap": 0.4}})");
    CHECK_THROWS_WITH_AS(io::load_config(typo), doctest::Contains("clasify"), InputError);

    auto nested_typo = tmp.file("nested.json");
    write_text(nested_typo, R"({"compress": {"gap_tolerence": 0.1}})");
    CHECK_THROWS_AS(io::load_config(nested_typo), InputError);
}

TEST_CASE("format_double survives a parse round trip") {
    for (double v : {0.1, 1.0 / 3.0, 12345.6789, 1e-300, -7.25}) {
        auto s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(io::format_double(1.5) == "1.5");
}
