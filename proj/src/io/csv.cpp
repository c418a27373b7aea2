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

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>

#include "gazekit/errors.hpp"
#include "gazekit/io.hpp"

namespace gazekit::io {

namespace {

std::string
trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string>
split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

struct TableReader {
    std::string path;
    std::ifstream in;
    std::map<std::string, std::size_t> columns;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    char sep;

    TableReader(const std::string& p, char separator, const std::vector<std::string>& required)
        : path(p), in(p), sep(separator) {
        if (!in) {
            throw InputError(path + ": cannot open for reading");
        }
        std::string header;
        if (!std::getline(in, header)) {
            throw InputError(path + ": empty file, expected a header row");
        }
        ++line_no;
        auto names = split(header, sep);
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i].empty()) {
                throw InputError(path + ": header has an empty column name");
            }
            if (!columns.emplace(names[i], i).second) {
                throw InputError(path + ": duplicate column " + names[i]);
            }
        }
        for (const auto& name : required) {
            if (!columns.count(name)) {
                throw InputError(path + ": missing column " + name);
            }
        }
    }

    bool
    next_row() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) {
                continue;
            }
            fields = split(line, sep);
            if (fields.size() != columns.size()) {
                throw InputError(where() + "expected " + std::to_string(columns.size()) +
                                 " fields, got " + std::to_string(fields.size()));
            }
            return true;
        }
        return false;
    }

    std::string
    where() const {
        return path + ":" + std::to_string(line_no) + ": ";
    }

    const std::string&
    text(const std::string& column) const {
        return fields[columns.at(column)];
    }

    double
    number(const std::string& column) const {
        const std::string& s = text(column);
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::exception&) {
            throw InputError(where() + "column " + column + " is not a number: '" + s + "'");
        }
    }

    long long
    integer(const std::string& column) const {
        const std::string& s = text(column);
        try {
            std::size_t used = 0;
            long long v = std::stoll(s, &used);
            if (used != s.size()) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::exception&) {
            throw InputError(where() + "column " + column + " is not an integer: '" + s + "'");
        }
    }
};

std::ofstream
open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw InputError(path + ": cannot open for writing");
    }
    return out;
}

}  // namespace

std::string
format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<FrameObservation>
read_frames_csv(const std::string& path) {
    TableReader r(path, ',',
                  {"timestamp_s", "face_index", "gaze_dir_x", "gaze_dir_y", "gaze_dir_z",
                   "head_x", "head_y", "head_z", "confidence", "valid"});
    std::vector<FrameObservation> frames;
    while (r.next_row()) {
        FrameObservation f;
        f.timestamp = r.number("timestamp_s");
        f.face_index = static_cast<int>(r.integer("face_index"));
        f.gaze_direction = {r.number("gaze_dir_x"), r.number("gaze_dir_y"),
                            r.number("gaze_dir_z")};
        f.head_position = {r.number("head_x"), r.number("head_y"), r.number("head_z")};
        f.confidence = r.number("confidence");
        const std::string& v = r.text("valid");
        if (v == "1" || v == "true") {
            f.valid = true;
        } else if (v == "0" || v == "false") {
            f.valid = false;
        } else {
            throw InputError(r.where() + "column valid must be 0 or 1, got '" + v + "'");
        }
        frames.push_back(f);
    }
    return frames;
}

void
write_frames_csv(const std::string& path, const std::vector<FrameObservation>& frames) {
    auto out = open_out(path);
    out << "timestamp_s,face_index,gaze_dir_x,gaze_dir_y,gaze_dir_z,"
           "head_x,head_y,head_z,confidence,valid\n";
    for (const auto& f : frames) {
        out << format_double(f.timestamp) << ',' << f.face_index << ','
            << format_double(f.gaze_direction.x) << ',' << format_double(f.gaze_direction.y)
            << ',' << format_double(f.gaze_direction.z) << ','
            << format_double(f.head_position.x) << ',' << format_double(f.head_position.y)
            << ',' << format_double(f.head_position.z) << ',' << format_double(f.confidence)
            << ',' << (f.valid ? 1 : 0) << '\n';
    }
}

std::vector<GazeEvent>
read_events_csv(const std::string& path) {
    TableReader r(path, ',', {"person", "target", "start_s", "duration_s"});
    const bool has_score = r.columns.count("score") > 0;
    std::vector<GazeEvent> events;
    while (r.next_row()) {
        GazeEvent ev;
        try {
            ev.person = parse_role(r.text("person"));
        } catch (const InputError& e) {
            throw InputError(r.where() + e.what());
        }
        ev.target = r.text("target");
        if (ev.target.empty()) {
            throw InputError(r.where() + "column target is empty");
        }
        ev.start = r.number("start_s");
        ev.duration = r.number("duration_s");
        if (has_score) {
            const std::string& s = r.text("score");
            if (!s.empty()) {
                ev.score = r.number("score");
            }
        }
        events.push_back(std::move(ev));
    }
    return events;
}

void
write_events_csv(const std::string& path, const std::vector<GazeEvent>& events) {
    auto out = open_out(path);
    out << "person,target,start_s,duration_s,score\n";
    for (const auto& ev : events) {
        out << role_name(ev.person) << ',' << ev.target << ',' << format_double(ev.start)
            << ',' << format_double(ev.duration) << ',';
        if (std::isfinite(ev.score)) {
            out << format_double(ev.score);
        }
        out << '\n';
    }
}

std::vector<ComponentEvent>
read_components_csv(const std::string& path) {
    TableReader r(path, ',',
                  {"participants", "kind", "target", "start_s", "duration_s", "score"});
    std::vector<ComponentEvent> components;
    while (r.next_row()) {
        ComponentEvent ev;
        try {
            ev.kind = parse_component(r.text("kind"));
            for (const auto& part : split(r.text("participants"), '+')) {
                if (!ev.participants.insert(parse_role(part)).second) {
                    throw InputError("duplicate participant " + part);
                }
            }
        } catch (const InputError& e) {
            throw InputError(r.where() + e.what());
        }
        if (ev.participants.empty()) {
            throw InputError(r.where() + "column participants is empty");
        }
        const std::string& target = r.text("target");
        if (!target.empty()) {
            ev.target = target;
        }
        ev.start = r.number("start_s");
        ev.duration = r.number("duration_s");
        const std::string& s = r.text("score");
        if (!s.empty()) {
            ev.score = r.number("score");
        }
        components.push_back(std::move(ev));
    }
    return components;
}

void
write_components_csv(const std::string& path, const std::vector<ComponentEvent>& components) {
    auto out = open_out(path);
    out << "participants,kind,target,start_s,duration_s,score\n";
    for (const auto& ev : components) {
        bool first = true;
        for (Role role : ev.participants) {
            if (!first) {
                out << '+';
            }
            out << role_name(role);
            first = false;
        }
        out << ',' << component_name(ev.kind) << ','
            << (ev.target.has_value() ? *ev.target : std::string()) << ','
            << format_double(ev.start) << ',' << format_double(ev.duration) << ',';
        if (std::isfinite(ev.score)) {
            out << format_double(ev.score);
        }
        out << '\n';
    }
}

std::vector<SessionRecord>
read_sessions_csv(const std::string& path) {
    TableReader r(path, ',',
                  {"participant_id", "session_index", "day_index", "week_index", "frame_rate",
                   "person", "target", "start_s", "duration_s"});
    const bool has_score = r.columns.count("score") > 0;
    std::map<std::pair<std::string, int>, SessionRecord> by_key;
    std::vector<std::pair<std::string, int>> order;
    while (r.next_row()) {
        std::pair<std::string, int> key{r.text("participant_id"),
                                        static_cast<int>(r.integer("session_index"))};
        if (key.first.empty()) {
            throw InputError(r.where() + "column participant_id is empty");
        }
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            SessionRecord rec;
            rec.participant_id = key.first;
            rec.session_index = key.second;
            rec.day_index = static_cast<int>(r.integer("day_index"));
            rec.week_index = static_cast<int>(r.integer("week_index"));
            rec.frame_rate = r.number("frame_rate");
            it = by_key.emplace(key, std::move(rec)).first;
            order.push_back(key);
        }
        GazeEvent ev;
        try {
            ev.person = parse_role(r.text("person"));
        } catch (const InputError& e) {
            throw InputError(r.where() + e.what());
        }
        ev.target = r.text("target");
        if (ev.target.empty()) {
            throw InputError(r.where() + "column target is empty");
        }
        ev.start = r.number("start_s");
        ev.duration = r.number("duration_s");
        if (has_score) {
            const std::string& s = r.text("score");
            if (!s.empty()) {
                ev.score = r.number("score");
            }
        }
        it->second.events.push_back(std::move(ev));
    }
    std::vector<SessionRecord> sessions;
    sessions.reserve(order.size());
    for (const auto& key : order) {
        SessionRecord& rec = by_key.at(key);
        std::stable_sort(rec.events.begin(), rec.events.end(),
                         [](const GazeEvent& a, const GazeEvent& b) {
                             if (a.person != b.person) {
                                 return a.person < b.person;
                             }
                             return a.start < b.start;
                         });
        sessions.push_back(std::move(rec));
    }
    return sessions;
}

void
write_sessions_csv(const std::string& path, const std::vector<SessionRecord>& sessions) {
    auto out = open_out(path);
    out << "participant_id,session_index,day_index,week_index,frame_rate,"
           "person,target,start_s,duration_s,score\n";
    for (const auto& s : sessions) {
        for (const auto& ev : s.events) {
            out << s.participant_id << ',' << s.session_index << ',' << s.day_index << ','
                << s.week_index << ',' << format_double(s.frame_rate) << ','
                << role_name(ev.person) << ',' << ev.target << ',' << format_double(ev.start)
                << ',' << format_double(ev.duration) << ',';
            if (std::isfinite(ev.score)) {
                out << format_double(ev.score);
            }
            out << '\n';
        }
    }
}

std::map<std::string, ParticipantProfile>
read_profiles_csv(const std::string& path) {
    const std::vector<std::string>& names = ParticipantProfile::covariate_names();
    std::vector<std::string> required = names;
    required.insert(required.begin(), "participant_id");
    TableReader r(path, ',', required);
    std::map<std::string, ParticipantProfile> profiles;
    while (r.next_row()) {
        const std::string& pid = r.text("participant_id");
        if (pid.empty()) {
            throw InputError(r.where() + "column participant_id is empty");
        }
        ParticipantProfile p;
        p.ados_css = r.number("ados_css");
        p.adir_social = r.number("adir_social");
        p.adir_comm = r.number("adir_comm");
        p.adir_rrb = r.number("adir_rrb");
        p.adir_dev = r.number("adir_dev");
        p.das_verbal = r.number("das_verbal");
        p.das_nonverbal = r.number("das_nonverbal");
        p.das_spatial = r.number("das_spatial");
        p.das_gca = r.number("das_gca");
        try {
            p.validate();
        } catch (const InputError& e) {
            throw InputError(r.where() + e.what());
        }
        if (!profiles.emplace(pid, p).second) {
            throw InputError(r.where() + "duplicate participant_id " + pid);
        }
    }
    return profiles;
}

void
write_profiles_csv(const std::string& path,
                   const std::map<std::string, ParticipantProfile>& profiles) {
    auto out = open_out(path);
    out << "participant_id";
    for (const auto& name : ParticipantProfile::covariate_names()) {
        out << ',' << name;
    }
    out << '\n';
    for (const auto& [pid, p] : profiles) {
        out << pid;
        for (double v : p.covariates()) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

namespace {

// Annotation tiers are usually named after the person plus a suffix,
// "child_gaze" or "Caregiver Gaze". Accept a role name on its own or
// followed by a non-alphanumeric separator.
Role
role_from_tier(const std::string& tier) {
    std::string low;
    low.reserve(tier.size());
    for (char c : tier) {
        low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    for (Role role : {Role::Child, Role::Caregiver, Role::Robot}) {
        const std::string name(role_name(role));
        if (low == name) {
            return role;
        }
        if (low.size() > name.size() && low.compare(0, name.size(), name) == 0 &&
            !std::isalnum(static_cast<unsigned char>(low[name.size()]))) {
            return role;
        }
    }
    throw InputError("tier does not name a person: " + tier);
}

}  // namespace

std::vector<AnnotationEvent>
read_annotations_tsv(const std::string& path) {
    TableReader r(path, '\t', {"tier", "annotation", "start_ms", "end_ms"});
    std::vector<AnnotationEvent> spans;
    while (r.next_row()) {
        Role person = Role::Child;
        try {
            person = role_from_tier(r.text("tier"));
        } catch (const InputError& e) {
            throw InputError(r.where() + e.what());
        }
        const std::string& target = r.text("annotation");
        if (target.empty()) {
            throw InputError(r.where() + "column annotation is empty");
        }
        double start = static_cast<double>(r.integer("start_ms")) / 1000.0;
        double end = static_cast<double>(r.integer("end_ms")) / 1000.0;
        try {
            spans.push_back(quantize_annotation(person, target, start, end));
        } catch (const InputError& e) {
            throw InputError(r.where() + e.what());
        }
    }
    return spans;
}

void
write_annotations_tsv(const std::string& path, const std::vector<AnnotationEvent>& spans) {
    auto out = open_out(path);
    out << "tier\tannotation\tstart_ms\tend_ms\n";
    for (const auto& a : spans) {
        out << role_name(a.person) << '\t' << a.target << '\t'
            << static_cast<long long>(std::llround(a.start * 1000.0)) << '\t'
            << static_cast<long long>(std::llround(a.end * 1000.0)) << '\n';
    }
}

}  // namespace gazekit::io
