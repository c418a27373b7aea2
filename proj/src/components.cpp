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

#include "gazekit/components.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gazekit/errors.hpp"

namespace gazekit {

namespace {

constexpr double kTimeEps = 1e-9;
// Slack for "this event begins exactly where the previous one ends".
constexpr double kAdjacencyEps = 1e-6;

bool
object_target(const std::string& t) {
    return is_object_target(t);
}

void
check_person_list(Role person, const std::vector<GazeEvent>& events) {
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (!(events[i].duration > 0.0)) {
            throw InputError("event with non-positive duration for " +
                             std::string(role_name(person)));
        }
        if (i > 0 && events[i].start < events[i - 1].end() - kTimeEps) {
            throw UnorderedInputError("events overlap or are unsorted for " +
                                      std::string(role_name(person)));
        }
    }
}

double
min_score(double a, double b) {
    if (std::isnan(a)) {
        return b;
    }
    if (std::isnan(b)) {
        return a;
    }
    return std::min(a, b);
}

struct Overlap {
    std::size_t ia = 0;  // indices into the two filtered lists
    std::size_t ib = 0;
    double start = 0.0;
    double end = 0.0;
};

// Sweeps two sorted interval lists and reports intersections of at least
// min_len (and strictly positive length).
template <typename GetA, typename GetB>
std::vector<Overlap>
sweep_overlaps(std::size_t na, std::size_t nb, GetA geta, GetB getb, double min_len) {
    std::vector<Overlap> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < na && j < nb) {
        const GazeEvent& a = geta(i);
        const GazeEvent& b = getb(j);
        double s = std::max(a.start, b.start);
        double e = std::min(a.end(), b.end());
        if (e > s && (e - s) >= min_len) {
            out.push_back({i, j, s, e});
        }
        if (a.end() < b.end()) {
            ++i;
        } else {
            ++j;
        }
    }
    return out;
}

std::vector<std::size_t>
indices_on_target(const std::vector<GazeEvent>& events, const std::string& target) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].target == target) {
            idx.push_back(i);
        }
    }
    return idx;
}

}  // namespace

bool
is_object_target(const std::string& target) {
    return target != kNoDetection && target != kOtherTarget &&
           target != role_name(Role::Child) && target != role_name(Role::Caregiver);
}

std::string_view
component_name(ComponentKind k) {
    switch (k) {
    case ComponentKind::Individual:
        return "individual";
    case ComponentKind::Shared:
        return "shared";
    case ComponentKind::Mutual:
        return "mutual";
    case ComponentKind::NoDetection:
        return "no_detection";
    }
    throw InvariantError("unknown component kind");
}

ComponentKind
parse_component(std::string_view s) {
    if (s == "individual") {
        return ComponentKind::Individual;
    }
    if (s == "shared") {
        return ComponentKind::Shared;
    }
    if (s == "mutual") {
        return ComponentKind::Mutual;
    }
    if (s == "no_detection") {
        return ComponentKind::NoDetection;
    }
    throw InputError("unknown component kind: " + std::string(s));
}

std::vector<ComponentEvent>
classify(const std::map<Role, std::vector<GazeEvent>>& events_by_person,
         const ClassifyParams& params) {
    if (params.min_overlap < 0.0) {
        throw InputError("min_overlap must be non-negative");
    }
    for (const auto& [person, events] : events_by_person) {
        check_person_list(person, events);
    }

    std::vector<ComponentEvent> out;

    // Individual and NoDetection are per-person pass-throughs.
    for (const auto& [person, events] : events_by_person) {
        for (const auto& ev : events) {
            ComponentEvent c;
            c.participants = {person};
            c.start = ev.start;
            c.duration = ev.duration;
            c.score = ev.score;
            if (ev.target == kNoDetection) {
                c.kind = ComponentKind::NoDetection;
            } else {
                c.kind = ComponentKind::Individual;
                c.target = ev.target;
            }
            out.push_back(std::move(c));
        }
    }

    std::vector<Role> roles;
    for (const auto& [person, events] : events_by_person) {
        (void)events;
        roles.push_back(person);
    }

    // Mutual: pairwise intersections of each-looking-at-the-other.
    for (std::size_t pi = 0; pi < roles.size(); ++pi) {
        for (std::size_t qi = pi + 1; qi < roles.size(); ++qi) {
            Role p = roles[pi];
            Role q = roles[qi];
            const auto& pe = events_by_person.at(p);
            const auto& qe = events_by_person.at(q);
            auto pa = indices_on_target(pe, std::string(role_name(q)));
            auto qa = indices_on_target(qe, std::string(role_name(p)));
            auto hits = sweep_overlaps(
                pa.size(), qa.size(), [&](std::size_t i) -> const GazeEvent& { return pe[pa[i]]; },
                [&](std::size_t j) -> const GazeEvent& { return qe[qa[j]]; }, params.min_overlap);
            for (const auto& h : hits) {
                ComponentEvent c;
                c.kind = ComponentKind::Mutual;
                c.participants = {p, q};
                c.start = h.start;
                c.duration = h.end - h.start;
                c.score = min_score(pe[pa[h.ia]].score, qe[qa[h.ib]].score);
                out.push_back(std::move(c));
            }
        }
    }

    // Shared: pairwise per object target, then identical intervals merge
    // their participant sets so three-way shares become one component.
    std::map<std::tuple<std::string, double, double>, ComponentEvent> shared;
    for (std::size_t pi = 0; pi < roles.size(); ++pi) {
        for (std::size_t qi = pi + 1; qi < roles.size(); ++qi) {
            Role p = roles[pi];
            Role q = roles[qi];
            const auto& pe = events_by_person.at(p);
            const auto& qe = events_by_person.at(q);
            std::set<std::string> targets;
            for (const auto& ev : pe) {
                if (object_target(ev.target)) {
                    targets.insert(ev.target);
                }
            }
            for (const auto& t : targets) {
                auto pa = indices_on_target(pe, t);
                auto qa = indices_on_target(qe, t);
                if (qa.empty()) {
                    continue;
                }
                auto hits = sweep_overlaps(
                    pa.size(), qa.size(),
                    [&](std::size_t i) -> const GazeEvent& { return pe[pa[i]]; },
                    [&](std::size_t j) -> const GazeEvent& { return qe[qa[j]]; },
                    params.min_overlap);
                for (const auto& h : hits) {
                    double score = min_score(pe[pa[h.ia]].score, qe[qa[h.ib]].score);
                    auto key = std::make_tuple(t, h.start, h.end);
                    auto it = shared.find(key);
                    if (it == shared.end()) {
                        ComponentEvent c;
                        c.kind = ComponentKind::Shared;
                        c.participants = {p, q};
                        c.target = t;
                        c.start = h.start;
                        c.duration = h.end - h.start;
                        c.score = score;
                        shared.emplace(key, std::move(c));
                    } else {
                        it->second.participants.insert(p);
                        it->second.participants.insert(q);
                        it->second.score = min_score(it->second.score, score);
                    }
                }
            }
        }
    }
    for (auto& [key, c] : shared) {
        (void)key;
        out.push_back(std::move(c));
    }

    std::sort(out.begin(), out.end(), [](const ComponentEvent& a, const ComponentEvent& b) {
        if (a.start != b.start) {
            return a.start < b.start;
        }
        if (a.kind != b.kind) {
            return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        }
        if (a.participants != b.participants) {
            return a.participants < b.participants;
        }
        return a.target.value_or("") < b.target.value_or("");
    });
    return out;
}

namespace {

struct Shift {
    bool valid = false;
    double time = 0.0;            // when the person left the partner
    const GazeEvent* next = nullptr;  // the object event they moved to
};

// A shift out of a mutual span exists when the contributing event ends the
// span (ends at mutual end) and the person's next event starts right there
// on an object target.
Shift
shift_of(const std::vector<GazeEvent>& events, std::size_t contributing_idx, double mutual_end) {
    Shift s;
    const GazeEvent& cur = events[contributing_idx];
    if (std::abs(cur.end() - mutual_end) > kTimeEps) {
        return s;
    }
    if (contributing_idx + 1 >= events.size()) {
        return s;
    }
    const GazeEvent& next = events[contributing_idx + 1];
    if (std::abs(next.start - cur.end()) > kAdjacencyEps) {
        return s;
    }
    if (!object_target(next.target)) {
        return s;
    }
    s.valid = true;
    s.time = cur.end();
    s.next = &next;
    return s;
}

const GazeEvent*
first_arrival(const std::vector<GazeEvent>& events, const std::string& target, double from,
              double until, double leader_leaves) {
    for (const auto& ev : events) {
        if (ev.start > until + kTimeEps) {
            break;
        }
        if (ev.target != target) {
            continue;
        }
        if (ev.start >= from - kTimeEps && ev.start < leader_leaves - kTimeEps) {
            return &ev;
        }
    }
    return nullptr;
}

}  // namespace

JaResult
detect_joint_attention(const std::map<Role, std::vector<GazeEvent>>& events_by_person,
                       const JaParams& params) {
    if (params.latency_window < 0.0) {
        throw InputError("latency_window must be non-negative");
    }
    for (const auto& [person, events] : events_by_person) {
        check_person_list(person, events);
    }

    JaResult result;
    std::vector<Role> roles;
    for (const auto& [person, events] : events_by_person) {
        (void)events;
        roles.push_back(person);
    }

    for (std::size_t pi = 0; pi < roles.size(); ++pi) {
        for (std::size_t qi = pi + 1; qi < roles.size(); ++qi) {
            Role p = roles[pi];
            Role q = roles[qi];
            const auto& pe = events_by_person.at(p);
            const auto& qe = events_by_person.at(q);
            auto pa = indices_on_target(pe, std::string(role_name(q)));
            auto qa = indices_on_target(qe, std::string(role_name(p)));
            auto mutuals = sweep_overlaps(
                pa.size(), qa.size(), [&](std::size_t i) -> const GazeEvent& { return pe[pa[i]]; },
                [&](std::size_t j) -> const GazeEvent& { return qe[qa[j]]; }, params.min_overlap);

            for (const auto& m : mutuals) {
                Shift sp = shift_of(pe, pa[m.ia], m.end);
                Shift sq = shift_of(qe, qa[m.ib], m.end);
                if (sp.valid && sq.valid) {
                    // Both broke the mutual span at the same instant.
                    result.suppressed_ties += 1;
                    continue;
                }
                if (!sp.valid && !sq.valid) {
                    continue;
                }
                Role leader = sp.valid ? p : q;
                Role follower = sp.valid ? q : p;
                const Shift& shift = sp.valid ? sp : sq;
                const auto& fe = events_by_person.at(follower);
                const GazeEvent* arrival =
                    first_arrival(fe, shift.next->target, shift.time,
                                  shift.time + params.latency_window, shift.next->end());
                if (arrival == nullptr) {
                    continue;
                }
                double shared_end = std::min(shift.next->end(), arrival->end());
                double shared_len = shared_end - arrival->start;
                if (shared_len < params.min_overlap || shared_len <= 0.0) {
                    continue;
                }
                JointAttentionEpisode ep;
                ep.leader = leader;
                ep.follower = follower;
                ep.mutual_start = m.start;
                ep.mutual_duration = m.end - m.start;
                ep.target = shift.next->target;
                ep.follow_latency = std::max(0.0, arrival->start - shift.time);
                ep.shared_start = arrival->start;
                ep.shared_duration = shared_len;
                result.episodes.push_back(std::move(ep));
            }
        }
    }

    std::sort(result.episodes.begin(), result.episodes.end(),
              [](const JointAttentionEpisode& a, const JointAttentionEpisode& b) {
                  if (a.mutual_start != b.mutual_start) {
                      return a.mutual_start < b.mutual_start;
                  }
                  if (a.shared_start != b.shared_start) {
                      return a.shared_start < b.shared_start;
                  }
                  return a.leader < b.leader;
              });
    return result;
}

int
gaze_following_count(const std::map<Role, std::vector<GazeEvent>>& events_by_person,
                     Role cue_source, Role cue_target, const JaParams& params) {
    if (cue_source == cue_target) {
        throw InputError("cue_source and cue_target must differ");
    }
    for (const auto& [person, events] : events_by_person) {
        check_person_list(person, events);
    }
    auto src_it = events_by_person.find(cue_source);
    if (src_it == events_by_person.end()) {
        return 0;
    }
    const std::string target_name(role_name(cue_target));

    int count = 0;
    for (const auto& [subject, se] : events_by_person) {
        if (subject == cue_source || subject == cue_target) {
            continue;
        }
        auto sa = indices_on_target(se, std::string(role_name(cue_source)));
        auto ca = indices_on_target(src_it->second, std::string(role_name(subject)));
        auto mutuals = sweep_overlaps(
            sa.size(), ca.size(), [&](std::size_t i) -> const GazeEvent& { return se[sa[i]]; },
            [&](std::size_t j) -> const GazeEvent& { return src_it->second[ca[j]]; },
            params.min_overlap);
        for (const auto& m : mutuals) {
            for (const auto& ev : se) {
                if (ev.start > m.end + params.latency_window + kTimeEps) {
                    break;
                }
                if (ev.target == target_name && ev.start >= m.end - kTimeEps) {
                    count += 1;
                    break;
                }
            }
        }
    }
    return count;
}

}  // namespace gazekit
