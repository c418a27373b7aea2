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

#include "gazekit/events.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gazekit/errors.hpp"

namespace gazekit {

void
ParticipantProfile::validate() const {
    struct Check {
        const char* name;
        double value;
        double floor;
    };
    const Check checks[] = {
        {"ados_css", ados_css, kAdosMin},
        {"adir_social", adir_social, kAdirSocialMin},
        {"adir_comm", adir_comm, kAdirCommMin},
        {"adir_rrb", adir_rrb, kAdirRrbMin},
        {"adir_dev", adir_dev, kAdirDevMin},
        {"das_verbal", das_verbal, 0.0},
        {"das_nonverbal", das_nonverbal, 0.0},
        {"das_spatial", das_spatial, 0.0},
        {"das_gca", das_gca, kDasGcaMin},
    };
    for (const auto& c : checks) {
        if (!std::isfinite(c.value)) {
            throw InputError(std::string("clinical score not finite: ") + c.name);
        }
        if (c.value < c.floor) {
            std::ostringstream os;
            os << "clinical score below instrument floor: " << c.name << " = " << c.value
               << " < " << c.floor;
            throw InputError(os.str());
        }
    }
}

namespace {

// Working segment: a half-open span with one label and the margin stats of
// its contributing frames. Segments always tile time contiguously.
struct Segment {
    std::optional<std::string> label;
    double start = 0.0;
    double end = 0.0;
    double margin_sum = 0.0;
    std::size_t margin_n = 0;
};

void
merge_into(Segment& dst, const Segment& src) {
    dst.end = src.end;
    dst.margin_sum += src.margin_sum;
    dst.margin_n += src.margin_n;
}

double
segment_score(const Segment& s) {
    if (s.margin_n == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return s.margin_sum / static_cast<double>(s.margin_n);
}

}  // namespace

std::vector<GazeEvent>
compress(Role person, const std::vector<LabeledFrame>& labels, const CompressParams& params) {
    if (!(params.frame_period > 0.0) || !std::isfinite(params.frame_period)) {
        throw InputError("frame_period must be positive");
    }
    if (params.gap_tolerance < 0.0 || params.min_duration < 0.0) {
        throw InputError("gap_tolerance and min_duration must be non-negative");
    }
    std::vector<GazeEvent> out;
    if (labels.empty()) {
        return out;
    }
    const double period = params.frame_period;

    // Run-length encode. A frame covers the span up to the next frame when
    // the step is at most 1.5 periods (clock jitter); longer steps become
    // explicit target-less holes. The segments therefore tile
    // [first, last + period) exactly for any monotone clock.
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& f = labels[i];
        if (!std::isfinite(f.timestamp)) {
            throw InputError("labeled frame with non-finite timestamp");
        }
        if (i > 0) {
            double dt = f.timestamp - labels[i - 1].timestamp;
            if (dt < 0.0) {
                std::ostringstream os;
                os << "labeled frames step backwards at row " << i;
                throw UnorderedInputError(os.str());
            }
            if (dt == 0.0) {
                if (segs.back().label != f.target) {
                    throw InputError("conflicting labels at one timestamp");
                }
                if (std::isfinite(f.margin_deg)) {
                    segs.back().margin_sum += f.margin_deg;
                    segs.back().margin_n += 1;
                }
                continue;
            }
            if (dt > 1.5 * period) {
                if (!segs.back().label.has_value()) {
                    segs.back().end = f.timestamp;
                } else {
                    Segment hole;
                    hole.label = std::nullopt;
                    hole.start = labels[i - 1].timestamp + period;
                    hole.end = f.timestamp;
                    segs.push_back(hole);
                }
            } else {
                segs.back().end = f.timestamp;
            }
        }
        if (!segs.empty() && segs.back().label == f.target &&
            f.timestamp <= segs.back().end + 1e-9) {
            Segment& run = segs.back();
            run.end = f.timestamp + period;
            if (std::isfinite(f.margin_deg)) {
                run.margin_sum += f.margin_deg;
                run.margin_n += 1;
            }
        } else {
            Segment run;
            run.label = f.target;
            run.start = f.timestamp;
            run.end = f.timestamp + period;
            if (std::isfinite(f.margin_deg)) {
                run.margin_sum += f.margin_deg;
                run.margin_n += 1;
            }
            segs.push_back(run);
        }
    }

    // Absorb short target-less flicker sandwiched between runs on the same
    // target. A single left-to-right stack pass is enough: absorption only
    // ever merges a triple into a longer run of the outer target.
    std::vector<Segment> absorbed;
    for (const auto& seg : segs) {
        if (absorbed.size() >= 2 && seg.label.has_value()) {
            Segment& gap = absorbed[absorbed.size() - 1];
            Segment& left = absorbed[absorbed.size() - 2];
            if (!gap.label.has_value() && (gap.end - gap.start) <= params.gap_tolerance &&
                left.label == seg.label) {
                merge_into(left, gap);
                merge_into(left, seg);
                absorbed.pop_back();
                continue;
            }
        }
        if (!absorbed.empty() && absorbed.back().label == seg.label) {
            merge_into(absorbed.back(), seg);
        } else {
            absorbed.push_back(seg);
        }
    }

    // Target-less spans become no_detection; real events below min_duration
    // are demoted to no_detection as well, then equal neighbors merge.
    std::vector<Segment> final_segs;
    for (auto& seg : absorbed) {
        std::string label = seg.label.value_or(kNoDetection);
        if (label != kNoDetection && (seg.end - seg.start) < params.min_duration) {
            label = kNoDetection;
            seg.margin_sum = 0.0;
            seg.margin_n = 0;
        }
        seg.label = label;
        if (!final_segs.empty() && final_segs.back().label == seg.label) {
            merge_into(final_segs.back(), seg);
        } else {
            final_segs.push_back(seg);
        }
    }

    out.reserve(final_segs.size());
    for (const auto& seg : final_segs) {
        GazeEvent ev;
        ev.person = person;
        ev.target = *seg.label;
        ev.start = seg.start;
        ev.duration = seg.end - seg.start;
        ev.score = segment_score(seg);
        out.push_back(std::move(ev));
    }
    return out;
}

std::vector<LabeledFrame>
expand(const std::vector<GazeEvent>& events, double frame_rate) {
    if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
        throw InputError("frame_rate must be positive");
    }
    const double period = 1.0 / frame_rate;
    std::vector<LabeledFrame> out;
    for (std::size_t e = 0; e < events.size(); ++e) {
        const auto& ev = events[e];
        if (ev.duration <= 0.0) {
            throw InputError("expand requires positive event durations");
        }
        if (e > 0 && ev.start < events[e - 1].end() - 1e-9) {
            throw UnorderedInputError("events overlap or step backwards in expand");
        }
        auto n = static_cast<std::size_t>(std::llround(ev.duration * frame_rate));
        if (n == 0) {
            n = 1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            LabeledFrame f;
            f.timestamp = ev.start + static_cast<double>(i) * period;
            if (ev.target != kNoDetection) {
                f.target = ev.target;
                f.margin_deg = ev.score;
            }
            out.push_back(f);
        }
    }
    return out;
}

double
infer_frame_period(const std::vector<LabeledFrame>& labels) {
    std::vector<double> steps;
    for (std::size_t i = 1; i < labels.size(); ++i) {
        double dt = labels[i].timestamp - labels[i - 1].timestamp;
        if (dt > 0.0) {
            steps.push_back(dt);
        }
    }
    if (steps.empty()) {
        throw DegenerateSampleError("cannot infer a frame period without timestamp steps");
    }
    auto mid = steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2);
    std::nth_element(steps.begin(), mid, steps.end());
    return *mid;
}

bool
events_equal(const std::vector<GazeEvent>& a, const std::vector<GazeEvent>& b, double tol) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].person != b[i].person || a[i].target != b[i].target) {
            return false;
        }
        if (std::abs(a[i].start - b[i].start) > tol ||
            std::abs(a[i].duration - b[i].duration) > tol) {
            return false;
        }
    }
    return true;
}

int
week_of_day(int day_index, int n_weeks) {
    if (day_index < 1) {
        throw InputError("day_index must be 1-based");
    }
    if (n_weeks < 1) {
        throw InputError("n_weeks must be positive");
    }
    int week = (day_index - 1) / 7 + 1;
    return std::min(week, n_weeks);
}

std::vector<WeeklyAggregate>
aggregate_weekly(const std::vector<SessionRecord>& sessions, Role person,
                 const std::string& target) {
    int max_week = 0;
    for (const auto& s : sessions) {
        if (s.week_index < 1) {
            throw InputError("session with week_index < 1");
        }
        max_week = std::max(max_week, s.week_index);
    }
    std::vector<WeeklyAggregate> out;
    if (max_week == 0) {
        return out;
    }

    struct Bucket {
        int n_sessions = 0;
        std::vector<int> per_session_counts;
        std::vector<double> durations;
    };
    std::vector<Bucket> buckets(static_cast<std::size_t>(max_week));
    for (const auto& s : sessions) {
        Bucket& b = buckets[static_cast<std::size_t>(s.week_index - 1)];
        b.n_sessions += 1;
        int count = 0;
        for (const auto& ev : s.events) {
            if (ev.person == person && ev.target == target) {
                count += 1;
                b.durations.push_back(ev.duration);
            }
        }
        b.per_session_counts.push_back(count);
    }

    for (int w = 1; w <= max_week; ++w) {
        const Bucket& b = buckets[static_cast<std::size_t>(w - 1)];
        WeeklyAggregate agg;
        agg.week = w;
        agg.n_sessions = b.n_sessions;
        agg.n_events = static_cast<int>(b.durations.size());
        if (b.n_sessions > 0) {
            double total = 0.0;
            for (int c : b.per_session_counts) {
                total += c;
            }
            agg.mean_instances = total / static_cast<double>(b.n_sessions);
        }
        if (!b.durations.empty()) {
            double sum = 0.0;
            for (double d : b.durations) {
                sum += d;
            }
            agg.mean_duration = sum / static_cast<double>(b.durations.size());
        }
        if (b.durations.size() >= 2) {
            double log_mean = 0.0;
            for (double d : b.durations) {
                if (!(d > 0.0)) {
                    throw InputError("non-positive duration cannot be log transformed");
                }
                log_mean += std::log(d);
            }
            log_mean /= static_cast<double>(b.durations.size());
            double ss = 0.0;
            for (double d : b.durations) {
                double dev = std::log(d) - log_mean;
                ss += dev * dev;
            }
            agg.var_log_duration = ss / static_cast<double>(b.durations.size() - 1);
        }
        out.push_back(agg);
    }
    return out;
}

}  // namespace gazekit
