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

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "gazekit/config.hpp"
#include "gazekit/geometry.hpp"

namespace gazekit::cli {

/// Command-line overrides layered on top of the config file. Only set
/// values are applied, so the config file stays the single source of
/// defaults.
struct Overrides {
    std::string scene_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<double> cone_half_angle_deg;
    std::optional<double> gap_tolerance;
    std::optional<double> min_duration;
    std::optional<double> min_overlap;  // classify and joint attention both
    std::optional<double> latency_window;
    std::optional<double> iou_threshold;
};

/// Loads `config_path` (or the built-in defaults when empty) and applies
/// the overrides. The result is what reports fingerprint.
io::RunConfig
resolve_config(const std::string& config_path, const Overrides& overrides);

// Command bodies. Each returns 0 on success and reports progress on
// stdout; input problems throw InputError (exit 1 at the CLI boundary),
// broken internal invariants throw InvariantError (exit 2).

/// Frame CSVs (by role) -> labeled events. Writes events_<role>.csv plus
/// extract.json under out_dir.
int
cmd_extract(const io::RunConfig& config, const std::map<Role, std::string>& frame_csvs,
            const std::string& out_dir);

/// Events CSV -> components.csv, components.txt, components.json.
int
cmd_classify(const io::RunConfig& config, const std::string& events_csv,
             const std::string& out_dir);

/// Detected events CSV + annotation TSV -> agreement.txt, agreement.json.
int
cmd_evaluate(const io::RunConfig& config, const std::string& detected_events_csv,
             const std::string& annotations_tsv, const std::string& out_dir);

/// Sessions CSV (+ optional profiles CSV) -> analysis.txt, analysis.json.
int
cmd_analyze(const io::RunConfig& config, const std::string& sessions_csv,
            const std::string& profiles_csv, const std::string& out_dir);

/// Synthetic cohort -> sessions.csv, profiles.csv, manifest.json, scene.json
/// and per-session frame CSVs when the config asks for frames.
int
cmd_simulate(const io::RunConfig& config, const std::string& out_dir);

}  // namespace gazekit::cli
