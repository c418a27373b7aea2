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
#include <string>
#include <vector>

#include "gazekit/annotation.hpp"
#include "gazekit/components.hpp"
#include "gazekit/events.hpp"
#include "gazekit/geometry.hpp"
#include "gazekit/sim.hpp"

namespace gazekit::io {

/// Which (person, target) dwell series the analysis battery looks at.
struct AnalyzeParams {
    Role subject = Role::Child;
    /// Targets to report; empty means every object target present in the
    /// data (scene targets, i.e. everything but people / other /
    /// no_detection).
    std::vector<std::string> targets;
    int n_weeks = 4;
    double alpha = 0.05;
};

/// Every knob of every command, collected so a single file documents a run.
/// Loaded from JSON; unknown keys are rejected so typos cannot silently
/// fall back to defaults.
struct RunConfig {
    SceneLayout scene;       // defaults to the built-in tabletop layout
    std::string scene_path;  // where scene came from, "" for the default
    /// compress.frame_period <= 0 means: infer the period from the
    /// timestamps of each input stream.
    CompressParams compress;
    ClassifyParams classify;
    JaParams ja;
    MatchRule match;
    AnalyzeParams analyze;
    CohortSpec sim;
    std::uint64_t seed = 190462;
    int jobs = 1;
};

/// The documented defaults (the built-in scene, 10 deg cone, 0.2 s gap,
/// 0.1 s minimum duration, 0.25 s overlap, 3 s latency window, IoU 0.5).
RunConfig
default_config();

/// Reads a JSON config; every key optional, unknown keys throw InputError.
RunConfig
load_config(const std::string& path);

/// Canonical JSON rendering of the effective configuration (keys sorted).
std::string
dump_config(const RunConfig& config);

/// 64-bit FNV-1a of dump_config(), as 16 hex digits; embedded in every
/// report so outputs are traceable to their exact configuration.
std::string
config_fingerprint(const RunConfig& config);

}  // namespace gazekit::io
