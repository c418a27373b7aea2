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

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "gazekit/cli.hpp"
#include "gazekit/errors.hpp"
#include "gazekit/kernels.hpp"

namespace {

using gazekit::cli::Overrides;

void
add_common(CLI::App* cmd, std::string& config_path, std::string& out_dir, Overrides& o) {
    cmd->add_option("--config", config_path, "JSON config file (defaults used when omitted)");
    cmd->add_option("--out", out_dir, "output directory")->required();
    cmd->add_option("--seed", o.seed, "master random seed override");
    cmd->add_option("--jobs", o.jobs, "parallel worker count");
    cmd->add_option("--scene", o.scene_path, "scene layout JSON override");
    cmd->add_option("--cone-half-angle", o.cone_half_angle_deg,
                    "visual cone half angle, degrees");
    cmd->add_option("--gap-tolerance", o.gap_tolerance,
                    "max target-less gap absorbed between same-target runs, seconds");
    cmd->add_option("--min-duration", o.min_duration,
                    "events shorter than this become no_detection, seconds");
    cmd->add_option("--min-overlap", o.min_overlap,
                    "min joint span for shared/mutual components, seconds");
    cmd->add_option("--latency-window", o.latency_window,
                    "follower arrival window for joint attention, seconds");
    cmd->add_option("--iou-threshold", o.iou_threshold,
                    "min temporal IoU for detected/annotated event matches");
}

}  // namespace

int
main(int argc, char** argv) {
    CLI::App app{"gazekit: batch gaze-target, gaze-event and joint-attention analysis"};
    app.require_subcommand(0, 1);
    app.set_help_all_flag("--help-all", "print help for every command");

    bool show_backend = false;
    app.add_flag("--backend", show_backend, "print the selected compute backend and exit");

    std::string config_path;
    std::string out_dir;
    Overrides overrides;

    // extract
    auto* extract = app.add_subcommand("extract", "frame CSVs -> gaze event CSVs");
    std::string child_csv;
    std::string caregiver_csv;
    extract->add_option("--child", child_csv, "child frame CSV");
    extract->add_option("--caregiver", caregiver_csv, "caregiver frame CSV");
    add_common(extract, config_path, out_dir, overrides);

    // classify
    auto* classify = app.add_subcommand("classify", "event CSV -> gaze components + episodes");
    std::string events_csv;
    classify->add_option("events", events_csv, "gaze events CSV")->required();
    add_common(classify, config_path, out_dir, overrides);

    // evaluate
    auto* evaluate =
        app.add_subcommand("evaluate", "detected events vs annotations -> agreement report");
    std::string detected_csv;
    std::string annotations_tsv;
    evaluate->add_option("--detected", detected_csv, "detected gaze events CSV")->required();
    evaluate->add_option("--annotations", annotations_tsv, "annotation TSV (tier export)")
        ->required();
    add_common(evaluate, config_path, out_dir, overrides);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "session records -> statistics report");
    std::string sessions_csv;
    std::string profiles_csv;
    analyze->add_option("--sessions", sessions_csv, "long-form session events CSV")->required();
    analyze->add_option("--profiles", profiles_csv, "clinical profiles CSV");
    add_common(analyze, config_path, out_dir, overrides);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic cohort");
    add_common(simulate, config_path, out_dir, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help and friends
        }
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (show_backend) {
        std::cout << gazekit::kernels::active_backend().name << "\n";
        return 0;
    }

    try {
        const gazekit::io::RunConfig config =
            gazekit::cli::resolve_config(config_path, overrides);
        if (extract->parsed()) {
            std::map<gazekit::Role, std::string> streams;
            if (!child_csv.empty()) {
                streams[gazekit::Role::Child] = child_csv;
            }
            if (!caregiver_csv.empty()) {
                streams[gazekit::Role::Caregiver] = caregiver_csv;
            }
            return gazekit::cli::cmd_extract(config, streams, out_dir);
        }
        if (classify->parsed()) {
            return gazekit::cli::cmd_classify(config, events_csv, out_dir);
        }
        if (evaluate->parsed()) {
            return gazekit::cli::cmd_evaluate(config, detected_csv, annotations_tsv, out_dir);
        }
        if (analyze->parsed()) {
            return gazekit::cli::cmd_analyze(config, sessions_csv, profiles_csv, out_dir);
        }
        if (simulate->parsed()) {
            return gazekit::cli::cmd_simulate(config, out_dir);
        }
        std::cerr << "error: no command given\n";
        return 1;
    } catch (const gazekit::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const gazekit::InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
