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

#include <string>
#include <vector>

namespace gazekit {

/// Clinical intake scores carried per participant and offered to the
/// regression as covariates. Field order here fixes the covariate order.
struct ParticipantProfile {
    double ados_css = 0.0;      // calibrated severity score, 1..10
    double adir_social = 0.0;   // reciprocal social interaction
    double adir_comm = 0.0;     // communication
    double adir_rrb = 0.0;      // restricted/repetitive behavior
    double adir_dev = 0.0;      // development evident before 36 months
    double das_verbal = 0.0;    // standard scores, population mean 100
    double das_nonverbal = 0.0;
    double das_spatial = 0.0;
    double das_gca = 0.0;       // general conceptual ability

    /// Instrument floors used by validate(): study entry required each
    /// score at or above its cutoff.
    static constexpr double kAdosMin = 4.0;
    static constexpr double kAdirSocialMin = 10.0;
    static constexpr double kAdirCommMin = 8.0;
    static constexpr double kAdirRrbMin = 3.0;
    static constexpr double kAdirDevMin = 1.0;
    static constexpr double kDasGcaMin = 70.0;

    /// Throws InputError when a score is non-finite or below its floor.
    void
    validate() const;

    /// Values in the order of covariate_names().
    std::vector<double>
    covariates() const {
        return {ados_css, adir_social, adir_comm, adir_rrb, adir_dev,
                das_verbal, das_nonverbal, das_spatial, das_gca};
    }

    static const std::vector<std::string>&
    covariate_names() {
        static const std::vector<std::string> names{
            "ados_css",   "adir_social",   "adir_comm",   "adir_rrb", "adir_dev",
            "das_verbal", "das_nonverbal", "das_spatial", "das_gca"};
        return names;
    }
};

}  // namespace gazekit
