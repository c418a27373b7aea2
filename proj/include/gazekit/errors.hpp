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

#include <stdexcept>
#include <string>
#include <vector>

namespace gazekit {

/// Caller-side failure: malformed files, inconsistent inputs, samples a test
/// is undefined for. The CLI maps this family to exit code 1.
class InputError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// A broken internal invariant. Reaching this is a bug in gazekit itself,
/// never a data problem. The CLI maps it to exit code 2.
class InvariantError : public std::logic_error {
 public:
    using std::logic_error::logic_error;
};

/// Face-to-role assignment could not be decided (e.g. three faces under a
/// policy that can only order two).
class AmbiguousRolesError : public InputError {
 public:
    using InputError::InputError;
};

/// A frame observation violates its contract (non-finite fields, zero gaze
/// vector on a frame marked valid, ...).
class InvalidObservationError : public InputError {
 public:
    using InputError::InputError;
};

/// Timestamps moved backwards inside one stream.
class UnorderedInputError : public InputError {
 public:
    using InputError::InputError;
};

/// Two inputs that must share a clock do not overlap in time at all.
class ClockMismatchError : public InputError {
 public:
    using InputError::InputError;
};

/// A statistical routine received a sample it is undefined for
/// (too small, zero variance, ...).
class DegenerateSampleError : public InputError {
 public:
    using InputError::InputError;
};

/// The regression design matrix is rank deficient. Carries the names of the
/// offending columns so the caller can say which predictors collide.
class RankDeficientError : public InputError {
 public:
    RankDeficientError(const std::string& msg, std::vector<std::string> cols)
        : InputError(msg), columns(std::move(cols)) {
    }

    std::vector<std::string> columns;
};

}  // namespace gazekit
