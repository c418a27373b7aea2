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

#include <json.hpp>

#include "gazekit/geometry.hpp"

namespace gazekit::io::detail {

/// Shared by the scene file reader and inline scene blocks in run configs.
SceneLayout
scene_from_json(const nlohmann::json& j, const std::string& context);

nlohmann::json
scene_to_json(const SceneLayout& scene);

}  // namespace gazekit::io::detail
