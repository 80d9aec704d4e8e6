// Copyright 2026 The mgraph Authors
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
#include <optional>
#include <string_view>
#include <string>

#include "json.hpp"
#include "mgraph/conditions.hpp"

namespace mgraph {

// Engine-wide defaults. Condition files may override the per-query fields.
struct EngineConfig {
  double alpha = 1.0;
  std::optional<double> tau;  // overrides the nearest-neighbour threshold
  ConditionWeights weights{1.0, 1.0, 1.0, 1.0, 1.0};
  double sigma_s = 0.1;
  std::size_t structural_window = 48;
  std::optional<double> structural_penalty;  // 0.1 * tau when unset
  double tag_unit = 1.0;
  double big_m = 1e6;
  double min_beat_separation_s = 0.25;
  std::size_t blend_half_window = 6;
  std::size_t beam_width = 64;
  std::size_t commit_lag = 12;
  double keyframe_d = 0.2;
  std::optional<double> keyframe_d_upper;
  int port = 8080;
  unsigned threads = 0;

  bool operator==(const EngineConfig&) const = default;
};

// Throws Error(kSchema) with a JSON pointer on invalid or negative values.
void validate_config(const EngineConfig& cfg);

nlohmann::json config_to_json(const EngineConfig& cfg);
EngineConfig config_from_json(const nlohmann::json& j, bool lax = false);

// Reads a config file (if non-empty), then applies the CONFIG and PORT
// environment overrides. CONFIG names a config file used when `path` is empty.
EngineConfig load_config(const std::string& path, bool lax = false);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace mgraph
