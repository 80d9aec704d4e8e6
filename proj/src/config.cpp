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

#include "mgraph/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace mgraph {

using detail::child;
using detail::json;

void validate_config(const EngineConfig& c) {
  auto bad = [](const std::string& ptr, const std::string& what) {
    detail::schema_error(ptr, what);
  };
  if (!(c.alpha > 0.0)) bad("/alpha", "alpha must be > 0");
  if (c.tau && !(*c.tau > 0.0)) bad("/tau", "tau must be > 0");
  const auto& w = c.weights;
  if (w.edge < 0 || w.beat < 0 || w.structural < 0 || w.tag < 0 || w.ext < 0) {
    bad("/weights", "weights must be >= 0");
  }
  if (!(c.sigma_s > 0.0)) bad("/sigma_s", "sigma_s must be > 0");
  if (c.structural_penalty && *c.structural_penalty < 0.0) {
    bad("/structural/penalty", "penalty must be >= 0");
  }
  if (c.tag_unit < 0.0) bad("/tag/unit", "tag unit must be >= 0");
  if (!(c.big_m > 0.0)) bad("/tag/big_m", "big_m must be > 0");
  if (c.min_beat_separation_s < 0.0) bad("/min_beat_separation_s", "must be >= 0");
  if (c.beam_width == 0) bad("/beam/width", "beam width must be >= 1");
  if (!(c.keyframe_d >= 0.0 && c.keyframe_d < 1.0)) bad("/keyframe/D", "D must lie in [0, 1)");
  if (c.keyframe_d_upper && *c.keyframe_d_upper < 0.0) bad("/keyframe/D_upper", "must be >= 0");
  if (c.port < 0 || c.port > 65535) bad("/server/port", "port out of range");
}

json config_to_json(const EngineConfig& c) {
  json j;
  j["alpha"] = c.alpha;
  j["tau"] = c.tau ? json(*c.tau) : json(nullptr);
  j["weights"] = {{"edge", c.weights.edge},
                  {"beat", c.weights.beat},
                  {"struct", c.weights.structural},
                  {"tag", c.weights.tag},
                  {"ext", c.weights.ext}};
  j["sigma_s"] = c.sigma_s;
  j["structural"] = {{"window", c.structural_window},
                     {"penalty", c.structural_penalty ? json(*c.structural_penalty) : json(nullptr)}};
  j["tag"] = {{"unit", c.tag_unit}, {"big_m", c.big_m}};
  j["min_beat_separation_s"] = c.min_beat_separation_s;
  j["blend"] = {{"half_window", c.blend_half_window}};
  j["beam"] = {{"width", c.beam_width}, {"commit_lag", c.commit_lag}};
  j["keyframe"] = {{"D", c.keyframe_d},
                   {"D_upper", c.keyframe_d_upper ? json(*c.keyframe_d_upper) : json(nullptr)}};
  j["server"] = {{"port", c.port}};
  j["threads"] = c.threads;
  return j;
}

EngineConfig config_from_json(const json& j, bool lax) {
  using namespace detail;
  EngineConfig c;
  const std::string root;
  check_keys(j, {"alpha", "tau", "weights", "sigma_s", "structural", "tag", "min_beat_separation_s",
                 "blend", "beam", "keyframe", "server", "threads"},
             root, lax);
  if (has(j, "alpha")) c.alpha = get_positive(j["alpha"], "/alpha");
  if (has(j, "tau")) c.tau = get_positive(j["tau"], "/tau");
  if (has(j, "weights")) {
    const json& w = j["weights"];
    check_keys(w, {"edge", "beat", "struct", "tag", "ext"}, "/weights", lax);
    if (has(w, "edge")) c.weights.edge = get_nonneg(w["edge"], "/weights/edge");
    if (has(w, "beat")) c.weights.beat = get_nonneg(w["beat"], "/weights/beat");
    if (has(w, "struct")) c.weights.structural = get_nonneg(w["struct"], "/weights/struct");
    if (has(w, "tag")) c.weights.tag = get_nonneg(w["tag"], "/weights/tag");
    if (has(w, "ext")) c.weights.ext = get_nonneg(w["ext"], "/weights/ext");
  }
  if (has(j, "sigma_s")) c.sigma_s = get_positive(j["sigma_s"], "/sigma_s");
  if (has(j, "structural")) {
    const json& s = j["structural"];
    check_keys(s, {"window", "penalty"}, "/structural", lax);
    if (has(s, "window")) c.structural_window = get_uint(s["window"], "/structural/window");
    if (has(s, "penalty")) c.structural_penalty = get_nonneg(s["penalty"], "/structural/penalty");
  }
  if (has(j, "tag")) {
    const json& t = j["tag"];
    check_keys(t, {"unit", "big_m"}, "/tag", lax);
    if (has(t, "unit")) c.tag_unit = get_nonneg(t["unit"], "/tag/unit");
    if (has(t, "big_m")) c.big_m = get_positive(t["big_m"], "/tag/big_m");
  }
  if (has(j, "min_beat_separation_s")) {
    c.min_beat_separation_s = get_nonneg(j["min_beat_separation_s"], "/min_beat_separation_s");
  }
  if (has(j, "blend")) {
    check_keys(j["blend"], {"half_window"}, "/blend", lax);
    if (has(j["blend"], "half_window")) {
      c.blend_half_window = get_uint(j["blend"]["half_window"], "/blend/half_window");
    }
  }
  if (has(j, "beam")) {
    const json& b = j["beam"];
    check_keys(b, {"width", "commit_lag"}, "/beam", lax);
    if (has(b, "width")) c.beam_width = get_uint(b["width"], "/beam/width");
    if (has(b, "commit_lag")) c.commit_lag = get_uint(b["commit_lag"], "/beam/commit_lag");
  }
  if (has(j, "keyframe")) {
    const json& k = j["keyframe"];
    check_keys(k, {"D", "D_upper"}, "/keyframe", lax);
    if (has(k, "D")) c.keyframe_d = get_nonneg(k["D"], "/keyframe/D");
    if (has(k, "D_upper")) c.keyframe_d_upper = get_nonneg(k["D_upper"], "/keyframe/D_upper");
  }
  if (has(j, "server")) {
    check_keys(j["server"], {"port"}, "/server", lax);
    if (has(j["server"], "port")) c.port = static_cast<int>(get_uint(j["server"]["port"], "/server/port"));
  }
  if (has(j, "threads")) c.threads = static_cast<unsigned>(get_uint(j["threads"], "/threads"));
  validate_config(c);
  return c;
}

EngineConfig load_config(const std::string& path, bool lax) {
  std::string file = path;
  if (file.empty()) {
    if (const char* env = std::getenv("CONFIG"); env != nullptr && *env != '\0') file = env;
  }
  EngineConfig c;
  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(ErrorKind::kIo, "cannot open config file " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    c = config_from_json(detail::parse_or_throw(ss.str(), file), lax);
  }
  if (const char* env = std::getenv("PORT"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long port = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || port < 0 || port > 65535) {
      fail(ErrorKind::kSchema, std::string("PORT is not a valid port: ") + env, "/server/port");
    }
    c.port = static_cast<int>(port);
  }
  return c;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace mgraph
