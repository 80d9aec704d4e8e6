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

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "mgraph/config.hpp"
#include "mgraph/error.hpp"
#include "mgraph/graph.hpp"
#include "mgraph/pose.hpp"
#include "mgraph/search.hpp"

namespace mgraph {

using nlohmann::json;

// Hash of the canonical pose file text. Graphs record it so a graph built
// from other poses is rejected at load.
std::string source_hash(const PoseSequence& seq);

struct BuildOutput {
  MotionGraph graph;
  json stats;  // counts, tau, pruned count, SCC size histogram
};

// compute_threshold (unless cfg.tau), build_graph, prune_graph. The graph's
// provenance records the builder config and the source hash.
BuildOutput build_pipeline(const PoseSequence& seq, const EngineConfig& cfg);

// Blend feasibility plus motion-beat statistics; alignment against `music`
// when given.
json analyze_sequence(const PoseSequence& seq, const EngineConfig& cfg,
                      const std::optional<BeatTrack>& music, std::size_t window,
                      double threshold);

// Query surface shared by the CLI and the HTTP server. Immutable after
// construction and safe to share between threads; every method returns the
// exact payload both surfaces emit.
class Engine {
 public:
  // Throws Error(kSchema) if the graph was built from a different sequence.
  Engine(PoseSequence seq, MotionGraph graph, EngineConfig cfg);

  static std::shared_ptr<const Engine> load(const std::string& pose_path,
                                            const std::string& graph_path,
                                            const EngineConfig& cfg, bool lax = false);

  const PoseSequence& sequence() const { return seq_; }
  const MotionGraph& graph() const { return graph_; }
  const EngineConfig& config() const { return cfg_; }

  json health() const;
  json summary() const;
  // Frames [from, to).
  json frames(std::size_t from, std::size_t to) const;

  // ConditionFileV1 in, {condition, provenance, result, timeline} out.
  json search(const json& condition, bool lax = false) const;
  json keyframe_search(const json& condition, bool lax = false) const;

  // Streaming beam search over a condition's cost terms. Frames are supplied
  // one at a time by the caller.
  BeamStream open_stream(const json& condition, bool lax = false) const;
  // Final payload of a stream; `features` are the per-frame features that
  // were fed to advance().
  json stream_result(const json& condition, const SearchResult& result,
                     const std::vector<std::vector<double>>& features, bool lax = false) const;

  json provenance() const;

 private:
  struct Prepared;
  Prepared prepare(const json& condition, bool lax) const;
  json respond(const Prepared& p, const SearchResult& result) const;

  PoseSequence seq_;
  MotionGraph graph_;
  EngineConfig cfg_;
  std::string config_hash_;
  SourceAnnotations base_annotations_;
};

// {"code", "message", "detail"}; detail is parsed when it holds JSON.
json error_payload(const Error& e);
json error_payload(int code, const std::string& message);

}  // namespace mgraph
