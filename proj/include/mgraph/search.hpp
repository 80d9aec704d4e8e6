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
#include <span>
#include <string>
#include <vector>

#include "mgraph/conditions.hpp"
#include "mgraph/graph.hpp"

namespace mgraph {

enum class Searcher { kDp, kBeam, kKeyframeDijkstra };

std::string to_string(Searcher s);

// A step whose endpoints are not natural neighbours.
struct Transition {
  std::size_t position = 0;  // index in path of the step's target
  NodeId from = 0;
  NodeId to = 0;

  bool operator==(const Transition&) const = default;
};

// One keyframe-to-keyframe stretch of a keyframe search result.
struct Segment {
  std::size_t path_begin = 0;    // index of the start pin in path
  std::size_t path_end = 0;      // index of the end pin in path
  std::size_t target_begin = 0;  // target frame of the start pin
  std::size_t target_len = 0;    // target frames between the pins
  std::size_t hops = 0;          // path_end - path_begin

  bool operator==(const Segment&) const = default;
};

struct SearchResult {
  std::vector<NodeId> path;
  std::vector<Transition> transitions;
  double cost_total = 0.0;
  CostBreakdown cost_breakdown;
  Searcher searcher = Searcher::kDp;
  std::vector<Segment> segments;  // keyframe search only
};

struct PathCost {
  double total = 0.0;
  CostBreakdown breakdown;
};

// Target frame index of every path position.
std::vector<std::size_t> target_indices(const SearchResult& result);

std::vector<Transition> find_transitions(std::span<const NodeId> path);

// Recomputes the objective of `path`. The running total accumulates as
// ((cost + edge) + frame) per step, the same order every searcher uses.
// Throws Error(kStructural) if a step is not an edge of the graph.
PathCost evaluate_path(const Adjacency& adj, const CostModel& model,
                       std::span<const NodeId> path, std::span<const std::size_t> targets,
                       bool include_structural);

// Checks every SearchResult invariant; throws Error(kStructural) on the first
// violation.
void audit_result(const MotionGraph& g, const CostModel& model, const SearchResult& result);

// Exact minimum-cost path of `frames` steps.
//
// With an active structural term the DP runs over (node, run-block) states:
// the block counter tracks how many w/4-wide node-index blocks the current
// natural run spans, and a synthetic back-jump that lands inside the run
// within the window pays one occurrence. Later replayed frames are not
// charged. cost_total always reports the exact history-dependent objective.
SearchResult search_dp(const MotionGraph& g, const CostModel& model, std::size_t frames);

SearchResult search_beam(const MotionGraph& g, const CostModel& model, std::size_t frames,
                         std::size_t beam_width);

// Incremental beam search. Each advance() consumes one target frame and
// returns the frames committed so far that are at least `lag` steps old.
class BeamStream {
 public:
  BeamStream(const MotionGraph& g, CostModel model, std::size_t beam_width, std::size_t lag);
  ~BeamStream();
  BeamStream(BeamStream&&) noexcept;
  BeamStream& operator=(BeamStream&&) noexcept;

  // Optional external feature of the new target frame.
  std::vector<NodeId> advance(const std::vector<double>* target_feature = nullptr);

  // Commits everything left and returns the full result.
  SearchResult finish();

  std::size_t steps() const;
  std::size_t committed() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct KeyframeOptions {
  double d = 0.2;                       // hop counts down to (1 - d) L
  std::optional<double> d_upper;        // hop counts up to (1 + d_upper) L; defaults to d
};

struct HopWindow {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

HopWindow hop_window(std::size_t target_len, const KeyframeOptions& opt);

struct SegmentPath {
  std::vector<NodeId> nodes;  // from ... to, nodes.size() - 1 hops
  double cost = 0.0;          // excludes the start node's frame cost
};

// Cheapest path from -> to whose hop count lies in `window`, or nullopt.
// Ties resolve by (cost, node, hops).
std::optional<SegmentPath> search_segment(const Adjacency& adj, const CostModel& model,
                                          NodeId from, NodeId to, std::size_t target_begin,
                                          std::size_t target_len, HopWindow window);

// Hop-bounded shortest paths between consecutive keyframes on the layered
// (node, hops) graph. Path costs use target frame target_begin + min(k, L)
// for hop k. Throws Error(kInfeasible) with the nearest achievable hop
// counts when a segment has no path inside its window.
SearchResult search_keyframes(const MotionGraph& g, const CostModel& model,
                              const KeyframeOptions& opt, unsigned threads = 1);

}  // namespace mgraph
