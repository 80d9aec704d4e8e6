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

#include <cmath>
#include <string>

#include "mgraph/error.hpp"
#include "mgraph/search.hpp"

namespace mgraph {

std::string to_string(Searcher s) {
  switch (s) {
    case Searcher::kDp: return "dp";
    case Searcher::kBeam: return "beam";
    case Searcher::kKeyframeDijkstra: return "keyframe_dijkstra";
  }
  return "unknown";
}

std::vector<std::size_t> target_indices(const SearchResult& result) {
  std::vector<std::size_t> targets(result.path.size());
  if (result.segments.empty()) {
    for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = i;
    return targets;
  }
  for (const Segment& s : result.segments) {
    for (std::size_t k = 0; k <= s.hops; ++k) {
      targets[s.path_begin + k] = s.target_begin + std::min(k, s.target_len);
    }
  }
  return targets;
}

std::vector<Transition> find_transitions(std::span<const NodeId> path) {
  std::vector<Transition> out;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i] != path[i - 1] + 1) out.push_back({i, path[i - 1], path[i]});
  }
  return out;
}

PathCost evaluate_path(const Adjacency& adj, const CostModel& model,
                       std::span<const NodeId> path, std::span<const std::size_t> targets,
                       bool include_structural) {
  PathCost out;
  if (path.empty()) return out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const NodeId v = path[i];
    if (v >= adj.node_count() || !adj.active(v)) {
      fail(ErrorKind::kStructural, "path visits missing node " + std::to_string(v));
    }
    double edge = 0.0;
    if (i > 0) {
      const Arc* arc = adj.find(path[i - 1], v);
      if (arc == nullptr) {
        fail(ErrorKind::kStructural, "path step " + std::to_string(i) + " (" +
                                         std::to_string(path[i - 1]) + " -> " +
                                         std::to_string(v) + ") is not an edge");
      }
      edge = model.edge_term(*arc);
    }
    CostBreakdown terms = model.markov_terms(targets[i], v);
    if (include_structural) terms.structural = model.structural_term(path.first(i), v);
    const double frame = terms.total();
    out.total = i == 0 ? frame : (out.total + edge) + frame;
    terms.edge = edge;
    out.breakdown += terms;
  }
  return out;
}

void audit_result(const MotionGraph& g, const CostModel& model, const SearchResult& result) {
  const Adjacency adj(g);
  const auto targets = target_indices(result);
  const bool structural = result.searcher != Searcher::kKeyframeDijkstra;
  const PathCost recomputed = evaluate_path(adj, model, result.path, targets, structural);
  if (find_transitions(result.path) != result.transitions) {
    fail(ErrorKind::kStructural, "transition list does not match the path");
  }
  if (recomputed.total != result.cost_total) {
    fail(ErrorKind::kStructural, "cost_total does not re-sum: " +
                                     std::to_string(result.cost_total) + " vs " +
                                     std::to_string(recomputed.total));
  }
  const CostBreakdown& b = result.cost_breakdown;
  const CostBreakdown& r = recomputed.breakdown;
  if (b.edge != r.edge || b.beat != r.beat || b.structural != r.structural || b.tag != r.tag ||
      b.ext != r.ext) {
    fail(ErrorKind::kStructural, "cost breakdown does not re-sum");
  }
  for (const Segment& s : result.segments) {
    if (s.path_end >= result.path.size() || s.path_end - s.path_begin != s.hops) {
      fail(ErrorKind::kStructural, "segment bounds inconsistent with path");
    }
  }
}

}  // namespace mgraph
