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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mgraph/pose.hpp"

namespace mgraph {

using NodeId = std::uint32_t;

struct SyntheticEdge {
  NodeId from = 0;
  NodeId to = 0;
  double weight = 0.0;  // pair_distance(from, to)

  auto operator<=>(const SyntheticEdge&) const = default;
};

// Transition graph over the frames of one pose sequence.
//
// Node ids are source frame indices. Natural edges (i, i+1) are implicit and
// exist whenever both endpoints survive pruning. Synthetic edges are stored
// explicitly, sorted by (from, to), and never duplicate a natural edge.
struct MotionGraph {
  std::size_t node_count = 0;
  double tau = 0.0;
  std::vector<SyntheticEdge> synthetic_edges;
  std::vector<NodeId> pruned_nodes;  // sorted
  std::string provenance;            // canonical JSON of the builder config

  bool is_pruned(NodeId v) const;
  std::size_t active_count() const { return node_count - pruned_nodes.size(); }
  bool has_natural_edge(NodeId from, NodeId to) const;

  bool operator==(const MotionGraph&) const = default;
};

struct Arc {
  NodeId to = 0;
  double weight = 0.0;  // 0 for natural edges
  bool natural = false;
};

// Read-only CSR view of the surviving edges, arcs sorted by target id.
class Adjacency {
 public:
  explicit Adjacency(const MotionGraph& g);

  std::size_t node_count() const { return active_.size(); }
  bool active(NodeId v) const { return active_[v] != 0; }
  std::span<const Arc> out(NodeId v) const;
  std::span<const Arc> in(NodeId v) const;  // Arc::to holds the source node
  // Weight of edge from -> to, or nullptr when there is none.
  const Arc* find(NodeId from, NodeId to) const;
  std::vector<NodeId> active_nodes() const;

 private:
  std::vector<char> active_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<Arc> out_arcs_, in_arcs_;
};

// alpha * mean over frames of the nearest non-adjacent pair distance.
double compute_threshold(const PoseSequence& seq, double alpha = 1.0,
                         unsigned threads = 0);

// Natural edges plus every ordered pair |i-j| > 1 with pair_distance < tau.
MotionGraph build_graph(const PoseSequence& seq, double tau, unsigned threads = 0);

// Removes dead ends to a fixpoint, then keeps the largest strongly connected
// component. Throws Error(kDegenerateGraph) if no cycle survives.
MotionGraph prune_graph(const MotionGraph& g);

// Sizes of all strongly connected components among the graph's active nodes,
// in order of their smallest member.
std::vector<std::size_t> scc_sizes(const MotionGraph& g);

}  // namespace mgraph
