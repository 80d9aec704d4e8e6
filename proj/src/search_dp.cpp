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

#include <algorithm>
#include <limits>
#include <string>

#include "mgraph/error.hpp"
#include "mgraph/search.hpp"

namespace mgraph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint32_t kMaxBlock = 4;

// Run-block bookkeeping for the Markov structural approximation.
struct RunBlocks {
  std::size_t block = 1;   // w / 4 node indices per block
  std::size_t window = 0;  // structural window w
  double charge = 0.0;     // weighted penalty per revisit

  std::uint32_t after_natural(std::uint32_t k, NodeId to) const {
    return std::min<std::uint32_t>(kMaxBlock, k + (to % block == 0 ? 1 : 0));
  }

  // Penalty of a synthetic jump from -> to leaving a run that spans k blocks.
  double jump_charge(std::uint32_t k, NodeId from, NodeId to) const {
    if (to >= from || from - to + 1 > window) return 0.0;
    const std::size_t blocks_back = from / block - to / block;
    return blocks_back <= k ? charge : 0.0;
  }
};

}  // namespace

SearchResult search_dp(const MotionGraph& g, const CostModel& model, std::size_t frames) {
  if (frames == 0) fail(ErrorKind::kStructural, "search length T must be >= 1");
  const Adjacency adj(g);
  const std::size_t n = adj.node_count();
  if (adj.active_nodes().empty()) {
    fail(ErrorKind::kDegenerateGraph, "graph has no active nodes");
  }

  const bool structural = model.has_structural();
  const std::size_t states_per_node = structural ? kMaxBlock + 1 : 1;
  const std::size_t states = n * states_per_node;
  RunBlocks blocks;
  if (structural) {
    const auto& tr = model.track();
    blocks.window = tr.structural_window;
    blocks.block = std::max<std::size_t>(1, tr.structural_window / 4);
    blocks.charge = tr.weights.structural * tr.structural_penalty;
  }

  // back[t][s]: predecessor state of state s at step t.
  std::vector<std::vector<std::uint32_t>> back(frames);
  std::vector<double> cost(states, kInf), next(states, kInf);
  constexpr std::uint32_t kNoState = std::numeric_limits<std::uint32_t>::max();

  auto state = [&](NodeId v, std::uint32_t k) { return v * states_per_node + k; };

  bool any = false;
  for (NodeId v = 0; v < n; ++v) {
    if (!adj.active(v) || model.forbidden(0, v)) continue;
    cost[state(v, 0)] = model.markov_terms(0, v).total();
    any = true;
  }
  if (!any) {
    fail(ErrorKind::kInfeasible, "no feasible path: every node is forbidden at step 0",
         "{\"step\":0}");
  }

  for (std::size_t t = 1; t < frames; ++t) {
    back[t].assign(states, kNoState);
    std::fill(next.begin(), next.end(), kInf);
    any = false;
    for (NodeId u = 0; u < n; ++u) {
      if (!adj.active(u) || model.forbidden(t, u)) continue;
      const double frame = model.markov_terms(t, u).total();
      // In-arcs are sorted by source id, so strict comparison keeps the
      // smallest predecessor on ties.
      for (const Arc& arc : adj.in(u)) {
        const NodeId v = arc.to;
        const double edge = model.edge_term(arc);
        for (std::uint32_t k = 0; k < states_per_node; ++k) {
          const double prev = cost[state(v, k)];
          if (prev == kInf) continue;
          std::uint32_t k2 = 0;
          double extra = 0.0;
          if (structural) {
            if (arc.natural) {
              k2 = blocks.after_natural(k, u);
            } else {
              extra = blocks.jump_charge(k, v, u);
            }
          }
          const double c = (prev + edge) + (frame + extra);
          const std::size_t s = state(u, k2);
          if (c < next[s]) {
            next[s] = c;
            back[t][s] = static_cast<std::uint32_t>(state(v, k));
            any = true;
          }
        }
      }
    }
    if (!any) {
      fail(ErrorKind::kInfeasible,
           "no feasible path: step " + std::to_string(t) + " cannot be reached",
           "{\"step\":" + std::to_string(t) + "}");
    }
    cost.swap(next);
  }

  std::size_t best = 0;
  for (std::size_t s = 1; s < states; ++s) {
    if (cost[s] < cost[best]) best = s;
  }

  SearchResult result;
  result.searcher = Searcher::kDp;
  result.path.resize(frames);
  std::size_t s = best;
  for (std::size_t t = frames; t-- > 0;) {
    result.path[t] = static_cast<NodeId>(s / states_per_node);
    if (t > 0) s = back[t][s];
  }
  result.transitions = find_transitions(result.path);
  std::vector<std::size_t> targets(frames);
  for (std::size_t t = 0; t < frames; ++t) targets[t] = t;
  const PathCost pc = evaluate_path(adj, model, result.path, targets, true);
  result.cost_total = pc.total;
  result.cost_breakdown = pc.breakdown;
  return result;
}

}  // namespace mgraph
