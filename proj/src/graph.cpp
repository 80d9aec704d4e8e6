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

#include "mgraph/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "mgraph/error.hpp"
#include "parallel.hpp"

namespace mgraph {

bool MotionGraph::is_pruned(NodeId v) const {
  return std::binary_search(pruned_nodes.begin(), pruned_nodes.end(), v);
}

bool MotionGraph::has_natural_edge(NodeId from, NodeId to) const {
  return to == from + 1 && to < node_count && !is_pruned(from) && !is_pruned(to);
}

Adjacency::Adjacency(const MotionGraph& g) : active_(g.node_count, 1) {
  for (NodeId v : g.pruned_nodes) active_[v] = 0;
  const std::size_t n = g.node_count;

  std::vector<std::size_t> out_deg(n, 0), in_deg(n, 0);
  auto count = [&](NodeId u, NodeId v) {
    ++out_deg[u];
    ++in_deg[v];
  };
  for (NodeId u = 0; u + 1 < n; ++u) {
    if (active_[u] && active_[u + 1]) count(u, u + 1);
  }
  for (const auto& e : g.synthetic_edges) {
    if (active_[e.from] && active_[e.to]) count(e.from, e.to);
  }

  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    out_offsets_[v + 1] = out_offsets_[v] + out_deg[v];
    in_offsets_[v + 1] = in_offsets_[v] + in_deg[v];
  }
  out_arcs_.resize(out_offsets_[n]);
  in_arcs_.resize(in_offsets_[n]);
  std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  auto add = [&](NodeId u, NodeId v, double w, bool natural) {
    out_arcs_[out_fill[u]++] = Arc{v, w, natural};
    in_arcs_[in_fill[v]++] = Arc{u, w, natural};
  };
  for (NodeId u = 0; u + 1 < n; ++u) {
    if (active_[u] && active_[u + 1]) add(u, u + 1, 0.0, true);
  }
  for (const auto& e : g.synthetic_edges) {
    if (active_[e.from] && active_[e.to]) add(e.from, e.to, e.weight, false);
  }
  auto by_target = [](const Arc& a, const Arc& b) { return a.to < b.to; };
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(out_arcs_.begin() + out_offsets_[v], out_arcs_.begin() + out_offsets_[v + 1],
              by_target);
    std::sort(in_arcs_.begin() + in_offsets_[v], in_arcs_.begin() + in_offsets_[v + 1],
              by_target);
  }
}

std::span<const Arc> Adjacency::out(NodeId v) const {
  return {out_arcs_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const Arc> Adjacency::in(NodeId v) const {
  return {in_arcs_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

const Arc* Adjacency::find(NodeId from, NodeId to) const {
  if (from >= node_count() || to >= node_count()) return nullptr;
  auto arcs = out(from);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), to,
                             [](const Arc& a, NodeId t) { return a.to < t; });
  return (it != arcs.end() && it->to == to) ? &*it : nullptr;
}

std::vector<NodeId> Adjacency::active_nodes() const {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < active_.size(); ++v) {
    if (active_[v]) nodes.push_back(v);
  }
  return nodes;
}

double compute_threshold(const PoseSequence& seq, double alpha, unsigned threads) {
  const std::size_t n = seq.frames.size();
  if (n < 3) {
    fail(ErrorKind::kStructural, "threshold needs at least 3 frames");
  }
  if (!(alpha > 0.0)) fail(ErrorKind::kStructural, "alpha must be positive");

  constexpr double kNone = std::numeric_limits<double>::infinity();
  std::vector<double> nn(n, kNone);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    double best = kNone;
    for (std::size_t j = 0; j < n; ++j) {
      if (j + 1 >= i && j <= i + 1) continue;  // j in {i-1, i, i+1}
      best = std::min(best, pair_distance(seq.frames[i], seq.frames[j]));
    }
    nn[i] = best;
  });

  // Frames whose only candidates are temporal neighbours (the middle of a
  // 3-frame sequence) carry no statistic.
  double sum = 0.0;
  std::size_t counted = 0;
  for (double d : nn) {
    if (d == kNone) continue;
    sum += d;
    ++counted;
  }
  return alpha * (sum / static_cast<double>(counted));
}

MotionGraph build_graph(const PoseSequence& seq, double tau, unsigned threads) {
  if (!(tau > 0.0)) fail(ErrorKind::kStructural, "tau must be positive");
  const std::size_t n = seq.frames.size();

  std::vector<std::vector<SyntheticEdge>> rows(n);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      const double d = pair_distance(seq.frames[i], seq.frames[j]);
      if (d < tau) {
        rows[i].push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), d});
      }
    }
  });

  MotionGraph g;
  g.node_count = n;
  g.tau = tau;
  for (const auto& row : rows) {
    for (const auto& e : row) {
      g.synthetic_edges.push_back(e);
      g.synthetic_edges.push_back({e.to, e.from, e.weight});
    }
  }
  std::sort(g.synthetic_edges.begin(), g.synthetic_edges.end());
  return g;
}

namespace {

// Iterative Tarjan over the active subgraph. Returns a component id per node
// (-1 for inactive nodes) and the number of components.
std::pair<std::vector<int>, int> strongly_connected(const Adjacency& adj) {
  const std::size_t n = adj.node_count();
  std::vector<int> comp(n, -1), index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<NodeId> stack;
  int next_index = 0, next_comp = 0;

  struct Frame {
    NodeId v;
    std::size_t arc;
  };
  std::vector<Frame> call;

  for (NodeId root = 0; root < n; ++root) {
    if (!adj.active(root) || index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!call.empty()) {
      Frame& f = call.back();
      auto arcs = adj.out(f.v);
      if (f.arc < arcs.size()) {
        const NodeId w = arcs[f.arc++].to;
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const NodeId v = f.v;
      call.pop_back();
      if (!call.empty()) {
        low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
      if (low[v] == index[v]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
    }
  }
  return {std::move(comp), next_comp};
}

MotionGraph restrict_to(const MotionGraph& g, const std::vector<char>& keep) {
  MotionGraph out;
  out.node_count = g.node_count;
  out.tau = g.tau;
  out.provenance = g.provenance;
  for (NodeId v = 0; v < g.node_count; ++v) {
    if (!keep[v]) out.pruned_nodes.push_back(v);
  }
  for (const auto& e : g.synthetic_edges) {
    if (keep[e.from] && keep[e.to]) out.synthetic_edges.push_back(e);
  }
  return out;
}

}  // namespace

MotionGraph prune_graph(const MotionGraph& g) {
  const std::size_t n = g.node_count;
  std::vector<char> keep(n, 1);
  for (NodeId v : g.pruned_nodes) keep[v] = 0;

  // Dead-end removal to a fixpoint.
  {
    const Adjacency adj(g);
    std::vector<std::size_t> out_deg(n, 0), in_deg(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      out_deg[v] = adj.out(v).size();
      in_deg[v] = adj.in(v).size();
    }
    std::vector<NodeId> queue;
    for (NodeId v = 0; v < n; ++v) {
      if (keep[v] && (out_deg[v] == 0 || in_deg[v] == 0)) {
        keep[v] = 0;
        queue.push_back(v);
      }
    }
    while (!queue.empty()) {
      const NodeId v = queue.back();
      queue.pop_back();
      for (const Arc& a : adj.out(v)) {
        if (keep[a.to] && --in_deg[a.to] == 0) {
          keep[a.to] = 0;
          queue.push_back(a.to);
        }
      }
      for (const Arc& a : adj.in(v)) {
        if (keep[a.to] && --out_deg[a.to] == 0) {
          keep[a.to] = 0;
          queue.push_back(a.to);
        }
      }
    }
  }

  const MotionGraph trimmed = restrict_to(g, keep);
  const Adjacency adj(trimmed);
  const auto [comp, count] = strongly_connected(adj);

  std::vector<std::size_t> size(count, 0);
  std::vector<NodeId> first(count, static_cast<NodeId>(n));
  for (NodeId v = 0; v < n; ++v) {
    if (comp[v] < 0) continue;
    ++size[comp[v]];
    first[comp[v]] = std::min(first[comp[v]], v);
  }
  // Largest component; ties go to the one holding the smallest node id.
  int best = -1;
  for (int c = 0; c < count; ++c) {
    if (best < 0 || size[c] > size[best] ||
        (size[c] == size[best] && first[c] < first[best])) {
      best = c;
    }
  }
  // No self edges exist, so a single-node component has no cycle.
  if (best < 0 || size[best] < 2) {
    fail(ErrorKind::kDegenerateGraph,
         "degenerate graph: no cycle survives dead-end pruning (" +
             std::to_string(n) + " nodes, " + std::to_string(g.synthetic_edges.size()) +
             " synthetic edges); raise alpha or tau");
  }
  for (NodeId v = 0; v < n; ++v) keep[v] = comp[v] == best;
  return restrict_to(trimmed, keep);
}

std::vector<std::size_t> scc_sizes(const MotionGraph& g) {
  const Adjacency adj(g);
  const auto [comp, count] = strongly_connected(adj);
  std::vector<std::size_t> size(count, 0);
  std::vector<NodeId> first(count, static_cast<NodeId>(g.node_count));
  for (NodeId v = 0; v < g.node_count; ++v) {
    if (comp[v] < 0) continue;
    ++size[comp[v]];
    first[comp[v]] = std::min(first[comp[v]], v);
  }
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return first[a] < first[b]; });
  std::vector<std::size_t> out;
  for (int c : order) out.push_back(size[c]);
  return out;
}

}  // namespace mgraph
