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

// Shared fixtures and independent oracles for the unit and acceptance tests.
// The oracles deliberately avoid the library's Adjacency, CostModel and
// search code paths; they only share the summation order of path costs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "mgraph/conditions.hpp"
#include "mgraph/graph.hpp"
#include "mgraph/pose.hpp"

namespace mgraph::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  bool coin(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

inline Skeleton chain_skeleton(std::size_t joints) {
  Skeleton s;
  for (std::size_t j = 0; j < joints; ++j) {
    s.names.push_back("j" + std::to_string(j));
    s.parents.push_back(static_cast<int>(j) - 1);
  }
  return s;
}

inline PoseFrame random_frame(Rng& rng, std::size_t joints, double scale = 1.0) {
  PoseFrame f;
  for (std::size_t j = 0; j < joints; ++j) {
    f.joints_local.push_back({rng.uniform(-scale, scale), rng.uniform(-scale, scale), rng.uniform(-scale, scale)});
    f.joints_global.push_back({rng.uniform(-scale, scale), rng.uniform(-scale, scale), rng.uniform(-scale, scale)});
  }
  return f;
}

// Random-walk pose sequence; consecutive frames are close, distant frames
// occasionally revisit, so thresholds admit a mix of edges.
inline PoseSequence random_walk_sequence(Rng& rng, std::size_t frames, std::size_t joints,
                                         double step = 0.1) {
  PoseSequence seq;
  seq.fps = 24.0;
  seq.skeleton = chain_skeleton(joints);
  PoseFrame f = random_frame(rng, joints, 0.5);
  for (std::size_t i = 0; i < frames; ++i) {
    f.frame_index = i;
    f.time_s = static_cast<double>(i) / seq.fps;
    seq.frames.push_back(f);
    for (std::size_t j = 0; j < joints; ++j) {
      for (std::size_t c = 0; c < 3; ++c) {
        f.joints_local[j][c] = std::clamp(f.joints_local[j][c] + rng.uniform(-step, step), -0.6, 0.6);
        f.joints_global[j][c] = std::clamp(f.joints_global[j][c] + rng.uniform(-step, step), -0.6, 0.6);
      }
    }
  }
  return seq;
}

inline PoseSequence random_sequence(Rng& rng, std::size_t frames, std::size_t joints) {
  PoseSequence seq;
  seq.fps = 24.0;
  seq.skeleton = chain_skeleton(joints);
  for (std::size_t i = 0; i < frames; ++i) {
    PoseFrame f = random_frame(rng, joints);
    f.frame_index = i;
    f.time_s = static_cast<double>(i) / seq.fps;
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

// --- distance oracle -------------------------------------------------------

inline double oracle_norm(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double dx = a[j][0] - b[j][0];
    const double dy = a[j][1] - b[j][1];
    const double dz = a[j][2] - b[j][2];
    sum += dx * dx;
    sum += dy * dy;
    sum += dz * dz;
  }
  return std::sqrt(sum);
}

inline double oracle_pair(const PoseFrame& a, const PoseFrame& b) {
  return oracle_norm(a.joints_local, b.joints_local) + oracle_norm(a.joints_global, b.joints_global);
}

// Exhaustive O(N^2) edge filter.
inline std::set<std::pair<NodeId, NodeId>> oracle_edges(const PoseSequence& seq, double tau) {
  std::set<std::pair<NodeId, NodeId>> out;
  const std::size_t n = seq.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap <= 1) continue;
      if (oracle_pair(seq.frames[i], seq.frames[j]) < tau) {
        out.emplace(static_cast<NodeId>(i), static_cast<NodeId>(j));
      }
    }
  }
  return out;
}

inline double oracle_threshold(const PoseSequence& seq, double alpha) {
  const std::size_t n = seq.size();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      if (j + 1 >= i && j <= i + 1) continue;
      best = std::min(best, oracle_pair(seq.frames[i], seq.frames[j]));
    }
    if (best < kInf) {
      sum += best;
      ++count;
    }
  }
  return alpha * (sum / static_cast<double>(count));
}

// --- graph oracles ---------------------------------------------------------

// Edge list of the surviving graph: natural edges weigh 0.
struct OracleGraph {
  std::size_t n = 0;
  std::vector<char> alive;
  std::map<std::pair<NodeId, NodeId>, double> edges;
};

inline OracleGraph oracle_graph(const MotionGraph& g) {
  OracleGraph o;
  o.n = g.node_count;
  o.alive.assign(o.n, 1);
  for (NodeId v : g.pruned_nodes) o.alive[v] = 0;
  for (NodeId v = 0; v + 1 < o.n; ++v) {
    if (o.alive[v] && o.alive[v + 1]) o.edges[{v, v + 1}] = 0.0;
  }
  for (const auto& e : g.synthetic_edges) {
    if (o.alive[e.from] && o.alive[e.to]) o.edges[{e.from, e.to}] = e.weight;
  }
  return o;
}

// Kosaraju: component id per alive node (-1 for dead nodes).
inline std::vector<int> kosaraju(const OracleGraph& o) {
  std::vector<std::vector<NodeId>> fwd(o.n), rev(o.n);
  for (const auto& [k, w] : o.edges) {
    fwd[k.first].push_back(k.second);
    rev[k.second].push_back(k.first);
  }
  std::vector<char> seen(o.n, 0);
  std::vector<NodeId> order;
  std::function<void(NodeId)> dfs1 = [&](NodeId v) {
    seen[v] = 1;
    for (NodeId u : fwd[v]) {
      if (!seen[u]) dfs1(u);
    }
    order.push_back(v);
  };
  for (NodeId v = 0; v < o.n; ++v) {
    if (o.alive[v] && !seen[v]) dfs1(v);
  }
  std::vector<int> comp(o.n, -1);
  int next = 0;
  std::function<void(NodeId)> dfs2 = [&](NodeId v) {
    comp[v] = next;
    for (NodeId u : rev[v]) {
      if (comp[u] < 0) dfs2(u);
    }
  };
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] < 0) {
      dfs2(*it);
      ++next;
    }
  }
  return comp;
}

// True when v can leave and come back along surviving edges.
inline bool on_cycle(const OracleGraph& o, NodeId v) {
  std::vector<char> seen(o.n, 0);
  std::vector<NodeId> stack;
  for (const auto& [k, w] : o.edges) {
    if (k.first == v) stack.push_back(k.second);
  }
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    if (u == v) return true;
    if (seen[u]) continue;
    seen[u] = 1;
    for (const auto& [k, w] : o.edges) {
      if (k.first == u && !seen[k.second]) stack.push_back(k.second);
    }
  }
  return false;
}

// Random graph with synthetic edges at density p and weights in [0, 1).
inline MotionGraph random_graph(Rng& rng, std::size_t n, double p) {
  MotionGraph g;
  g.node_count = n;
  g.tau = 1.0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if ((i > j ? i - j : j - i) <= 1) continue;
      if (rng.coin(p)) g.synthetic_edges.push_back({i, j, rng.uniform()});
    }
  }
  return g;
}

// --- path-search oracles ---------------------------------------------------

using CostTable = std::vector<std::vector<double>>;  // [t][v]

inline CostTable random_costs(Rng& rng, std::size_t frames, std::size_t n) {
  CostTable c(frames, std::vector<double>(n));
  for (auto& row : c) {
    for (double& x : row) x = rng.uniform(0.0, 2.0);
  }
  return c;
}

// CostModel whose only per-frame term is table[t][v] (edge weight 1).
inline CostModel table_model(std::shared_ptr<const CostTable> table, std::size_t n) {
  ConditionTrack tr;
  tr.weights = {1.0, 0.0, 0.0, 0.0, 1.0};
  ExternalFeatures ext;
  ext.custom = [table](std::size_t t, NodeId v) { return (*table)[t][v]; };
  tr.external = std::move(ext);
  SourceAnnotations src;
  src.fps = 24.0;
  for (std::size_t v = 0; v < n; ++v) src.frame_times.push_back(static_cast<double>(v) / 24.0);
  src.motion_beats.source = BeatSource::kMotionDerived;
  return CostModel(std::move(tr), std::move(src), 24.0);
}

struct OraclePath {
  double cost = kInf;
  std::vector<NodeId> path;
};

// Exhaustive enumeration of every T-frame walk.
inline OraclePath brute_force_best(const OracleGraph& o, const CostTable& c, std::size_t frames) {
  OraclePath best;
  std::vector<std::vector<std::pair<NodeId, double>>> out(o.n);
  for (const auto& [k, w] : o.edges) out[k.first].push_back({k.second, w});
  std::vector<NodeId> path;
  std::function<void(NodeId, double)> walk = [&](NodeId v, double cost) {
    if (path.size() == frames) {
      if (cost < best.cost) {
        best.cost = cost;
        best.path = path;
      }
      return;
    }
    const std::size_t t = path.size();
    for (const auto& [u, w] : out[v]) {
      path.push_back(u);
      walk(u, (cost + w) + c[t][u]);
      path.pop_back();
    }
  };
  for (NodeId v = 0; v < o.n; ++v) {
    if (!o.alive[v]) continue;
    path.assign(1, v);
    walk(v, c[0][v]);
  }
  return best;
}

// Bellman-Ford over (node, hops) states: best cost of reaching `to` from
// `from` in exactly k hops for k in [lo, hi]; hop k pays table[begin+min(k,L)].
struct HopOracle {
  double cost = kInf;
  std::size_t hops = 0;
  bool feasible = false;
};

inline HopOracle bellman_ford_hops(const OracleGraph& o, const CostTable& c, NodeId from, NodeId to,
                                   std::size_t begin, std::size_t len, std::size_t lo, std::size_t hi) {
  std::vector<double> cur(o.n, kInf), nxt(o.n, kInf);
  cur[from] = 0.0;
  HopOracle best;
  if (lo == 0 && from == to) {
    best = {0.0, 0, true};
  }
  for (std::size_t k = 1; k <= hi; ++k) {
    std::fill(nxt.begin(), nxt.end(), kInf);
    // Layers form a DAG, so one relaxation pass per layer is exact.
    for (const auto& [e, w] : o.edges) {
      if (cur[e.first] == kInf) continue;
      const double cand = (cur[e.first] + w) + c[begin + std::min(k, len)][e.second];
      if (cand < nxt[e.second]) nxt[e.second] = cand;
    }
    if (k >= lo && nxt[to] < best.cost) best = {nxt[to], k, true};
    cur.swap(nxt);
  }
  return best;
}

}  // namespace mgraph::testing
