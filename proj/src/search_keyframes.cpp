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
#include <cmath>
#include <exception>
#include <limits>
#include <queue>
#include <string>
#include <tuple>

#include "mgraph/error.hpp"
#include "mgraph/search.hpp"
#include "parallel.hpp"

namespace mgraph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Hop counts in [0, limit] at which `to` is reachable from `from`, honouring
// the same forbidden states the search does.
std::vector<char> reachable_hops(const Adjacency& adj, const CostModel& model, NodeId from,
                                 NodeId to, std::size_t target_begin, std::size_t target_len,
                                 std::size_t limit) {
  std::vector<char> hit(limit + 1, 0);
  std::vector<char> cur(adj.node_count(), 0), nxt(adj.node_count(), 0);
  cur[from] = 1;
  hit[0] = from == to;
  for (std::size_t k = 1; k <= limit; ++k) {
    std::fill(nxt.begin(), nxt.end(), 0);
    const std::size_t t = target_begin + std::min(k, target_len);
    bool any = false;
    for (NodeId v = 0; v < adj.node_count(); ++v) {
      if (!cur[v]) continue;
      for (const Arc& a : adj.out(v)) {
        if (!nxt[a.to] && !model.forbidden(t, a.to)) {
          nxt[a.to] = 1;
          any = true;
        }
      }
    }
    hit[k] = nxt[to];
    cur.swap(nxt);
    if (!any) break;
  }
  return hit;
}

std::string infeasible_detail(std::size_t segment, HopWindow w, const std::vector<char>& hit) {
  std::string below = "null", above = "null";
  for (std::size_t k = std::min(w.lo, hit.size()); k-- > 0;) {
    if (hit[k]) {
      below = std::to_string(k);
      break;
    }
  }
  for (std::size_t k = w.hi + 1; k < hit.size(); ++k) {
    if (hit[k]) {
      above = std::to_string(k);
      break;
    }
  }
  return "{\"segment\":" + std::to_string(segment) + ",\"window\":[" + std::to_string(w.lo) +
         "," + std::to_string(w.hi) + "],\"nearest_below\":" + below +
         ",\"nearest_above\":" + above + "}";
}

}  // namespace

HopWindow hop_window(std::size_t target_len, const KeyframeOptions& opt) {
  const double up = opt.d_upper.value_or(opt.d);
  if (!(opt.d >= 0.0 && opt.d < 1.0) || !(up >= 0.0)) {
    fail(ErrorKind::kStructural, "length scale factor D must lie in [0, 1)");
  }
  const double len = static_cast<double>(target_len);
  // The epsilon keeps products like 0.8 * 10 from rounding across an integer.
  constexpr double kEps = 1e-9;
  HopWindow w;
  w.lo = static_cast<std::size_t>(std::max(0.0, std::ceil((1.0 - opt.d) * len - kEps)));
  w.hi = static_cast<std::size_t>(std::floor((1.0 + up) * len + kEps));
  return w;
}

std::optional<SegmentPath> search_segment(const Adjacency& adj, const CostModel& model,
                                          NodeId from, NodeId to, std::size_t target_begin,
                                          std::size_t target_len, HopWindow window) {
  const std::size_t n = adj.node_count();
  const std::size_t layers = window.hi + 1;
  auto id = [&](NodeId v, std::size_t k) { return k * n + v; };
  std::vector<double> dist(n * layers, kInf);
  std::vector<std::uint32_t> pred(n * layers, kNone);
  std::vector<char> settled(n * layers, 0);

  using Item = std::tuple<double, NodeId, std::size_t>;  // (cost, node, hops)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[id(from, 0)] = 0.0;
  queue.emplace(0.0, from, 0);

  std::size_t goal_hops = 0;
  bool found = false;
  while (!queue.empty()) {
    const auto [c, v, k] = queue.top();
    queue.pop();
    const std::size_t s = id(v, k);
    if (settled[s]) continue;
    settled[s] = 1;
    if (v == to && k >= window.lo && k <= window.hi) {
      goal_hops = k;
      found = true;
      break;
    }
    if (k == window.hi) continue;
    const std::size_t t = target_begin + std::min(k + 1, target_len);
    for (const Arc& arc : adj.out(v)) {
      const NodeId u = arc.to;
      const std::size_t s2 = id(u, k + 1);
      if (settled[s2] || model.forbidden(t, u)) continue;
      const double c2 = (c + model.edge_term(arc)) + model.markov_terms(t, u).total();
      if (c2 < dist[s2]) {
        dist[s2] = c2;
        pred[s2] = static_cast<std::uint32_t>(v);
        queue.emplace(c2, u, k + 1);
      }
    }
  }
  if (!found) return std::nullopt;

  SegmentPath out;
  out.cost = dist[id(to, goal_hops)];
  out.nodes.resize(goal_hops + 1);
  NodeId v = to;
  for (std::size_t k = goal_hops; k > 0; --k) {
    out.nodes[k] = v;
    v = static_cast<NodeId>(pred[id(v, k)]);
  }
  out.nodes[0] = v;
  return out;
}

SearchResult search_keyframes(const MotionGraph& g, const CostModel& model,
                              const KeyframeOptions& opt, unsigned threads) {
  const auto& keys = model.track().keyframes;
  if (keys.size() < 2) fail(ErrorKind::kStructural, "keyframe search needs K >= 2 keyframes");
  const Adjacency adj(g);

  std::vector<std::size_t> position(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const Keyframe& kf = keys[i];
    const std::string where = "/keyframes/" + std::to_string(i);
    if (kf.source_frame >= adj.node_count() || !adj.active(kf.source_frame)) {
      fail(ErrorKind::kSchema,
           "keyframe source frame " + std::to_string(kf.source_frame) +
               " is missing or pruned",
           where + "/frame");
    }
    if (!(kf.target_time_s >= 0.0) || (i > 0 && !(kf.target_time_s > keys[i - 1].target_time_s))) {
      fail(ErrorKind::kSchema, "keyframe target times must be >= 0 and strictly increasing",
           where + "/t");
    }
    position[i] = static_cast<std::size_t>(std::llround(kf.target_time_s * model.target_fps()));
  }

  const std::size_t segments = keys.size() - 1;
  std::vector<std::optional<SegmentPath>> found(segments);
  std::vector<std::exception_ptr> errors(segments);
  detail::parallel_for(segments, threads, [&](std::size_t i) {
    try {
      const std::size_t len = position[i + 1] - position[i];
      const HopWindow w = hop_window(len, opt);
      found[i] = search_segment(adj, model, keys[i].source_frame, keys[i + 1].source_frame,
                                position[i], len, w);
      if (!found[i]) {
        const std::size_t limit = std::max<std::size_t>(2 * w.hi, w.hi + adj.node_count());
        const auto hit = reachable_hops(adj, model, keys[i].source_frame,
                                        keys[i + 1].source_frame, position[i], len, limit);
        fail(ErrorKind::kInfeasible,
             "keyframe segment " + std::to_string(i) + " has no path with " +
                 std::to_string(w.lo) + ".." + std::to_string(w.hi) + " hops",
             infeasible_detail(i, w, hit));
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SearchResult result;
  result.searcher = Searcher::kKeyframeDijkstra;
  if (model.forbidden(position[0], keys[0].source_frame)) {
    fail(ErrorKind::kInfeasible, "first keyframe is forbidden by the tag track",
         "{\"segment\":0}");
  }
  result.path.push_back(keys[0].source_frame);
  for (std::size_t i = 0; i < segments; ++i) {
    const SegmentPath& sp = *found[i];
    Segment seg;
    seg.path_begin = result.path.size() - 1;
    seg.hops = sp.nodes.size() - 1;
    seg.path_end = seg.path_begin + seg.hops;
    seg.target_begin = position[i];
    seg.target_len = position[i + 1] - position[i];
    result.path.insert(result.path.end(), sp.nodes.begin() + 1, sp.nodes.end());
    result.segments.push_back(seg);
  }
  result.transitions = find_transitions(result.path);
  const PathCost pc = evaluate_path(adj, model, result.path, target_indices(result), false);
  result.cost_total = pc.total;
  result.cost_breakdown = pc.breakdown;
  return result;
}

}  // namespace mgraph
