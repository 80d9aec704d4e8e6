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
constexpr std::uint32_t kRoot = std::numeric_limits<std::uint32_t>::max();

struct Entry {
  NodeId node = 0;
  double cost = 0.0;
  std::uint32_t parent = kRoot;  // index into the previous layer
};

bool entry_less(const Entry& a, const Entry& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.node < b.node;
}

}  // namespace

struct BeamStream::Impl {
  Impl(const MotionGraph& g, CostModel m, std::size_t width, std::size_t lag)
      : adj(g), model(std::move(m)), width(width), lag(lag) {
    best.assign(adj.node_count(), kInf);
    best_parent.assign(adj.node_count(), kRoot);
    frame_cost.assign(adj.node_count(), kInf);
  }

  Adjacency adj;
  CostModel model;
  std::size_t width;
  std::size_t lag;
  std::vector<std::vector<Entry>> layers;
  std::vector<NodeId> committed;

  // Scratch, indexed by node.
  std::vector<double> best;
  std::vector<std::uint32_t> best_parent;
  std::vector<double> frame_cost;

  NodeId ancestor(std::size_t layer, std::uint32_t idx, std::size_t position) const {
    while (layer > position) {
      idx = layers[layer][idx].parent;
      --layer;
    }
    return layers[layer][idx].node;
  }

  // Up to `window` most recent nodes ending at layers[layer][idx], oldest first.
  std::vector<NodeId> recent_prefix(std::size_t layer, std::uint32_t idx,
                                    std::size_t window) const {
    std::vector<NodeId> out;
    for (;;) {
      out.push_back(layers[layer][idx].node);
      if (out.size() == window || layer == 0) break;
      idx = layers[layer][idx].parent;
      --layer;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  void keep_top(std::vector<Entry>& layer) const {
    std::sort(layer.begin(), layer.end(), entry_less);
    if (layer.size() > width) layer.resize(width);
  }

  void first_step() {
    std::vector<Entry> layer;
    for (NodeId v = 0; v < adj.node_count(); ++v) {
      if (!adj.active(v) || model.forbidden(0, v)) continue;
      layer.push_back({v, model.markov_terms(0, v).total() + 0.0, kRoot});
    }
    if (layer.empty()) {
      fail(ErrorKind::kInfeasible, "no feasible path: every node is forbidden at step 0",
           "{\"step\":0}");
    }
    keep_top(layer);
    layers.push_back(std::move(layer));
  }

  void next_step() {
    const std::size_t t = layers.size();
    const std::vector<Entry>& prev = layers.back();
    const bool structural = model.has_structural();
    const std::size_t window = model.track().structural_window;
    std::vector<NodeId> touched;

    for (std::uint32_t i = 0; i < prev.size(); ++i) {
      const Entry& e = prev[i];
      std::vector<NodeId> prefix;
      if (structural) prefix = recent_prefix(t - 1, i, window);
      for (const Arc& arc : adj.out(e.node)) {
        const NodeId u = arc.to;
        if (frame_cost[u] == kInf) {
          if (model.forbidden(t, u)) continue;
          frame_cost[u] = model.markov_terms(t, u).total();
          touched.push_back(u);
        }
        const double extra = structural ? model.structural_term(prefix, u) : 0.0;
        const double c = (e.cost + model.edge_term(arc)) + (frame_cost[u] + extra);
        if (c < best[u] ||
            (c == best[u] && best_parent[u] != kRoot && e.node < prev[best_parent[u]].node)) {
          best[u] = c;
          best_parent[u] = i;
        }
      }
    }

    std::vector<Entry> layer;
    for (NodeId u : touched) {
      if (best[u] != kInf) layer.push_back({u, best[u], best_parent[u]});
      best[u] = kInf;
      best_parent[u] = kRoot;
      frame_cost[u] = kInf;
    }
    if (layer.empty()) {
      fail(ErrorKind::kInfeasible,
           "beam exhausted: no feasible continuation at step " + std::to_string(t),
           "{\"step\":" + std::to_string(t) + "}");
    }
    keep_top(layer);
    layers.push_back(std::move(layer));
  }

  std::vector<NodeId> commit_ready() {
    std::vector<NodeId> out;
    const std::size_t last = layers.size() - 1;
    while (layers.size() - committed.size() > lag) {
      const std::size_t position = committed.size();
      const NodeId chosen = ancestor(last, 0, position);
      committed.push_back(chosen);
      out.push_back(chosen);
      // Drop partials that disagree with the committed frame.
      std::vector<Entry>& layer = layers.back();
      std::vector<Entry> kept;
      for (std::uint32_t i = 0; i < layer.size(); ++i) {
        if (ancestor(last, i, position) == chosen) kept.push_back(layer[i]);
      }
      layer.swap(kept);
    }
    return out;
  }
};

BeamStream::BeamStream(const MotionGraph& g, CostModel model, std::size_t beam_width,
                       std::size_t lag) {
  if (beam_width == 0) fail(ErrorKind::kStructural, "beam width must be >= 1");
  impl_ = std::make_unique<Impl>(g, std::move(model), beam_width, lag);
}

BeamStream::~BeamStream() = default;
BeamStream::BeamStream(BeamStream&&) noexcept = default;
BeamStream& BeamStream::operator=(BeamStream&&) noexcept = default;

std::vector<NodeId> BeamStream::advance(const std::vector<double>* target_feature) {
  if (target_feature != nullptr) impl_->model.append_target_feature(*target_feature);
  if (impl_->layers.empty()) {
    impl_->first_step();
  } else {
    impl_->next_step();
  }
  return impl_->commit_ready();
}

SearchResult BeamStream::finish() {
  Impl& s = *impl_;
  if (s.layers.empty()) fail(ErrorKind::kStructural, "search length T must be >= 1");
  const std::size_t frames = s.layers.size();
  SearchResult result;
  result.searcher = Searcher::kBeam;
  result.path.resize(frames);
  std::uint32_t idx = 0;
  for (std::size_t t = frames; t-- > 0;) {
    result.path[t] = s.layers[t][idx].node;
    idx = s.layers[t][idx].parent;
  }
  s.committed = result.path;
  result.transitions = find_transitions(result.path);
  std::vector<std::size_t> targets(frames);
  for (std::size_t t = 0; t < frames; ++t) targets[t] = t;
  const PathCost pc = evaluate_path(s.adj, s.model, result.path, targets, true);
  result.cost_total = pc.total;
  result.cost_breakdown = pc.breakdown;
  return result;
}

std::size_t BeamStream::steps() const { return impl_->layers.size(); }
std::size_t BeamStream::committed() const { return impl_->committed.size(); }

SearchResult search_beam(const MotionGraph& g, const CostModel& model, std::size_t frames,
                         std::size_t beam_width) {
  if (frames == 0) fail(ErrorKind::kStructural, "search length T must be >= 1");
  BeamStream stream(g, model, beam_width, std::numeric_limits<std::size_t>::max());
  for (std::size_t t = 0; t < frames; ++t) stream.advance();
  return stream.finish();
}

}  // namespace mgraph
