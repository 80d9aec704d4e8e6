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

#include "mgraph/engine.hpp"

#include <cmath>
#include <map>

#include "json_util.hpp"
#include "mgraph/blend.hpp"
#include "mgraph/error.hpp"
#include "mgraph/io.hpp"
#include "mgraph/metrics.hpp"

namespace mgraph {

std::string source_hash(const PoseSequence& seq) {
  return hex64(fnv1a64(io::canonical(io::pose_sequence_to_json(seq))));
}

BuildOutput build_pipeline(const PoseSequence& seq, const EngineConfig& cfg) {
  validate_config(cfg);
  validate_sequence(seq);
  const double tau = cfg.tau ? *cfg.tau : compute_threshold(seq, cfg.alpha, cfg.threads);
  if (!(tau > 0.0)) {
    fail(ErrorKind::kDegenerateGraph,
         "threshold tau is 0 (every frame has an exact duplicate); set tau explicitly");
  }
  MotionGraph built = build_graph(seq, tau, cfg.threads);
  built.provenance = json{{"alpha", cfg.alpha},
                          {"tau", cfg.tau ? json(*cfg.tau) : json(nullptr)},
                          {"source_hash", source_hash(seq)},
                          {"frames", seq.size()}}
                         .dump();

  std::map<std::size_t, std::size_t> histogram;
  for (std::size_t s : scc_sizes(built)) ++histogram[s];
  json hist = json::array();
  for (const auto& [size, count] : histogram) hist.push_back({size, count});

  BuildOutput out;
  out.graph = prune_graph(built);
  std::size_t natural = 0;
  for (NodeId v = 0; v + 1 < out.graph.node_count; ++v) natural += out.graph.has_natural_edge(v, v + 1);
  out.stats = {{"nodes", out.graph.node_count},
               {"active_nodes", out.graph.active_count()},
               {"natural_edges", natural},
               {"synthetic_edges", out.graph.synthetic_edges.size()},
               {"synthetic_edges_before_prune", built.synthetic_edges.size()},
               {"tau", tau},
               {"alpha", cfg.alpha},
               {"pruned", out.graph.pruned_nodes.size()},
               {"scc_histogram", std::move(hist)},
               {"config_hash", hex64(io::graph_config_hash(out.graph))}};
  return out;
}

json analyze_sequence(const PoseSequence& seq, const EngineConfig& cfg,
                      const std::optional<BeatTrack>& music, std::size_t window,
                      double threshold) {
  validate_sequence(seq);
  const FeasibilityReport rep = blend_feasibility_report(seq, window, threshold);
  json out;
  out["feasibility"] = {{"fraction", rep.fraction}, {"windows", rep.windows},
                        {"passed", rep.passed},     {"window", window},
                        {"threshold", threshold},   {"scale", rep.scale}};
  json beats;
  if (seq.size() >= 3) {
    const BeatTrack motion = extract_motion_beats(seq, cfg.min_beat_separation_s);
    beats["count"] = motion.beats_s.size();
    beats["times_s"] = motion.beats_s;
    beats["interval_cv"] = beat_interval_cv(motion);
    beats["alignment_score"] =
        music ? json(beat_alignment_score(motion, *music, cfg.sigma_s)) : json(nullptr);
  } else {
    beats = {{"count", 0}, {"times_s", json::array()}, {"interval_cv", 0.0},
             {"alignment_score", nullptr}};
  }
  beats["sigma_s"] = cfg.sigma_s;
  beats["min_separation_s"] = cfg.min_beat_separation_s;
  out["beats"] = std::move(beats);
  const bool has_2d = seq.frames.front().joints_2d.has_value();
  out["metrics"] = {{"frame_consistency", frame_consistency(seq.frames)},
                    {"motion_diversity", has_2d ? json(motion_diversity(seq.frames)) : json(nullptr)}};
  return out;
}

// --- Engine ----------------------------------------------------------------

struct Engine::Prepared {
  io::ConditionFile condition;
  CostModel model;
  std::size_t frames = 0;
};

Engine::Engine(PoseSequence seq, MotionGraph graph, EngineConfig cfg)
    : seq_(std::move(seq)), graph_(std::move(graph)), cfg_(std::move(cfg)) {
  validate_config(cfg_);
  validate_sequence(seq_);
  if (graph_.node_count != seq_.size()) {
    fail(ErrorKind::kSchema,
         "graph has " + std::to_string(graph_.node_count) + " nodes but the pose file has " +
             std::to_string(seq_.size()) + " frames",
         "/node_count");
  }
  json prov = json::parse(graph_.provenance, nullptr, false);
  if (!prov.is_object() || !prov.contains("source_hash") ||
      prov["source_hash"] != source_hash(seq_)) {
    fail(ErrorKind::kSchema, "graph was built from a different pose file (stale cache)",
         "/provenance");
  }
  config_hash_ = hex64(fnv1a64(config_to_json(cfg_).dump()));
  base_annotations_ = annotate_source(seq_, cfg_.min_beat_separation_s);
}

std::shared_ptr<const Engine> Engine::load(const std::string& pose_path,
                                           const std::string& graph_path,
                                           const EngineConfig& cfg, bool lax) {
  PoseSequence seq = io::load_pose_sequence(pose_path, lax);
  MotionGraph g = io::load_graph(graph_path);
  return std::make_shared<const Engine>(std::move(seq), std::move(g), cfg);
}

json Engine::provenance() const {
  return {{"config", config_to_json(cfg_)},
          {"config_hash", config_hash_},
          {"graph_hash", hex64(io::graph_config_hash(graph_))}};
}

json Engine::health() const { return {{"status", "ok"}, {"nodes", graph_.active_count()}}; }

json Engine::summary() const {
  std::size_t natural = 0;
  for (NodeId v = 0; v + 1 < graph_.node_count; ++v) natural += graph_.has_natural_edge(v, v + 1);
  return {{"nodes", graph_.active_count()},
          {"node_count", graph_.node_count},
          {"tau", graph_.tau},
          {"natural_edges", natural},
          {"synthetic_edges", graph_.synthetic_edges.size()},
          {"pruned_nodes", graph_.pruned_nodes},
          {"fps", seq_.fps},
          {"duration_s", seq_.frames.back().time_s},
          {"joints", seq_.skeleton.joint_count()},
          {"skeleton", {{"names", seq_.skeleton.names}, {"parents", seq_.skeleton.parents}}},
          {"motion_beats_s", base_annotations_.motion_beats.beats_s},
          {"provenance", provenance()}};
}

json Engine::frames(std::size_t from, std::size_t to) const {
  if (from >= seq_.size()) {
    fail(ErrorKind::kSchema, "from out of range [0, " + std::to_string(seq_.size()) + ")", "from");
  }
  if (to <= from || to > seq_.size()) {
    fail(ErrorKind::kSchema, "to must satisfy from < to <= " + std::to_string(seq_.size()), "to");
  }
  json frames = json::array();
  for (std::size_t i = from; i < to; ++i) {
    json f = io::frame_to_json(seq_.frames[i]);
    f["index"] = i;
    f["active"] = !graph_.is_pruned(static_cast<NodeId>(i));
    frames.push_back(std::move(f));
  }
  return {{"fps", seq_.fps},
          {"from", from},
          {"to", to},
          {"skeleton", {{"names", seq_.skeleton.names}, {"parents", seq_.skeleton.parents}}},
          {"frames", std::move(frames)}};
}

Engine::Prepared Engine::prepare(const json& condition, bool lax) const {
  io::ConditionFile c = io::condition_from_json(condition, cfg_, graph_.tau, lax);
  SourceAnnotations ann = base_annotations_;
  ann.tags = c.source_tags;
  std::size_t frames = 0;
  if (c.frames) {
    frames = *c.frames;
  } else {
    frames = static_cast<std::size_t>(std::llround(c.track.duration_s * seq_.fps));
  }
  if (c.track.duration_s == 0.0 && frames > 0) {
    c.track.duration_s = static_cast<double>(frames) / seq_.fps;
  }
  CostModel model(c.track, std::move(ann), seq_.fps);
  return Prepared{std::move(c), std::move(model), frames};
}

json Engine::respond(const Prepared& p, const SearchResult& result) const {
  audit_result(graph_, p.model, result);
  const BlendedTimeline timeline =
      apply_blending(result, seq_, linear_inbetweener(), BlendOptions{cfg_.blend_half_window});
  return {{"condition", io::condition_to_json(p.condition)},
          {"provenance", provenance()},
          {"result", io::search_result_to_json(result)},
          {"timeline", io::timeline_to_json(timeline)}};
}

json Engine::search(const json& condition, bool lax) const {
  const Prepared p = prepare(condition, lax);
  if (p.frames == 0) detail::schema_error("/frames", "target length must be >= 1 frame");
  const SearchResult r = p.condition.searcher == "beam"
                             ? search_beam(graph_, p.model, p.frames, p.condition.beam_width)
                             : search_dp(graph_, p.model, p.frames);
  return respond(p, r);
}

json Engine::keyframe_search(const json& condition, bool lax) const {
  const Prepared p = prepare(condition, lax);
  if (p.condition.track.keyframes.size() < 2) {
    detail::schema_error("/keyframes", "keyframe search needs at least 2 keyframes");
  }
  const SearchResult r = search_keyframes(graph_, p.model, p.condition.keyframe, cfg_.threads);
  return respond(p, r);
}

BeamStream Engine::open_stream(const json& condition, bool lax) const {
  Prepared p = prepare(condition, lax);
  return BeamStream(graph_, std::move(p.model), p.condition.beam_width, cfg_.commit_lag);
}

json Engine::stream_result(const json& condition, const SearchResult& result,
                           const std::vector<std::vector<double>>& features, bool lax) const {
  Prepared p = prepare(condition, lax);
  for (const auto& f : features) p.model.append_target_feature(f);
  return respond(p, result);
}

// --- errors ----------------------------------------------------------------

json error_payload(const Error& e) {
  json detail = nullptr;
  if (!e.detail().empty()) {
    detail = e.detail().front() == '{' ? json::parse(e.detail(), nullptr, false) : json(e.detail());
    if (detail.is_discarded()) detail = e.detail();
  }
  return {{"code", exit_code(e.kind())}, {"message", e.what()}, {"detail", std::move(detail)}};
}

json error_payload(int code, const std::string& message) {
  return {{"code", code}, {"message", message}, {"detail", nullptr}};
}

}  // namespace mgraph
