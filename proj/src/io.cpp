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

#include "mgraph/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace mgraph::io {

using detail::child;
using detail::get_nonneg;
using detail::get_number;
using detail::get_string;
using detail::get_uint;
using detail::has;
using detail::require;
using detail::schema_error;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path, path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path, path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path, path);
}

std::string canonical(const json& j) { return j.dump() + "\n"; }

// --- poses -----------------------------------------------------------------

namespace {

template <std::size_t D>
json joints_to_json(const std::vector<std::array<double, D>>& joints) {
  json arr = json::array();
  for (const auto& p : joints) {
    json q = json::array();
    for (double x : p) q.push_back(x);
    arr.push_back(std::move(q));
  }
  return arr;
}

template <std::size_t D>
std::vector<std::array<double, D>> joints_from_json(const json& j, const std::string& ptr,
                                                    std::size_t expected, std::size_t frame) {
  detail::expect_array(j, ptr);
  if (j.size() != expected) {
    schema_error(ptr, "expected " + std::to_string(expected) + " joints, got " +
                          std::to_string(j.size()));
  }
  std::vector<std::array<double, D>> out(expected);
  for (std::size_t k = 0; k < expected; ++k) {
    const std::string p = child(ptr, k);
    const json& q = j[k];
    if (!q.is_array() || q.size() != D) {
      schema_error(p, "expected a " + std::to_string(D) + "-vector");
    }
    for (std::size_t c = 0; c < D; ++c) {
      if (!q[c].is_number() || !std::isfinite(q[c].get<double>())) {
        schema_error(child(p, c), "non-finite coordinate in frame " + std::to_string(frame) +
                                      ", joint " + std::to_string(k));
      }
      out[k][c] = q[c].get<double>();
    }
  }
  return out;
}

}  // namespace

json frame_to_json(const PoseFrame& f) {
  json j;
  j["t"] = f.time_s;
  j["local"] = joints_to_json(f.joints_local);
  j["global"] = joints_to_json(f.joints_global);
  if (f.joints_2d) j["joints2d"] = joints_to_json(*f.joints_2d);
  return j;
}

json pose_sequence_to_json(const PoseSequence& seq) {
  json j;
  j["version"] = 1;
  j["fps"] = seq.fps;
  j["skeleton"] = {{"names", seq.skeleton.names}, {"parents", seq.skeleton.parents}};
  json frames = json::array();
  for (const auto& f : seq.frames) frames.push_back(frame_to_json(f));
  j["frames"] = std::move(frames);
  return j;
}

PoseSequence pose_sequence_from_json(const json& j, bool lax) {
  detail::check_keys(j, {"version", "fps", "skeleton", "frames"}, "", lax);
  const json& version = require(j, "version", "");
  if (get_uint(version, "/version") != 1) schema_error("/version", "unsupported version");

  PoseSequence seq;
  seq.fps = detail::get_positive(require(j, "fps", ""), "/fps");

  const json& sk = require(j, "skeleton", "");
  detail::check_keys(sk, {"names", "parents"}, "/skeleton", lax);
  const json& parents = detail::expect_array(require(sk, "parents", "/skeleton"), "/skeleton/parents");
  for (std::size_t i = 0; i < parents.size(); ++i) {
    seq.skeleton.parents.push_back(
        static_cast<int>(detail::get_int(parents[i], child("/skeleton/parents", i))));
  }
  if (has(sk, "names")) {
    const json& names = detail::expect_array(sk["names"], "/skeleton/names");
    for (std::size_t i = 0; i < names.size(); ++i) {
      seq.skeleton.names.push_back(get_string(names[i], child("/skeleton/names", i)));
    }
    if (names.size() != parents.size()) {
      schema_error("/skeleton/names", "names and parents differ in length");
    }
  }
  try {
    validate_skeleton(seq.skeleton);
  } catch (const Error& e) {
    fail(ErrorKind::kSchema, e.what(), "/skeleton/parents");
  }
  const std::size_t joints = seq.skeleton.joint_count();

  const json& frames = detail::expect_array(require(j, "frames", ""), "/frames");
  if (frames.size() < 2) schema_error("/frames", "a pose sequence needs at least 2 frames");
  seq.frames.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string p = child("/frames", i);
    const json& fj = frames[i];
    detail::check_keys(fj, {"t", "local", "global", "joints2d"}, p, lax);
    PoseFrame f;
    f.frame_index = i;
    f.time_s = get_nonneg(require(fj, "t", p), child(p, "t"));
    if (i > 0 && !(f.time_s > seq.frames.back().time_s)) {
      schema_error(child(p, "t"), "time stamps must strictly increase");
    }
    f.joints_local = joints_from_json<3>(require(fj, "local", p), child(p, "local"), joints, i);
    f.joints_global = joints_from_json<3>(require(fj, "global", p), child(p, "global"), joints, i);
    if (has(fj, "joints2d")) {
      f.joints_2d = joints_from_json<2>(fj["joints2d"], child(p, "joints2d"), joints, i);
    }
    seq.frames.push_back(std::move(f));
  }
  validate_sequence(seq);
  return seq;
}

PoseSequence load_pose_sequence(const std::string& path, bool lax) {
  return pose_sequence_from_json(detail::parse_or_throw(read_file(path), path), lax);
}

void save_pose_sequence(const std::string& path, const PoseSequence& seq) {
  write_file(path, canonical(pose_sequence_to_json(seq)));
}

// --- graphs ----------------------------------------------------------------

std::uint64_t graph_config_hash(const MotionGraph& g) { return fnv1a64(g.provenance); }

json graph_to_json(const MotionGraph& g) {
  json j;
  j["version"] = 1;
  j["node_count"] = g.node_count;
  j["tau"] = g.tau;
  j["config_hash"] = hex64(graph_config_hash(g));
  j["provenance"] = g.provenance;
  json edges = json::array();
  for (const auto& e : g.synthetic_edges) edges.push_back({e.from, e.to, e.weight});
  j["synthetic_edges"] = std::move(edges);
  j["pruned_nodes"] = g.pruned_nodes;
  return j;
}

MotionGraph graph_from_json(const json& j, bool lax) {
  detail::check_keys(j, {"version", "node_count", "tau", "config_hash", "provenance",
                         "synthetic_edges", "pruned_nodes"},
                     "", lax);
  if (get_uint(require(j, "version", ""), "/version") != kGraphFormatVersion) {
    schema_error("/version", "unsupported graph version");
  }
  MotionGraph g;
  g.node_count = get_uint(require(j, "node_count", ""), "/node_count");
  g.tau = get_nonneg(require(j, "tau", ""), "/tau");
  g.provenance = get_string(require(j, "provenance", ""), "/provenance");
  const json& edges = detail::expect_array(require(j, "synthetic_edges", ""), "/synthetic_edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = child("/synthetic_edges", i);
    if (!edges[i].is_array() || edges[i].size() != 3) schema_error(p, "expected [from, to, weight]");
    SyntheticEdge e;
    e.from = static_cast<NodeId>(get_uint(edges[i][0], child(p, 0)));
    e.to = static_cast<NodeId>(get_uint(edges[i][1], child(p, 1)));
    e.weight = get_nonneg(edges[i][2], child(p, 2));
    if (e.from >= g.node_count || e.to >= g.node_count) schema_error(p, "edge endpoint out of range");
    g.synthetic_edges.push_back(e);
  }
  const json& pruned = detail::expect_array(require(j, "pruned_nodes", ""), "/pruned_nodes");
  for (std::size_t i = 0; i < pruned.size(); ++i) {
    const auto v = get_uint(pruned[i], child("/pruned_nodes", i));
    if (v >= g.node_count) schema_error(child("/pruned_nodes", i), "node out of range");
    g.pruned_nodes.push_back(static_cast<NodeId>(v));
  }
  if (has(j, "config_hash") &&
      get_string(j["config_hash"], "/config_hash") != hex64(graph_config_hash(g))) {
    schema_error("/config_hash", "config hash does not match provenance");
  }
  return g;
}

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) { put(v); }
  void u64(std::uint64_t v) { put(v); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  template <typename T>
  void put(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get<std::uint8_t>()); }
  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::string raw(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      fail(ErrorKind::kIo, "unexpected EOF at offset " + std::to_string(bytes_.size()),
           std::to_string(bytes_.size()));
    }
  }
  template <typename T>
  T get() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_graph(const MotionGraph& g) {
  Writer payload;
  payload.u32(static_cast<std::uint32_t>(g.node_count));
  payload.f64(g.tau);
  payload.u64(graph_config_hash(g));
  payload.u32(static_cast<std::uint32_t>(g.provenance.size()));
  payload.raw(g.provenance);
  payload.u32(static_cast<std::uint32_t>(g.synthetic_edges.size()));
  for (const auto& e : g.synthetic_edges) {
    payload.u32(e.from);
    payload.u32(e.to);
    payload.f64(e.weight);
  }
  payload.u32(static_cast<std::uint32_t>(g.pruned_nodes.size()));
  for (NodeId v : g.pruned_nodes) payload.u32(v);

  Writer out;
  out.u8(kGraphFormatVersion);
  out.u64(payload.bytes().size());
  out.bytes().insert(out.bytes().end(), payload.bytes().begin(), payload.bytes().end());
  return std::move(out.bytes());
}

MotionGraph decode_graph(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const std::uint8_t version = r.u8();
  if (version != kGraphFormatVersion) {
    fail(ErrorKind::kSchema, "unsupported graph file version " + std::to_string(version), "0");
  }
  const std::uint64_t length = r.u64();
  if (r.remaining() < length) {
    fail(ErrorKind::kIo, "unexpected EOF at offset " + std::to_string(bytes.size()),
         std::to_string(bytes.size()));
  }
  MotionGraph g;
  g.node_count = r.u32();
  g.tau = r.f64();
  const std::uint64_t hash = r.u64();
  g.provenance = r.raw(r.u32());
  const std::uint32_t edges = r.u32();
  g.synthetic_edges.reserve(std::min<std::size_t>(edges, r.remaining() / 16));
  for (std::uint32_t i = 0; i < edges; ++i) {
    SyntheticEdge e;
    e.from = r.u32();
    e.to = r.u32();
    e.weight = r.f64();
    if (e.from >= g.node_count || e.to >= g.node_count) {
      fail(ErrorKind::kSchema, "edge endpoint out of range at offset " + std::to_string(r.pos()));
    }
    g.synthetic_edges.push_back(e);
  }
  const std::uint32_t pruned = r.u32();
  for (std::uint32_t i = 0; i < pruned; ++i) {
    const NodeId v = r.u32();
    if (v >= g.node_count) fail(ErrorKind::kSchema, "pruned node out of range");
    g.pruned_nodes.push_back(v);
  }
  if (r.pos() != 9 + length || r.remaining() != 0) {
    fail(ErrorKind::kSchema, "payload length mismatch: trailing bytes after offset " +
                                 std::to_string(r.pos()));
  }
  if (hash != graph_config_hash(g)) {
    fail(ErrorKind::kSchema, "config hash does not match provenance (stale or corrupt cache)");
  }
  return g;
}

namespace {
bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

void save_graph(const std::string& path, const MotionGraph& g) {
  if (ends_with(path, ".json")) {
    write_file(path, canonical(graph_to_json(g)));
    return;
  }
  const auto bytes = encode_graph(g);
  write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

MotionGraph load_graph(const std::string& path) {
  const std::string text = read_file(path);
  if (ends_with(path, ".json")) return graph_from_json(detail::parse_or_throw(text, path));
  return decode_graph(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// --- conditions ------------------------------------------------------------

json beat_track_to_json(const BeatTrack& b) { return b.beats_s; }

BeatTrack beat_track_from_json(const json& j, const std::string& ptr) {
  detail::expect_array(j, ptr);
  BeatTrack b;
  for (std::size_t i = 0; i < j.size(); ++i) b.beats_s.push_back(get_nonneg(j[i], child(ptr, i)));
  for (std::size_t i = 1; i < b.beats_s.size(); ++i) {
    if (!(b.beats_s[i] > b.beats_s[i - 1])) {
      schema_error(child(ptr, i), "beat times must be strictly increasing");
    }
  }
  return b;
}

json tag_track_to_json(const TagTrack& t) {
  json arr = json::array();
  for (const auto& s : t.spans) {
    arr.push_back({{"start_s", s.start_s}, {"end_s", s.end_s}, {"tag", s.tag}, {"order", s.order}});
  }
  return arr;
}

TagTrack tag_track_from_json(const json& j, const std::string& ptr) {
  detail::expect_array(j, ptr);
  TagTrack t;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = child(ptr, i);
    detail::check_keys(j[i], {"start_s", "end_s", "tag", "order"}, p, false);
    TagSpan s;
    s.start_s = get_nonneg(require(j[i], "start_s", p), child(p, "start_s"));
    s.end_s = get_nonneg(require(j[i], "end_s", p), child(p, "end_s"));
    s.tag = get_string(require(j[i], "tag", p), child(p, "tag"));
    s.order = static_cast<int>(get_uint(require(j[i], "order", p), child(p, "order")));
    if (!(s.start_s < s.end_s)) schema_error(p, "tag span needs start_s < end_s");
    if (!t.spans.empty() && s.start_s < t.spans.back().end_s) {
      schema_error(p, "tag spans overlap or are unsorted");
    }
    t.spans.push_back(std::move(s));
  }
  return t;
}

namespace {

std::vector<std::vector<double>> matrix_from_json(const json& j, const std::string& ptr) {
  detail::expect_array(j, ptr);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = child(ptr, i);
    detail::expect_array(j[i], p);
    std::vector<double> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(get_number(j[i][k], child(p, k)));
    if (!out.empty() && row.size() != out.front().size()) schema_error(p, "ragged feature rows");
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

ConditionFile condition_from_json(const json& j, const EngineConfig& cfg, double tau, bool lax) {
  detail::check_keys(j, {"version", "duration_s", "frames", "beats", "tags", "source_tags",
                         "keyframes", "features", "weights", "sigma_s", "structural", "tag",
                         "search"},
                     "", lax);
  if (has(j, "version") && get_uint(j["version"], "/version") != 1) {
    schema_error("/version", "unsupported condition version");
  }
  ConditionFile c;
  ConditionTrack& tr = c.track;
  tr.weights = cfg.weights;
  tr.sigma_s = cfg.sigma_s;
  tr.structural_window = cfg.structural_window;
  tr.structural_penalty = cfg.structural_penalty.value_or(0.1 * tau);
  tr.tag_unit = cfg.tag_unit;
  tr.big_m = cfg.big_m;
  c.beam_width = cfg.beam_width;
  c.keyframe.d = cfg.keyframe_d;
  c.keyframe.d_upper = cfg.keyframe_d_upper;

  if (has(j, "duration_s")) tr.duration_s = get_nonneg(j["duration_s"], "/duration_s");
  if (has(j, "frames")) c.frames = get_uint(j["frames"], "/frames");
  if (has(j, "beats")) {
    tr.music_beats = beat_track_from_json(j["beats"], "/beats");
    tr.music_beats->source = BeatSource::kMusicIngested;
  }
  if (has(j, "tags")) tr.tags = tag_track_from_json(j["tags"], "/tags");
  if (has(j, "source_tags")) c.source_tags = tag_track_from_json(j["source_tags"], "/source_tags");
  if (has(j, "keyframes")) {
    const json& ks = detail::expect_array(j["keyframes"], "/keyframes");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const std::string p = child("/keyframes", i);
      detail::check_keys(ks[i], {"t", "frame"}, p, lax);
      Keyframe k;
      k.target_time_s = get_nonneg(require(ks[i], "t", p), child(p, "t"));
      k.source_frame = static_cast<NodeId>(get_uint(require(ks[i], "frame", p), child(p, "frame")));
      if (!tr.keyframes.empty() && !(k.target_time_s > tr.keyframes.back().target_time_s)) {
        schema_error(child(p, "t"), "keyframe times must strictly increase");
      }
      tr.keyframes.push_back(k);
    }
  }
  if (has(j, "features")) {
    const json& f = j["features"];
    detail::check_keys(f, {"target", "source"}, "/features", lax);
    ExternalFeatures ext;
    ext.target = matrix_from_json(require(f, "target", "/features"), "/features/target");
    ext.source = matrix_from_json(require(f, "source", "/features"), "/features/source");
    if (!ext.target.empty() && !ext.source.empty() &&
        ext.target.front().size() != ext.source.front().size()) {
      schema_error("/features", "target and source feature dimensions differ");
    }
    tr.external = std::move(ext);
  }
  if (has(j, "weights")) {
    const json& w = j["weights"];
    detail::check_keys(w, {"edge", "beat", "struct", "tag", "ext"}, "/weights", lax);
    if (has(w, "edge")) tr.weights.edge = get_nonneg(w["edge"], "/weights/edge");
    if (has(w, "beat")) tr.weights.beat = get_nonneg(w["beat"], "/weights/beat");
    if (has(w, "struct")) tr.weights.structural = get_nonneg(w["struct"], "/weights/struct");
    if (has(w, "tag")) tr.weights.tag = get_nonneg(w["tag"], "/weights/tag");
    if (has(w, "ext")) tr.weights.ext = get_nonneg(w["ext"], "/weights/ext");
  }
  if (has(j, "sigma_s")) tr.sigma_s = detail::get_positive(j["sigma_s"], "/sigma_s");
  if (has(j, "structural")) {
    const json& s = j["structural"];
    detail::check_keys(s, {"window", "penalty"}, "/structural", lax);
    if (has(s, "window")) tr.structural_window = get_uint(s["window"], "/structural/window");
    if (has(s, "penalty")) tr.structural_penalty = get_nonneg(s["penalty"], "/structural/penalty");
  }
  if (has(j, "tag")) {
    const json& t = j["tag"];
    detail::check_keys(t, {"unit", "big_m"}, "/tag", lax);
    if (has(t, "unit")) tr.tag_unit = get_nonneg(t["unit"], "/tag/unit");
    if (has(t, "big_m")) tr.big_m = detail::get_positive(t["big_m"], "/tag/big_m");
  }
  if (has(j, "search")) {
    const json& s = j["search"];
    detail::check_keys(s, {"searcher", "beam_width", "D", "D_upper"}, "/search", lax);
    if (has(s, "searcher")) {
      c.searcher = get_string(s["searcher"], "/search/searcher");
      if (c.searcher != "dp" && c.searcher != "beam") {
        schema_error("/search/searcher", "searcher must be \"dp\" or \"beam\"");
      }
    }
    if (has(s, "beam_width")) {
      c.beam_width = get_uint(s["beam_width"], "/search/beam_width");
      if (c.beam_width == 0) schema_error("/search/beam_width", "beam width must be >= 1");
    }
    if (has(s, "D")) {
      c.keyframe.d = get_nonneg(s["D"], "/search/D");
      if (!(c.keyframe.d < 1.0)) schema_error("/search/D", "D must lie in [0, 1)");
    }
    if (has(s, "D_upper")) c.keyframe.d_upper = get_nonneg(s["D_upper"], "/search/D_upper");
  }
  return c;
}

json condition_to_json(const ConditionFile& c) {
  const ConditionTrack& tr = c.track;
  json j;
  j["version"] = 1;
  j["duration_s"] = tr.duration_s;
  j["frames"] = c.frames ? json(*c.frames) : json(nullptr);
  j["beats"] = tr.music_beats ? beat_track_to_json(*tr.music_beats) : json(nullptr);
  j["tags"] = tr.tags ? tag_track_to_json(*tr.tags) : json(nullptr);
  j["source_tags"] = c.source_tags ? tag_track_to_json(*c.source_tags) : json(nullptr);
  json keys = json::array();
  for (const auto& k : tr.keyframes) keys.push_back({{"t", k.target_time_s}, {"frame", k.source_frame}});
  j["keyframes"] = std::move(keys);
  j["features"] = tr.external ? json{{"target", tr.external->target}, {"source", tr.external->source}}
                              : json(nullptr);
  j["weights"] = {{"edge", tr.weights.edge},
                  {"beat", tr.weights.beat},
                  {"struct", tr.weights.structural},
                  {"tag", tr.weights.tag},
                  {"ext", tr.weights.ext}};
  j["sigma_s"] = tr.sigma_s;
  j["structural"] = {{"window", tr.structural_window}, {"penalty", tr.structural_penalty}};
  j["tag"] = {{"unit", tr.tag_unit}, {"big_m", tr.big_m}};
  j["search"] = {{"searcher", c.searcher},
                 {"beam_width", c.beam_width},
                 {"D", c.keyframe.d},
                 {"D_upper", c.keyframe.d_upper ? json(*c.keyframe.d_upper) : json(nullptr)}};
  return j;
}

// --- results ---------------------------------------------------------------

json search_result_to_json(const SearchResult& r) {
  json j;
  j["searcher"] = to_string(r.searcher);
  j["path"] = r.path;
  json trs = json::array();
  for (const auto& t : r.transitions) {
    trs.push_back({{"position", t.position}, {"from", t.from}, {"to", t.to}});
  }
  j["transitions"] = std::move(trs);
  j["cost_total"] = r.cost_total;
  j["cost_breakdown"] = {{"edge", r.cost_breakdown.edge},
                         {"beat", r.cost_breakdown.beat},
                         {"struct", r.cost_breakdown.structural},
                         {"tag", r.cost_breakdown.tag},
                         {"ext", r.cost_breakdown.ext}};
  json segs = json::array();
  for (const auto& s : r.segments) {
    segs.push_back({{"path_begin", s.path_begin},
                    {"path_end", s.path_end},
                    {"target_begin", s.target_begin},
                    {"target_len", s.target_len},
                    {"hops", s.hops}});
  }
  j["segments"] = std::move(segs);
  return j;
}

json timeline_to_json(const BlendedTimeline& t) {
  json j;
  j["fps"] = t.frames.fps;
  json frames = json::array();
  for (std::size_t i = 0; i < t.frames.frames.size(); ++i) {
    json f = frame_to_json(t.frames.frames[i]);
    f["provenance"] = std::visit(
        [](const auto& p) -> json {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, Retrieved>) {
            return {{"kind", "retrieved"}, {"source", p.source}};
          } else if constexpr (std::is_same_v<P, Blended>) {
            return {{"kind", "blended"}, {"from", p.from}, {"to", p.to}, {"u", p.u}};
          } else {
            return {{"kind", "resampled"}, {"position", p.position}, {"lower", p.lower},
                    {"upper", p.upper}};
          }
        },
        t.provenance[i]);
    frames.push_back(std::move(f));
  }
  j["frames"] = std::move(frames);
  return j;
}

std::vector<FrameArray> load_video(const std::string& path) {
  const json j = detail::parse_or_throw(read_file(path), path);
  detail::check_keys(j, {"max_value", "frames"}, "", false);
  const double max_value = detail::get_positive(require(j, "max_value", ""), "/max_value");
  const json& frames = detail::expect_array(require(j, "frames", ""), "/frames");
  std::vector<FrameArray> out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string p = child("/frames", i);
    detail::check_keys(frames[i], {"shape", "data"}, p, false);
    std::vector<std::size_t> shape;
    const json& sj = detail::expect_array(require(frames[i], "shape", p), child(p, "shape"));
    for (std::size_t k = 0; k < sj.size(); ++k) shape.push_back(get_uint(sj[k], child(child(p, "shape"), k)));
    std::vector<double> data;
    const json& dj = detail::expect_array(require(frames[i], "data", p), child(p, "data"));
    for (std::size_t k = 0; k < dj.size(); ++k) data.push_back(get_number(dj[k], child(child(p, "data"), k)));
    try {
      out.emplace_back(std::move(shape), std::move(data), max_value);
    } catch (const Error& e) {
      fail(ErrorKind::kSchema, e.what(), p);
    }
  }
  return out;
}

}  // namespace mgraph::io
