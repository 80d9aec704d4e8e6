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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mgraph/blend.hpp"
#include "mgraph/conditions.hpp"
#include "mgraph/config.hpp"
#include "mgraph/graph.hpp"
#include "mgraph/metrics.hpp"
#include "mgraph/pose.hpp"
#include "mgraph/search.hpp"

namespace mgraph::io {

using nlohmann::json;

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

// Canonical text: compact JSON with sorted keys, trailing newline.
std::string canonical(const json& j);

// --- PoseFileV1 ------------------------------------------------------------

json pose_sequence_to_json(const PoseSequence& seq);
// Validates every PoseSequence invariant. Errors carry a JSON pointer.
PoseSequence pose_sequence_from_json(const json& j, bool lax = false);
PoseSequence load_pose_sequence(const std::string& path, bool lax = false);
void save_pose_sequence(const std::string& path, const PoseSequence& seq);

json frame_to_json(const PoseFrame& f);

// --- GraphFileV1 -----------------------------------------------------------

inline constexpr std::uint8_t kGraphFormatVersion = 1;

// Hash of the graph's provenance snapshot; stale caches fail to match.
std::uint64_t graph_config_hash(const MotionGraph& g);

json graph_to_json(const MotionGraph& g);
MotionGraph graph_from_json(const json& j, bool lax = false);

// Little-endian layout:
//   u8  version (= 1)
//   u64 payload length in bytes
//   payload:
//     u32 node_count
//     f64 tau
//     u64 config hash
//     u32 provenance length, then that many UTF-8 bytes
//     u32 synthetic edge count, then (u32 from, u32 to, f64 weight) each
//     u32 pruned count, then u32 node ids
std::vector<std::uint8_t> encode_graph(const MotionGraph& g);
MotionGraph decode_graph(std::span<const std::uint8_t> bytes);

// Binary unless the path ends in ".json".
void save_graph(const std::string& path, const MotionGraph& g);
MotionGraph load_graph(const std::string& path);

// --- ConditionFileV1 -------------------------------------------------------

struct ConditionFile {
  ConditionTrack track;
  std::optional<TagTrack> source_tags;
  std::optional<std::size_t> frames;  // explicit T; otherwise duration * fps
  std::string searcher = "dp";        // "dp" or "beam"
  std::size_t beam_width = 64;
  KeyframeOptions keyframe;
};

// Fills defaults from `cfg`; the structural penalty defaults to 0.1 * tau.
ConditionFile condition_from_json(const json& j, const EngineConfig& cfg, double tau,
                                  bool lax = false);
// Canonical echo with every default resolved.
json condition_to_json(const ConditionFile& c);

json beat_track_to_json(const BeatTrack& b);
BeatTrack beat_track_from_json(const json& j, const std::string& ptr = "");
json tag_track_to_json(const TagTrack& t);
TagTrack tag_track_from_json(const json& j, const std::string& ptr = "");

// --- Result and report payloads -------------------------------------------

json search_result_to_json(const SearchResult& r);
json timeline_to_json(const BlendedTimeline& t);

// FrameArray video file: {"max_value": M, "frames": [{"shape": [...], "data": [...]}]}.
std::vector<FrameArray> load_video(const std::string& path);

// --- Synthetic corpora -----------------------------------------------------

enum class CorpusKind { kLoop, kFigureEight, kPiecewiseLinear, kSinusoid, kChain };

struct CorpusSpec {
  CorpusKind kind = CorpusKind::kLoop;
  std::size_t frames = 240;
  double fps = 24.0;
  std::size_t joints = 4;
  std::size_t period_frames = 48;  // loop / figure-eight period
  double period_s = 1.0;           // sinusoid speed period
  double amplitude = 0.3;
  std::uint64_t seed = 1;
};

struct Corpus {
  PoseSequence sequence;
  json annotations;  // {"kind", "seed", "beats_s", "loop_closures"}
};

std::optional<CorpusKind> corpus_kind_from_string(const std::string& s);
std::string to_string(CorpusKind k);

Corpus generate_synthetic_corpus(const CorpusSpec& spec);

}  // namespace mgraph::io
