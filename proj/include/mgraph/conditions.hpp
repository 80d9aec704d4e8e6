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

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgraph/graph.hpp"
#include "mgraph/pose.hpp"

namespace mgraph {

enum class BeatSource { kMusicIngested, kMotionDerived };

struct BeatTrack {
  std::vector<double> beats_s;  // strictly increasing, >= 0
  BeatSource source = BeatSource::kMusicIngested;

  bool operator==(const BeatTrack&) const = default;
};

struct TagSpan {
  double start_s = 0.0;
  double end_s = 0.0;  // exclusive
  std::string tag;
  int order = 0;

  bool operator==(const TagSpan&) const = default;
};

struct TagTrack {
  std::vector<TagSpan> spans;  // sorted, non-overlapping

  // Span covering time t, or nullptr.
  const TagSpan* at(double t) const;

  bool operator==(const TagTrack&) const = default;
};

struct Keyframe {
  double target_time_s = 0.0;
  NodeId source_frame = 0;

  bool operator==(const Keyframe&) const = default;
};

struct ConditionWeights {
  double edge = 1.0;
  double beat = 0.0;
  double structural = 0.0;
  double tag = 0.0;
  double ext = 0.0;

  bool operator==(const ConditionWeights&) const = default;
};

// Distance between target frame t and source frame v; must be >= 0.
using FeatureDistance = std::function<double(std::size_t t, NodeId v)>;

// Per-frame external features. When `custom` is set it replaces the default
// Euclidean distance between target[t] and source[v].
struct ExternalFeatures {
  std::vector<std::vector<double>> target;
  std::vector<std::vector<double>> source;
  FeatureDistance custom;

  double distance(std::size_t t, NodeId v) const;
};

struct ConditionTrack {
  double duration_s = 0.0;
  std::optional<BeatTrack> music_beats;
  std::optional<TagTrack> tags;
  std::optional<ExternalFeatures> external;
  std::vector<Keyframe> keyframes;
  ConditionWeights weights;

  double sigma_s = 0.1;
  std::size_t structural_window = 48;
  double structural_penalty = 0.0;  // per occurrence; 0.1 * tau by default
  double tag_unit = 1.0;
  double big_m = 1e6;
};

// Source-side annotations the cost terms compare against.
struct SourceAnnotations {
  double fps = 24.0;
  std::vector<double> frame_times;
  BeatTrack motion_beats;
  std::optional<TagTrack> tags;
};

SourceAnnotations annotate_source(const PoseSequence& seq, double min_beat_separation_s,
                                  std::optional<TagTrack> tags = std::nullopt);

void validate_beats(const BeatTrack& track);
void validate_tags(const TagTrack& track);

// Beats at local minima of the velocity profile, thinned so beats are at
// least `min_separation_s` apart. Flat valleys count once, at their centre.
BeatTrack extract_motion_beats(const PoseSequence& seq, double min_separation_s);

// Mean over music beats of exp(-d^2 / 2 sigma^2), d = distance to the nearest
// motion beat. 1.0 for an empty music track, 0.0 if only motion is empty.
double beat_alignment_score(const BeatTrack& motion_beats, const BeatTrack& music_beats,
                            double sigma_s);

// Coefficient of variation of inter-beat intervals; 0 for fewer than 3 beats.
double beat_interval_cv(const BeatTrack& track);

// penalty * (occurrences of candidate in the last `window` prefix entries).
double structural_penalty(std::span<const NodeId> path_prefix, NodeId candidate,
                          std::size_t window, double penalty);

// 0 when the query has no span at target_time_s. big_m when the global tags
// differ or the source frame is untagged; otherwise |order difference| * unit.
double tag_cost(double target_time_s, double candidate_time_s, const TagTrack& source_tags,
                const TagTrack& query, double unit = 1.0, double big_m = 1e6);

// Weighted per-term costs of one (target frame, source frame) choice.
struct CostBreakdown {
  double edge = 0.0;
  double beat = 0.0;
  double structural = 0.0;
  double tag = 0.0;
  double ext = 0.0;

  double total() const { return edge + beat + structural + tag + ext; }
  CostBreakdown& operator+=(const CostBreakdown& o);
};

struct SearchContext {
  const SourceAnnotations* source = nullptr;
  double target_fps = 24.0;
  std::span<const NodeId> path_prefix;
};

// Per-frame condition cost shared by all searchers (excludes the edge term).
class CostModel {
 public:
  CostModel(ConditionTrack track, SourceAnnotations source, double target_fps);

  const ConditionTrack& track() const { return track_; }
  const SourceAnnotations& source() const { return source_; }
  double target_fps() const { return target_fps_; }
  double target_time(std::size_t t) const { return static_cast<double>(t) / target_fps_; }

  // 1 - local beat agreement between target frame t and source frame v.
  //
  // With d_music the distance from t to its nearest music beat and d_motion
  // the distance from v to its nearest motion beat, agreement is 1 when both
  // are within sigma. Otherwise the unmet demand is
  //   k(d_music) * (1 - k(d_motion)),  k(d) = exp(-d^2 / 2 sigma^2),
  // so target frames away from music beats cost nothing and frames on a
  // music beat pay unless the source frame sits on a motion beat.
  double beat_disagreement(std::size_t t, NodeId v) const;

  // Unweighted tag cost, or 0 without a query tag track.
  double tag_term(std::size_t t, NodeId v) const;

  // Weighted terms excluding the structural penalty and the edge.
  CostBreakdown markov_terms(std::size_t t, NodeId v) const;

  // True when the tag term forbids v at step t (big-M mismatch, w_tag > 0).
  bool forbidden(std::size_t t, NodeId v) const;

  // Weighted structural term for choosing v after `prefix`.
  double structural_term(std::span<const NodeId> prefix, NodeId v) const;

  bool has_structural() const {
    return track_.weights.structural > 0.0 && track_.structural_penalty > 0.0 &&
           track_.structural_window > 0;
  }

  double edge_term(const Arc& arc) const { return track_.weights.edge * arc.weight; }

  // Streaming input: feature vector of the next target frame.
  void append_target_feature(std::vector<double> feature);

 private:
  ConditionTrack track_;
  SourceAnnotations source_;
  double target_fps_;
  std::vector<double> source_beat_kernel_;  // k(d_motion) per source frame
  std::vector<char> source_on_beat_;        // d_motion <= sigma
};

// w_beat (1 - agreement) + w_struct structural + w_tag tag + w_ext feature
// distance for target frame t and source node v.
double frame_condition_cost(std::size_t t, NodeId v, const ConditionTrack& track,
                            const SearchContext& ctx);

}  // namespace mgraph
