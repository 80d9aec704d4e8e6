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

#include "mgraph/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mgraph/error.hpp"

namespace mgraph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double nearest_gap(const std::vector<double>& sorted, double t) {
  if (sorted.empty()) return kInf;
  auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  double best = kInf;
  if (it != sorted.end()) best = *it - t;
  if (it != sorted.begin()) best = std::min(best, t - *std::prev(it));
  return best;
}

double gaussian(double d, double sigma) {
  if (!std::isfinite(d)) return 0.0;
  return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

}  // namespace

const TagSpan* TagTrack::at(double t) const {
  auto it = std::upper_bound(spans.begin(), spans.end(), t,
                             [](double x, const TagSpan& s) { return x < s.start_s; });
  if (it == spans.begin()) return nullptr;
  --it;
  return t < it->end_s ? &*it : nullptr;
}

double ExternalFeatures::distance(std::size_t t, NodeId v) const {
  if (custom) return custom(t, v);
  if (t >= target.size() || v >= source.size()) return 0.0;
  const auto& a = target[t];
  const auto& b = source[v];
  if (a.size() != b.size()) {
    fail(ErrorKind::kStructural, "external feature dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(sum);
}

void validate_beats(const BeatTrack& track) {
  for (std::size_t i = 0; i < track.beats_s.size(); ++i) {
    const double b = track.beats_s[i];
    if (!std::isfinite(b) || b < 0.0) {
      fail(ErrorKind::kSchema, "beat times must be finite and >= 0", "/beats/" + std::to_string(i));
    }
    if (i > 0 && !(b > track.beats_s[i - 1])) {
      fail(ErrorKind::kSchema, "beat times must be strictly increasing",
           "/beats/" + std::to_string(i));
    }
  }
}

void validate_tags(const TagTrack& track) {
  for (std::size_t i = 0; i < track.spans.size(); ++i) {
    const TagSpan& s = track.spans[i];
    if (!(s.start_s < s.end_s)) {
      fail(ErrorKind::kSchema, "tag span needs start < end", "/tags/" + std::to_string(i));
    }
    if (s.order < 0) {
      fail(ErrorKind::kSchema, "tag order must be >= 0", "/tags/" + std::to_string(i) + "/order");
    }
    if (i > 0 && s.start_s < track.spans[i - 1].end_s) {
      fail(ErrorKind::kSchema, "tag spans overlap or are unsorted",
           "/tags/" + std::to_string(i));
    }
  }
}

SourceAnnotations annotate_source(const PoseSequence& seq, double min_beat_separation_s,
                                  std::optional<TagTrack> tags) {
  SourceAnnotations out;
  out.fps = seq.fps;
  out.frame_times.reserve(seq.frames.size());
  for (const auto& f : seq.frames) out.frame_times.push_back(f.time_s);
  if (seq.frames.size() >= 3) {
    out.motion_beats = extract_motion_beats(seq, min_beat_separation_s);
  } else {
    out.motion_beats.source = BeatSource::kMotionDerived;
  }
  out.tags = std::move(tags);
  return out;
}

BeatTrack extract_motion_beats(const PoseSequence& seq, double min_separation_s) {
  if (seq.frames.size() < 3) {
    fail(ErrorKind::kStructural, "beat extraction needs at least 3 frames");
  }
  const std::vector<double> v = velocity_profile(seq);
  const double peak = *std::max_element(v.begin(), v.end());
  // Values this close are one plateau; absorbs rounding noise in
  // constant-velocity motion.
  const double tol = 1e-9 * std::max(peak, 1e-12);

  struct Run {
    std::size_t first, last;
    double value;
  };
  std::vector<Run> runs;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (!runs.empty() && std::abs(v[t] - runs.back().value) <= tol) {
      runs.back().last = t;
    } else {
      runs.push_back({t, t, v[t]});
    }
  }

  struct Candidate {
    double time, depth;
  };
  std::vector<Candidate> candidates;
  const auto& fr = seq.frames;
  for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
    if (runs[r].value < runs[r - 1].value && runs[r].value < runs[r + 1].value) {
      // Velocity sample t sits between frames t and t+1.
      const double start = fr[runs[r].first].time_s;
      const double end = fr[runs[r].last + 1].time_s;
      candidates.push_back({0.5 * (start + end), runs[r].value});
    }
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].depth < candidates[b].depth;
  });
  BeatTrack track;
  track.source = BeatSource::kMotionDerived;
  for (std::size_t idx : order) {
    const double t = candidates[idx].time;
    const bool clear = std::all_of(track.beats_s.begin(), track.beats_s.end(),
                                   [&](double b) { return std::abs(b - t) >= min_separation_s; });
    if (clear) track.beats_s.push_back(t);
  }
  std::sort(track.beats_s.begin(), track.beats_s.end());
  return track;
}

double beat_alignment_score(const BeatTrack& motion_beats, const BeatTrack& music_beats,
                            double sigma_s) {
  if (!(sigma_s > 0.0)) fail(ErrorKind::kStructural, "sigma must be positive");
  if (music_beats.beats_s.empty()) return 1.0;
  if (motion_beats.beats_s.empty()) return 0.0;
  double sum = 0.0;
  for (double b : music_beats.beats_s) {
    sum += gaussian(nearest_gap(motion_beats.beats_s, b), sigma_s);
  }
  return sum / static_cast<double>(music_beats.beats_s.size());
}

double beat_interval_cv(const BeatTrack& track) {
  const auto& b = track.beats_s;
  if (b.size() < 3) return 0.0;
  std::vector<double> gaps;
  for (std::size_t i = 1; i < b.size(); ++i) gaps.push_back(b[i] - b[i - 1]);
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  var /= gaps.size();
  return mean > 0.0 ? std::sqrt(var) / mean : 0.0;
}

double structural_penalty(std::span<const NodeId> path_prefix, NodeId candidate,
                          std::size_t window, double penalty) {
  const std::size_t w = std::min(window, path_prefix.size());
  const auto recent = path_prefix.last(w);
  return penalty * static_cast<double>(std::count(recent.begin(), recent.end(), candidate));
}

double tag_cost(double target_time_s, double candidate_time_s, const TagTrack& source_tags,
                const TagTrack& query, double unit, double big_m) {
  const TagSpan* want = query.at(target_time_s);
  if (want == nullptr) return 0.0;
  const TagSpan* have = source_tags.at(candidate_time_s);
  if (have == nullptr || have->tag != want->tag) return big_m;
  return unit * std::abs(static_cast<double>(have->order) - static_cast<double>(want->order));
}

CostBreakdown& CostBreakdown::operator+=(const CostBreakdown& o) {
  edge += o.edge;
  beat += o.beat;
  structural += o.structural;
  tag += o.tag;
  ext += o.ext;
  return *this;
}

CostModel::CostModel(ConditionTrack track, SourceAnnotations source, double target_fps)
    : track_(std::move(track)), source_(std::move(source)), target_fps_(target_fps) {
  if (!(target_fps_ > 0.0)) fail(ErrorKind::kStructural, "target fps must be positive");
  if (!(track_.sigma_s > 0.0)) fail(ErrorKind::kStructural, "sigma must be positive");
  const auto& w = track_.weights;
  for (double x : {w.edge, w.beat, w.structural, w.tag, w.ext}) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      fail(ErrorKind::kStructural, "condition weights must be finite and >= 0");
    }
  }
  source_beat_kernel_.resize(source_.frame_times.size());
  source_on_beat_.resize(source_.frame_times.size());
  for (std::size_t v = 0; v < source_.frame_times.size(); ++v) {
    const double d = nearest_gap(source_.motion_beats.beats_s, source_.frame_times[v]);
    source_beat_kernel_[v] = gaussian(d, track_.sigma_s);
    source_on_beat_[v] = d <= track_.sigma_s;
  }
}

double CostModel::beat_disagreement(std::size_t t, NodeId v) const {
  if (!track_.music_beats || track_.music_beats->beats_s.empty()) return 0.0;
  const double d_music = nearest_gap(track_.music_beats->beats_s, target_time(t));
  const bool on_beat = v < source_on_beat_.size() && source_on_beat_[v];
  if (d_music <= track_.sigma_s && on_beat) return 0.0;
  const double motion_k = v < source_beat_kernel_.size() ? source_beat_kernel_[v] : 0.0;
  return gaussian(d_music, track_.sigma_s) * (1.0 - motion_k);
}

double CostModel::tag_term(std::size_t t, NodeId v) const {
  if (!track_.tags) return 0.0;
  static const TagTrack kEmpty;
  const TagTrack& src = source_.tags ? *source_.tags : kEmpty;
  const double src_time = v < source_.frame_times.size() ? source_.frame_times[v] : 0.0;
  return tag_cost(target_time(t), src_time, src, *track_.tags, track_.tag_unit, track_.big_m);
}

CostBreakdown CostModel::markov_terms(std::size_t t, NodeId v) const {
  CostBreakdown c;
  const auto& w = track_.weights;
  if (w.beat > 0.0) c.beat = w.beat * beat_disagreement(t, v);
  if (w.tag > 0.0) c.tag = w.tag * tag_term(t, v);
  if (w.ext > 0.0 && track_.external) {
    const double d = track_.external->distance(t, v);
    if (!(d >= 0.0)) fail(ErrorKind::kStructural, "external feature distance must be >= 0");
    c.ext = w.ext * d;
  }
  return c;
}

bool CostModel::forbidden(std::size_t t, NodeId v) const {
  return track_.weights.tag > 0.0 && track_.tags && tag_term(t, v) >= track_.big_m;
}

double CostModel::structural_term(std::span<const NodeId> prefix, NodeId v) const {
  if (!has_structural()) return 0.0;
  return track_.weights.structural *
         structural_penalty(prefix, v, track_.structural_window, track_.structural_penalty);
}

void CostModel::append_target_feature(std::vector<double> feature) {
  if (!track_.external) track_.external.emplace();
  track_.external->target.push_back(std::move(feature));
}

double frame_condition_cost(std::size_t t, NodeId v, const ConditionTrack& track,
                            const SearchContext& ctx) {
  SourceAnnotations source = ctx.source ? *ctx.source : SourceAnnotations{};
  const CostModel model(track, std::move(source), ctx.target_fps);
  return model.markov_terms(t, v).total() + model.structural_term(ctx.path_prefix, v);
}

}  // namespace mgraph
