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
#include <variant>
#include <vector>

#include "mgraph/graph.hpp"
#include "mgraph/pose.hpp"
#include "mgraph/search.hpp"

namespace mgraph {

// Produces n_mid frames strictly between a and b. Any learned inbetweening
// model plugs in here.
using Inbetweener =
    std::function<std::vector<PoseFrame>(const PoseFrame& a, const PoseFrame& b, std::size_t n_mid)>;

inline constexpr std::size_t kDefaultTransitionFrames = 12;

struct Retrieved {
  NodeId source = 0;
  bool operator==(const Retrieved&) const = default;
};

struct Blended {
  NodeId from = 0;
  NodeId to = 0;
  double u = 0.0;
  bool operator==(const Blended&) const = default;
};

struct Resampled {
  double position = 0.0;  // fractional path position
  NodeId lower = 0;       // source frame at floor(position)
  NodeId upper = 0;       // source frame at ceil(position)
  bool operator==(const Resampled&) const = default;
};

using Provenance = std::variant<Retrieved, Blended, Resampled>;

struct BlendedTimeline {
  PoseSequence frames;  // renumbered 0..T-1 at the source fps
  std::vector<Provenance> provenance;
};

// Joint-wise a + u (b - a) over local, global and (when both carry them) 2D
// joints. u = 0 and u = 1 return a and b exactly.
PoseFrame lerp_frame(const PoseFrame& a, const PoseFrame& b, double u);

// Frame k of n_mid (1-based) sits at u = k / (n_mid + 1).
std::vector<PoseFrame> blend_linear(const PoseFrame& a, const PoseFrame& b,
                                    std::size_t n_mid = kDefaultTransitionFrames);

Inbetweener linear_inbetweener();

struct BlendOptions {
  std::size_t half_window = kDefaultTransitionFrames / 2;  // frames each side
};

// Gathers the path's source frames and replaces a window around every
// transition with inbetweener output. Windows that overlap merge into one
// span blended end to end. Keyframe results are then resampled segment by
// segment to their target lengths; pinned frames are never blended.
BlendedTimeline apply_blending(const SearchResult& result, const PoseSequence& seq,
                               const Inbetweener& inbetweener = linear_inbetweener(),
                               const BlendOptions& options = {});

// Uniform time warp: output t samples position t (S-1)/(T-1).
std::vector<PoseFrame> resample_path(const std::vector<PoseFrame>& frames,
                                     std::size_t target_len);

struct FeasibilityReport {
  double fraction = 0.0;
  std::size_t windows = 0;
  std::size_t passed = 0;
  double scale = 1.0;               // root-height normaliser
  std::vector<double> deviations;   // per window
};

// Splits the sequence into consecutive windows of `window` interior frames
// (neighbouring windows share a boundary frame) and measures, in root-height
// units, the mean squared per-joint deviation of the linear blend of the
// boundary frames from the true interior global joints.
FeasibilityReport blend_feasibility_report(const PoseSequence& seq,
                                           std::size_t window = kDefaultTransitionFrames,
                                           double threshold = 0.001);

// Fraction of windows whose deviation is below threshold.
double blend_feasibility(const PoseSequence& seq, std::size_t window = kDefaultTransitionFrames,
                         double threshold = 0.001);

}  // namespace mgraph
