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

#include "mgraph/blend.hpp"

#include <algorithm>
#include <cmath>

#include "mgraph/error.hpp"

namespace mgraph {
namespace {

template <std::size_t D>
std::vector<std::array<double, D>> lerp_joints(const std::vector<std::array<double, D>>& a,
                                               const std::vector<std::array<double, D>>& b,
                                               double u) {
  if (a.size() != b.size()) fail(ErrorKind::kStructural, "blend: joint count mismatch");
  std::vector<std::array<double, D>> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t c = 0; c < D; ++c) out[j][c] = a[j][c] + u * (b[j][c] - a[j][c]);
  }
  return out;
}

struct Window {
  std::size_t lb;  // left boundary (kept)
  std::size_t rb;  // right boundary (kept)
};

PoseFrame frame_at(const PoseFrame& f, std::size_t index, double fps) {
  PoseFrame out = f;
  out.frame_index = index;
  out.time_s = static_cast<double>(index) / fps;
  return out;
}

}  // namespace

PoseFrame lerp_frame(const PoseFrame& a, const PoseFrame& b, double u) {
  if (u == 0.0) return a;
  if (u == 1.0) return b;
  PoseFrame out;
  out.frame_index = a.frame_index;
  out.time_s = a.time_s + u * (b.time_s - a.time_s);
  out.joints_local = lerp_joints(a.joints_local, b.joints_local, u);
  out.joints_global = lerp_joints(a.joints_global, b.joints_global, u);
  if (a.joints_2d && b.joints_2d) out.joints_2d = lerp_joints(*a.joints_2d, *b.joints_2d, u);
  return out;
}

std::vector<PoseFrame> blend_linear(const PoseFrame& a, const PoseFrame& b, std::size_t n_mid) {
  if (n_mid == 0) fail(ErrorKind::kStructural, "blend needs n_mid >= 1");
  if (a.joints_local.size() != b.joints_local.size() ||
      a.joints_global.size() != b.joints_global.size()) {
    fail(ErrorKind::kStructural, "blend: incompatible skeletons");
  }
  std::vector<PoseFrame> out;
  out.reserve(n_mid);
  for (std::size_t k = 1; k <= n_mid; ++k) {
    out.push_back(lerp_frame(a, b, static_cast<double>(k) / static_cast<double>(n_mid + 1)));
  }
  return out;
}

Inbetweener linear_inbetweener() {
  return [](const PoseFrame& a, const PoseFrame& b, std::size_t n_mid) {
    return blend_linear(a, b, n_mid);
  };
}

std::vector<PoseFrame> resample_path(const std::vector<PoseFrame>& frames,
                                     std::size_t target_len) {
  if (target_len < 2) fail(ErrorKind::kStructural, "resample target length must be >= 2");
  if (frames.empty()) fail(ErrorKind::kStructural, "resample needs at least one frame");
  const std::size_t s = frames.size();
  std::vector<PoseFrame> out;
  out.reserve(target_len);
  for (std::size_t t = 0; t < target_len; ++t) {
    const double p =
        static_cast<double>(t * (s - 1)) / static_cast<double>(target_len - 1);
    const auto lo = static_cast<std::size_t>(std::floor(p));
    const std::size_t hi = std::min(lo + 1, s - 1);
    PoseFrame f = lerp_frame(frames[lo], frames[hi], p - static_cast<double>(lo));
    f.frame_index = t;
    out.push_back(std::move(f));
  }
  return out;
}

BlendedTimeline apply_blending(const SearchResult& result, const PoseSequence& seq,
                               const Inbetweener& inbetweener, const BlendOptions& options) {
  const auto& path = result.path;
  const std::size_t total = path.size();
  std::vector<PoseFrame> frames;
  std::vector<Provenance> prov;
  frames.reserve(total);
  for (NodeId v : path) {
    if (v >= seq.frames.size()) fail(ErrorKind::kStructural, "path references a missing frame");
    frames.push_back(seq.frames[v]);
    prov.emplace_back(Retrieved{v});
  }

  // Pinned frames of a keyframe search stay untouched.
  std::vector<std::size_t> anchors;
  for (const Segment& s : result.segments) {
    anchors.push_back(s.path_begin);
    anchors.push_back(s.path_end);
  }
  std::sort(anchors.begin(), anchors.end());

  const std::size_t h = options.half_window;
  std::vector<Window> windows;
  for (const Transition& tr : result.transitions) {
    const std::size_t p = tr.position;
    Window w{p > h ? p - h - 1 : 0, std::min(total - 1, p + h)};
    auto right = std::lower_bound(anchors.begin(), anchors.end(), p);
    if (right != anchors.end()) w.rb = std::min(w.rb, *right);
    if (right != anchors.begin()) w.lb = std::max(w.lb, *std::prev(right));
    if (!windows.empty() && w.lb < windows.back().rb) {
      windows.back().rb = std::max(windows.back().rb, w.rb);
    } else {
      windows.push_back(w);
    }
  }

  for (const Window& w : windows) {
    if (w.rb < w.lb + 2) continue;
    const std::size_t n_mid = w.rb - w.lb - 1;
    const std::vector<PoseFrame> mids = inbetweener(frames[w.lb], frames[w.rb], n_mid);
    if (mids.size() != n_mid) {
      fail(ErrorKind::kStructural, "inbetweener returned the wrong number of frames");
    }
    for (std::size_t k = 0; k < n_mid; ++k) {
      frames[w.lb + 1 + k] = mids[k];
      prov[w.lb + 1 + k] = Blended{path[w.lb], path[w.rb],
                                   static_cast<double>(k + 1) / static_cast<double>(n_mid + 1)};
    }
  }

  BlendedTimeline out;
  out.frames.fps = seq.fps;
  out.frames.skeleton = seq.skeleton;

  if (result.segments.empty()) {
    for (std::size_t i = 0; i < total; ++i) {
      out.frames.frames.push_back(frame_at(frames[i], i, seq.fps));
    }
    out.provenance = std::move(prov);
    return out;
  }

  // Keyframe result: warp every segment to its target length.
  auto push = [&](const PoseFrame& f, Provenance p) {
    out.frames.frames.push_back(frame_at(f, out.frames.frames.size(), seq.fps));
    out.provenance.push_back(std::move(p));
  };
  push(frames[result.segments.front().path_begin], prov[result.segments.front().path_begin]);
  for (const Segment& s : result.segments) {
    if (s.target_len == 0) continue;
    const std::vector<PoseFrame> span(frames.begin() + s.path_begin,
                                      frames.begin() + s.path_end + 1);
    const std::vector<PoseFrame> warped = resample_path(span, s.target_len + 1);
    for (std::size_t t = 1; t < warped.size(); ++t) {
      const double local = static_cast<double>(t * s.hops) / static_cast<double>(s.target_len);
      const auto lo = static_cast<std::size_t>(std::floor(local));
      if (static_cast<double>(lo) == local) {
        push(warped[t], prov[s.path_begin + lo]);
      } else {
        push(warped[t], Resampled{static_cast<double>(s.path_begin) + local,
                                  path[s.path_begin + lo], path[s.path_begin + lo + 1]});
      }
    }
  }
  return out;
}

FeasibilityReport blend_feasibility_report(const PoseSequence& seq, std::size_t window,
                                           double threshold) {
  if (window == 0) fail(ErrorKind::kStructural, "feasibility window must be >= 1");
  const auto& fr = seq.frames;
  if (fr.size() < window + 2) {
    fail(ErrorKind::kStructural, "sequence shorter than one feasibility window");
  }
  FeasibilityReport rep;
  double height = 0.0;
  for (const auto& f : fr) height += std::abs(f.joints_global[0][1]);
  height /= static_cast<double>(fr.size());
  rep.scale = height > 1e-9 ? height : 1.0;
  const double inv_scale2 = 1.0 / (rep.scale * rep.scale);

  const std::size_t joints = fr[0].joints_global.size();
  for (std::size_t s = 0; s + window + 1 < fr.size(); s += window + 1) {
    const PoseFrame& a = fr[s];
    const PoseFrame& b = fr[s + window + 1];
    double sum = 0.0;
    for (std::size_t k = 1; k <= window; ++k) {
      const double u = static_cast<double>(k) / static_cast<double>(window + 1);
      const PoseFrame& truth = fr[s + k];
      for (std::size_t j = 0; j < joints; ++j) {
        for (int c = 0; c < 3; ++c) {
          const double pred = a.joints_global[j][c] + u * (b.joints_global[j][c] - a.joints_global[j][c]);
          const double d = pred - truth.joints_global[j][c];
          sum += d * d;
        }
      }
    }
    const double dev = sum * inv_scale2 / static_cast<double>(window * joints);
    rep.deviations.push_back(dev);
    ++rep.windows;
    if (dev < threshold) ++rep.passed;
  }
  rep.fraction = static_cast<double>(rep.passed) / static_cast<double>(rep.windows);
  return rep;
}

double blend_feasibility(const PoseSequence& seq, std::size_t window, double threshold) {
  return blend_feasibility_report(seq, window, threshold).fraction;
}

}  // namespace mgraph
