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

#include "mgraph/pose.hpp"

#include <cmath>
#include <span>
#include <string>

#include "mgraph/error.hpp"

namespace mgraph {
namespace {

double flat_l2(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::kStructural,
         "joint count mismatch: " + std::to_string(a.size()) + " vs " +
             std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (int c = 0; c < 3; ++c) {
      const double d = a[j][c] - b[j][c];
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

bool all_finite(std::span<const Vec3> joints) {
  for (const auto& p : joints) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) {
      return false;
    }
  }
  return true;
}

}  // namespace

void validate_skeleton(const Skeleton& skeleton) {
  const std::size_t n = skeleton.parents.size();
  if (n == 0) fail(ErrorKind::kStructural, "skeleton has no joints");
  if (!skeleton.names.empty() && skeleton.names.size() != n) {
    fail(ErrorKind::kStructural, "skeleton names/parents length mismatch");
  }
  if (skeleton.parents[0] != -1) {
    fail(ErrorKind::kStructural, "skeleton not a tree: joint 0 must be the root");
  }
  for (std::size_t j = 1; j < n; ++j) {
    const int p = skeleton.parents[j];
    if (p < 0 || static_cast<std::size_t>(p) >= n) {
      fail(ErrorKind::kStructural,
           "skeleton not a tree: joint " + std::to_string(j) +
               " has invalid parent " + std::to_string(p));
    }
  }
  // Every joint must reach the root within n steps; otherwise it sits on a
  // cycle or hangs off one.
  for (std::size_t j = 1; j < n; ++j) {
    int cur = static_cast<int>(j);
    std::size_t steps = 0;
    while (cur != 0 && steps <= n) {
      cur = skeleton.parents[cur];
      ++steps;
    }
    if (cur != 0) {
      fail(ErrorKind::kStructural,
           "skeleton not a tree: joint " + std::to_string(j) + " is on a cycle");
    }
  }
}

void validate_sequence(const PoseSequence& seq) {
  if (!(seq.fps > 0.0) || !std::isfinite(seq.fps)) {
    fail(ErrorKind::kStructural, "fps must be positive");
  }
  validate_skeleton(seq.skeleton);
  if (seq.frames.size() < 2) {
    fail(ErrorKind::kStructural, "a pose sequence needs at least 2 frames");
  }
  const std::size_t joints = seq.skeleton.joint_count();
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const PoseFrame& f = seq.frames[i];
    const std::string where = "frame " + std::to_string(i);
    if (f.frame_index != i) {
      fail(ErrorKind::kStructural, where + ": frame_index must be dense 0..N-1");
    }
    if (f.joints_local.size() != joints || f.joints_global.size() != joints) {
      fail(ErrorKind::kStructural, where + ": joint count differs from skeleton");
    }
    if (f.joints_2d && f.joints_2d->size() != joints) {
      fail(ErrorKind::kStructural, where + ": joints_2d count differs from skeleton");
    }
    if (!all_finite(f.joints_local) || !all_finite(f.joints_global) ||
        !std::isfinite(f.time_s)) {
      fail(ErrorKind::kStructural, where + ": non-finite coordinate");
    }
    if (f.time_s < 0.0) fail(ErrorKind::kStructural, where + ": negative time");
    if (i > 0 && !(f.time_s > seq.frames[i - 1].time_s)) {
      fail(ErrorKind::kStructural, where + ": time stamps must strictly increase");
    }
  }
}

double local_distance(const PoseFrame& a, const PoseFrame& b) {
  return flat_l2(a.joints_local, b.joints_local);
}

double global_distance(const PoseFrame& a, const PoseFrame& b) {
  return flat_l2(a.joints_global, b.joints_global);
}

double pair_distance(const PoseFrame& a, const PoseFrame& b) {
  return local_distance(a, b) + global_distance(a, b);
}

std::vector<double> velocity_profile(const PoseSequence& seq) {
  if (seq.frames.size() < 2) {
    fail(ErrorKind::kStructural, "velocity profile needs at least 2 frames");
  }
  std::vector<double> v(seq.frames.size() - 1);
  for (std::size_t t = 0; t + 1 < seq.frames.size(); ++t) {
    v[t] = pair_distance(seq.frames[t], seq.frames[t + 1]) * seq.fps;
  }
  return v;
}

}  // namespace mgraph
