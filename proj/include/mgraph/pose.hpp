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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mgraph {

using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

// One frame of skeleton pose. Positions are in meters.
struct PoseFrame {
  std::size_t frame_index = 0;
  double time_s = 0.0;
  std::vector<Vec3> joints_local;   // root-relative
  std::vector<Vec3> joints_global;  // world space
  std::optional<std::vector<Vec2>> joints_2d;  // pixels; metrics/UI only

  std::size_t joint_count() const { return joints_local.size(); }

  bool operator==(const PoseFrame&) const = default;
};

struct Skeleton {
  std::vector<std::string> names;
  std::vector<int> parents;  // parents[0] == -1

  std::size_t joint_count() const { return parents.size(); }

  bool operator==(const Skeleton&) const = default;
};

struct PoseSequence {
  std::vector<PoseFrame> frames;
  double fps = 24.0;
  Skeleton skeleton;

  std::size_t size() const { return frames.size(); }

  bool operator==(const PoseSequence&) const = default;
};

// Throws Error(kStructural) unless `parents` forms a tree rooted at joint 0.
void validate_skeleton(const Skeleton& skeleton);

// Checks every PoseSequence invariant: tree skeleton, >= 2 frames, constant
// joint count matching the skeleton, finite coordinates, dense frame indices,
// strictly increasing time stamps.
void validate_sequence(const PoseSequence& seq);

double local_distance(const PoseFrame& a, const PoseFrame& b);
double global_distance(const PoseFrame& a, const PoseFrame& b);

// Edge-admission quantity: local_distance + global_distance.
double pair_distance(const PoseFrame& a, const PoseFrame& b);

// v[t] = pair_distance(frames[t], frames[t+1]) * fps, length N-1.
std::vector<double> velocity_profile(const PoseSequence& seq);

}  // namespace mgraph
