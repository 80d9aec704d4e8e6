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
#include <limits>
#include <vector>

#include "mgraph/pose.hpp"

namespace mgraph {

// H x W or H x W x C grid of samples in row-major order.
struct FrameArray {
  std::vector<std::size_t> shape;
  std::vector<double> data;
  double max_value = 255.0;  // MAX_I

  FrameArray() = default;
  FrameArray(std::vector<std::size_t> shape, std::vector<double> data, double max_value = 255.0);

  std::size_t size() const { return data.size(); }
};

// Returned by psnr() when the inputs are identical (MSE = 0).
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

// 10 log10(MAX_I^2 / MSE).
double psnr(const FrameArray& a, const FrameArray& b);

// Simplified MOVIE: (1/N) sum of squared frame-difference mismatches plus
// (1/N) sum of squared per-frame differences, both averaged over elements.
double movie_simplified(const std::vector<FrameArray>& gen, const std::vector<FrameArray>& ref);

// Mean pairwise L2 distance between flattened 2D joint vectors.
double motion_diversity(const std::vector<PoseFrame>& frames);

// Mean pair_distance between consecutive frames.
double frame_consistency(const std::vector<PoseFrame>& frames);

}  // namespace mgraph
