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

#include "mgraph/metrics.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "mgraph/error.hpp"

namespace mgraph {
namespace {

void check_compatible(const FrameArray& a, const FrameArray& b) {
  if (a.shape != b.shape || a.data.size() != b.data.size()) {
    fail(ErrorKind::kStructural, "frame arrays differ in shape");
  }
  if (a.max_value != b.max_value) {
    fail(ErrorKind::kStructural, "frame arrays differ in max_value");
  }
  if (a.data.empty()) fail(ErrorKind::kStructural, "empty frame array");
}

}  // namespace

FrameArray::FrameArray(std::vector<std::size_t> shape_in, std::vector<double> data_in,
                       double max_value_in)
    : shape(std::move(shape_in)), data(std::move(data_in)), max_value(max_value_in) {
  if (shape.size() != 2 && shape.size() != 3) {
    fail(ErrorKind::kStructural, "frame array must be 2-D or 3-D");
  }
  const std::size_t n =
      std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  if (n != data.size()) fail(ErrorKind::kStructural, "frame array shape/data size mismatch");
  for (double x : data) {
    if (!std::isfinite(x)) fail(ErrorKind::kStructural, "frame array holds non-finite values");
  }
}

double psnr(const FrameArray& a, const FrameArray& b) {
  check_compatible(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(a.data.size());
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(a.max_value * a.max_value / mse);
}

double movie_simplified(const std::vector<FrameArray>& gen, const std::vector<FrameArray>& ref) {
  if (gen.size() != ref.size()) fail(ErrorKind::kStructural, "videos differ in length");
  if (gen.size() < 2) fail(ErrorKind::kStructural, "MOVIE needs at least 2 frames");
  for (std::size_t t = 0; t < gen.size(); ++t) {
    check_compatible(gen[t], ref[t]);
    check_compatible(gen[t], gen[0]);
  }
  const std::size_t n = gen.size();
  const std::size_t elems = gen[0].data.size();
  double temporal = 0.0, spatial = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < elems; ++i) {
      const double s = ref[t].data[i] - gen[t].data[i];
      spatial += s * s;
      if (t + 1 < n) {
        const double d = (ref[t + 1].data[i] - ref[t].data[i]) - (gen[t + 1].data[i] - gen[t].data[i]);
        temporal += d * d;
      }
    }
  }
  const double denom = static_cast<double>(n) * static_cast<double>(elems);
  return temporal / denom + spatial / denom;
}

double motion_diversity(const std::vector<PoseFrame>& frames) {
  if (frames.size() < 2) return 0.0;
  for (const auto& f : frames) {
    if (!f.joints_2d) fail(ErrorKind::kStructural, "motion diversity needs joints_2d");
    if (f.joints_2d->size() != frames[0].joints_2d->size()) {
      fail(ErrorKind::kStructural, "joints_2d count mismatch");
    }
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    for (std::size_t j = i + 1; j < frames.size(); ++j) {
      const auto& a = *frames[i].joints_2d;
      const auto& b = *frames[j].joints_2d;
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double dx = a[k][0] - b[k][0];
        const double dy = a[k][1] - b[k][1];
        s += dx * dx + dy * dy;
      }
      sum += std::sqrt(s);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

double frame_consistency(const std::vector<PoseFrame>& frames) {
  if (frames.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t t = 0; t + 1 < frames.size(); ++t) {
    sum += pair_distance(frames[t], frames[t + 1]);
  }
  return sum / static_cast<double>(frames.size() - 1);
}

}  // namespace mgraph
