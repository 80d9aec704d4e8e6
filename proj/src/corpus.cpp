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

#include <cmath>
#include <numbers>
#include <random>

#include "mgraph/error.hpp"
#include "mgraph/io.hpp"

namespace mgraph::io {

namespace {

// Portable uniform draw; std::uniform_real_distribution is not specified
// bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

Vec3 unit(Rng& rng) {
  for (;;) {
    Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n > 0.1 && n <= 1.0) return scale(v, 1.0 / n);
  }
}

Skeleton chain_skeleton(std::size_t joints) {
  Skeleton s;
  for (std::size_t j = 0; j < joints; ++j) {
    s.names.push_back(j == 0 ? "root" : "j" + std::to_string(j));
    s.parents.push_back(static_cast<int>(j) - 1);
  }
  return s;
}

PoseFrame make_frame(std::size_t index, double fps, const Vec3& root, const std::vector<Vec3>& local) {
  PoseFrame f;
  f.frame_index = index;
  f.time_s = static_cast<double>(index) / fps;
  f.joints_local = local;
  f.joints_global.reserve(local.size());
  std::vector<Vec2> px;
  for (const auto& l : local) {
    const Vec3 g = add(root, l);
    f.joints_global.push_back(g);
    px.push_back({320.0 + 100.0 * g[0], 240.0 - 100.0 * g[1]});
  }
  f.joints_2d = std::move(px);
  return f;
}

// Rest pose: joints stacked above the root with small seeded offsets.
std::vector<Vec3> rest_pose(std::size_t joints, Rng& rng) {
  std::vector<Vec3> rest(joints, Vec3{0, 0, 0});
  for (std::size_t j = 1; j < joints; ++j) {
    rest[j] = {rng.uniform(-0.05, 0.05), 0.25 * static_cast<double>(j), rng.uniform(-0.05, 0.05)};
  }
  return rest;
}

// Cyclic root path with joint swing. Lap k is displaced by k * drift so that
// twins one period apart sit at a small, nearly constant distance.
Corpus periodic(const CorpusSpec& spec, bool figure_eight) {
  Rng rng(spec.seed);
  const std::size_t J = spec.joints;
  const auto rest = rest_pose(J, rng);
  std::vector<double> phase_offset(J);
  std::vector<Vec3> drift(J, Vec3{0, 0, 0});
  for (std::size_t j = 1; j < J; ++j) {
    phase_offset[j] = rng.uniform(0, 2 * std::numbers::pi);
    drift[j] = scale(unit(rng), 1e-3);
  }
  const std::size_t P = spec.period_frames;
  const double R = 1.0;

  Corpus c;
  c.sequence.fps = spec.fps;
  c.sequence.skeleton = chain_skeleton(J);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const double phi = 2 * std::numbers::pi * static_cast<double>(t % P) / static_cast<double>(P);
    const double lap = static_cast<double>(t / P);
    const Vec3 root = figure_eight ? Vec3{R * std::sin(phi), 1.0, R * std::sin(phi) * std::cos(phi)}
                                   : Vec3{R * std::cos(phi), 1.0, R * std::sin(phi)};
    std::vector<Vec3> local(J, Vec3{0, 0, 0});
    for (std::size_t j = 1; j < J; ++j) {
      const double a = phi + phase_offset[j];
      const Vec3 swing{0.5 * std::sin(a), 0.2 * std::sin(2 * a), 0.5 * std::cos(a)};
      local[j] = add(add(rest[j], scale(swing, spec.amplitude)), scale(drift[j], lap));
    }
    c.sequence.frames.push_back(make_frame(t, spec.fps, root, local));
  }
  json closures = json::array();
  for (std::size_t i = 0; i + P < spec.frames; ++i) closures.push_back({i, i + P});
  c.annotations["loop_closures"] = std::move(closures);
  c.annotations["beats_s"] = json::array();
  return c;
}

Corpus piecewise_linear(const CorpusSpec& spec) {
  Rng rng(spec.seed);
  const std::size_t J = spec.joints;
  const auto rest = rest_pose(J, rng);
  Corpus c;
  c.sequence.fps = spec.fps;
  c.sequence.skeleton = chain_skeleton(J);
  json segments = json::array();
  Vec3 root{0, 1.0, 0};
  Vec3 vel{0, 0, 0};
  std::size_t seg_end = 0;
  const std::size_t lo = std::max<std::size_t>(2, spec.period_frames / 2);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    if (t == seg_end) {
      const auto len = lo + static_cast<std::size_t>(rng.uniform(0, static_cast<double>(lo)));
      vel = {rng.uniform(-0.05, 0.05), 0.0, rng.uniform(-0.05, 0.05)};
      segments.push_back({t, std::min(t + len, spec.frames)});
      seg_end = t + len;
    }
    c.sequence.frames.push_back(make_frame(t, spec.fps, root, rest));
    root = add(root, vel);
  }
  c.annotations["segments"] = std::move(segments);
  c.annotations["loop_closures"] = json::array();
  c.annotations["beats_s"] = json::array();
  return c;
}

// Limbs oscillate along fixed directions as cos(pi t / period_s), so the
// speed vanishes exactly at multiples of period_s.
Corpus sinusoid(const CorpusSpec& spec) {
  Rng rng(spec.seed);
  const std::size_t J = spec.joints;
  const auto rest = rest_pose(J, rng);
  std::vector<Vec3> dir(J, Vec3{0, 0, 0});
  for (std::size_t j = 1; j < J; ++j) dir[j] = scale(unit(rng), rng.uniform(0.5, 1.0));
  Corpus c;
  c.sequence.fps = spec.fps;
  c.sequence.skeleton = chain_skeleton(J);
  const Vec3 root{0, 1.0, 0};
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const double ts = static_cast<double>(t) / spec.fps;
    const double s = spec.amplitude * std::cos(std::numbers::pi * ts / spec.period_s);
    std::vector<Vec3> local(J, Vec3{0, 0, 0});
    for (std::size_t j = 1; j < J; ++j) local[j] = add(rest[j], scale(dir[j], s));
    c.sequence.frames.push_back(make_frame(t, spec.fps, root, local));
  }
  // Only minima with a velocity sample on each side are observable.
  json beats = json::array();
  const double last = static_cast<double>(spec.frames - 2) / spec.fps;
  for (std::size_t k = 1;; ++k) {
    const double b = static_cast<double>(k) * spec.period_s;
    if (b > last) break;
    if (b >= 1.0 / spec.fps) beats.push_back(b);
  }
  c.annotations["beats_s"] = std::move(beats);
  c.annotations["loop_closures"] = json::array();
  return c;
}

// Uniform translation by dyadic steps with four joints. Every nearest-neighbour
// distance equals the threshold exactly, so no synthetic edge is admitted.
Corpus chain(const CorpusSpec& spec) {
  constexpr std::size_t J = 4;
  Corpus c;
  c.sequence.fps = spec.fps;
  c.sequence.skeleton = chain_skeleton(J);
  std::vector<Vec3> local(J, Vec3{0, 0, 0});
  for (std::size_t j = 1; j < J; ++j) local[j] = {0.0, 0.25 * static_cast<double>(j), 0.0};
  for (std::size_t t = 0; t < spec.frames; ++t) {
    c.sequence.frames.push_back(
        make_frame(t, spec.fps, Vec3{0.25 * static_cast<double>(t), 1.0, 0.0}, local));
  }
  c.annotations["loop_closures"] = json::array();
  c.annotations["beats_s"] = json::array();
  return c;
}

}  // namespace

std::optional<CorpusKind> corpus_kind_from_string(const std::string& s) {
  if (s == "loop") return CorpusKind::kLoop;
  if (s == "figure-eight") return CorpusKind::kFigureEight;
  if (s == "piecewise-linear") return CorpusKind::kPiecewiseLinear;
  if (s == "sinusoid") return CorpusKind::kSinusoid;
  if (s == "chain") return CorpusKind::kChain;
  return std::nullopt;
}

std::string to_string(CorpusKind k) {
  switch (k) {
    case CorpusKind::kLoop: return "loop";
    case CorpusKind::kFigureEight: return "figure-eight";
    case CorpusKind::kPiecewiseLinear: return "piecewise-linear";
    case CorpusKind::kSinusoid: return "sinusoid";
    case CorpusKind::kChain: return "chain";
  }
  return "unknown";
}

Corpus generate_synthetic_corpus(const CorpusSpec& spec) {
  if (spec.frames < 3) fail(ErrorKind::kSchema, "corpus needs at least 3 frames", "/frames");
  if (!(spec.fps > 0)) fail(ErrorKind::kSchema, "fps must be > 0", "/fps");
  if (spec.joints < 1) fail(ErrorKind::kSchema, "corpus needs at least 1 joint", "/joints");
  if (spec.period_frames < 2) fail(ErrorKind::kSchema, "period must be >= 2 frames", "/period_frames");
  if (!(spec.period_s > 0)) fail(ErrorKind::kSchema, "period_s must be > 0", "/period_s");

  Corpus c;
  switch (spec.kind) {
    case CorpusKind::kLoop: c = periodic(spec, false); break;
    case CorpusKind::kFigureEight: c = periodic(spec, true); break;
    case CorpusKind::kPiecewiseLinear: c = piecewise_linear(spec); break;
    case CorpusKind::kSinusoid: c = sinusoid(spec); break;
    case CorpusKind::kChain: c = chain(spec); break;
  }
  c.annotations["kind"] = to_string(spec.kind);
  c.annotations["seed"] = spec.seed;
  c.annotations["frames"] = spec.frames;
  c.annotations["fps"] = spec.fps;
  validate_sequence(c.sequence);
  return c;
}

}  // namespace mgraph::io
