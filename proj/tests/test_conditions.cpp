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

#include <gtest/gtest.h>

#include <cmath>

#include "mgraph/conditions.hpp"
#include "mgraph/error.hpp"
#include "mgraph/io.hpp"
#include "support.hpp"

namespace mgraph {
namespace {

BeatTrack beats(std::vector<double> b) {
  BeatTrack t;
  t.beats_s = std::move(b);
  return t;
}

TEST(MotionBeats, SinusoidRecoversAnnotatedBeats) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    io::CorpusSpec spec;
    spec.kind = io::CorpusKind::kSinusoid;
    spec.seed = seed;
    spec.period_s = 0.75 + 0.1 * static_cast<double>(seed);
    const auto corpus = io::generate_synthetic_corpus(spec);
    const auto truth = corpus.annotations["beats_s"].get<std::vector<double>>();
    const BeatTrack got = extract_motion_beats(corpus.sequence, 0.5 * spec.period_s);
    ASSERT_EQ(got.beats_s.size(), truth.size()) << "seed " << seed;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      EXPECT_LE(std::fabs(got.beats_s[i] - truth[i]), 1.0 / spec.fps);
    }
    EXPECT_EQ(got.source, BeatSource::kMotionDerived);
  }
}

TEST(MotionBeats, ConstantVelocityHasNoBeats) {
  io::CorpusSpec spec;
  spec.kind = io::CorpusKind::kChain;
  spec.frames = 50;
  EXPECT_TRUE(extract_motion_beats(io::generate_synthetic_corpus(spec).sequence, 0.1).beats_s.empty());
}

TEST(MotionBeats, MinSeparationThinsDeepestFirst) {
  // Speed 1,0.5,1,0.2,1 per step: minima at samples 1 and 3.
  PoseSequence seq;
  seq.fps = 1;
  seq.skeleton = testing::chain_skeleton(1);
  double x = 0;
  const std::vector<double> steps = {1, 0.5, 1, 0.2, 1};
  for (std::size_t i = 0; i <= steps.size(); ++i) {
    PoseFrame f;
    f.frame_index = i;
    f.time_s = static_cast<double>(i);
    f.joints_local = {{x, 0, 0}};
    f.joints_global = {{0, 0, 0}};
    seq.frames.push_back(f);
    if (i < steps.size()) x += steps[i];
  }
  EXPECT_EQ(extract_motion_beats(seq, 0.0).beats_s, (std::vector<double>{1.5, 3.5}));
  EXPECT_EQ(extract_motion_beats(seq, 2.5).beats_s, (std::vector<double>{3.5}));
}

TEST(MotionBeats, FlatValleyCountsOnceAtItsCentre) {
  PoseSequence seq;
  seq.fps = 1;
  seq.skeleton = testing::chain_skeleton(1);
  double x = 0;
  const std::vector<double> steps = {1, 0.25, 0.25, 0.25, 1};
  for (std::size_t i = 0; i <= steps.size(); ++i) {
    PoseFrame f;
    f.frame_index = i;
    f.time_s = static_cast<double>(i);
    f.joints_local = {{x, 0, 0}};
    f.joints_global = {{0, 0, 0}};
    seq.frames.push_back(f);
    if (i < steps.size()) x += steps[i];
  }
  EXPECT_EQ(extract_motion_beats(seq, 0.0).beats_s, (std::vector<double>{2.5}));
}

TEST(BeatAlignment, IdenticalTracksScoreOne) {
  const BeatTrack t = beats({0.5, 1.0, 1.7, 2.2});
  EXPECT_EQ(beat_alignment_score(t, t, 0.1), 1.0);
}

TEST(BeatAlignment, SigmaOffsetSingleBeat) {
  EXPECT_NEAR(beat_alignment_score(beats({1.0}), beats({1.1}), 0.1), std::exp(-0.5), 1e-12);
  EXPECT_NEAR(beat_alignment_score(beats({2.0}), beats({1.75}), 0.25), std::exp(-0.5), 1e-12);
}

TEST(BeatAlignment, EmptyTracks) {
  EXPECT_EQ(beat_alignment_score(beats({1.0}), beats({}), 0.1), 1.0);
  EXPECT_EQ(beat_alignment_score(beats({}), beats({1.0}), 0.1), 0.0);
  EXPECT_THROW(beat_alignment_score(beats({1.0}), beats({1.0}), 0.0), Error);
}

TEST(BeatAlignment, MonotoneInOffset) {
  double prev = 2.0;
  for (double d = 0.0; d < 0.5; d += 0.05) {
    const double s = beat_alignment_score(beats({1.0}), beats({1.0 + d}), 0.1);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(BeatIntervals, RegularTrackHasZeroCv) {
  EXPECT_EQ(beat_interval_cv(beats({0.0, 0.5, 1.0, 1.5})), 0.0);
  EXPECT_GT(beat_interval_cv(beats({0.0, 0.5, 1.5, 1.75})), 0.0);
  EXPECT_EQ(beat_interval_cv(beats({0.0, 1.0})), 0.0);
}

TEST(BeatValidation, RejectsBadTracks) {
  EXPECT_NO_THROW(validate_beats(beats({0.0, 0.5})));
  EXPECT_THROW(validate_beats(beats({0.5, 0.5})), Error);
  EXPECT_THROW(validate_beats(beats({-0.1})), Error);
  try {
    validate_beats(beats({0.0, 1.0, 0.9}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
    EXPECT_EQ(e.detail(), "/beats/2");
  }
}

TEST(StructuralPenalty, CountsOccurrencesInWindow) {
  const std::vector<NodeId> prefix = {4, 5, 6, 4, 5, 6};
  EXPECT_EQ(structural_penalty(prefix, 4, 48, 0.5), 1.0);
  EXPECT_EQ(structural_penalty(prefix, 4, 2, 0.5), 0.0);
  EXPECT_EQ(structural_penalty(prefix, 6, 3, 0.5), 0.5);
  EXPECT_EQ(structural_penalty(prefix, 9, 48, 0.5), 0.0);
  EXPECT_EQ(structural_penalty({}, 1, 48, 0.5), 0.0);
}

TagTrack tags(std::vector<TagSpan> spans) {
  TagTrack t;
  t.spans = std::move(spans);
  return t;
}

TEST(TagCost, MatchesOrderDifference) {
  const TagTrack src = tags({{0.0, 1.0, "walk", 0}, {1.0, 2.0, "walk", 1}, {2.0, 3.0, "jump", 0}});
  const TagTrack query = tags({{0.0, 0.5, "walk", 1}, {0.5, 1.0, "jump", 0}});
  EXPECT_EQ(tag_cost(0.2, 1.5, src, query), 0.0);
  EXPECT_EQ(tag_cost(0.2, 0.5, src, query, 2.0), 2.0);
  EXPECT_EQ(tag_cost(0.7, 2.5, src, query), 0.0);
  EXPECT_EQ(tag_cost(0.7, 0.5, src, query, 1.0, 1e6), 1e6);
  EXPECT_EQ(tag_cost(0.7, 5.0, src, query, 1.0, 1e6), 1e6);  // untagged source
  EXPECT_EQ(tag_cost(1.5, 0.5, src, query), 0.0);             // no query span
}

TEST(TagValidation, RejectsOverlap) {
  EXPECT_NO_THROW(validate_tags(tags({{0.0, 1.0, "a", 0}, {1.0, 2.0, "a", 1}})));
  EXPECT_THROW(validate_tags(tags({{0.0, 1.0, "a", 0}, {0.5, 2.0, "a", 1}})), Error);
  EXPECT_THROW(validate_tags(tags({{1.0, 1.0, "a", 0}})), Error);
}

TEST(TagTrack, SpanLookupIsHalfOpen) {
  const TagTrack t = tags({{0.0, 1.0, "a", 0}, {1.0, 2.0, "b", 0}});
  EXPECT_EQ(t.at(0.999)->tag, "a");
  EXPECT_EQ(t.at(1.0)->tag, "b");
  EXPECT_EQ(t.at(2.0), nullptr);
}

SourceAnnotations annotations(std::size_t n, double fps, std::vector<double> motion) {
  SourceAnnotations a;
  a.fps = fps;
  for (std::size_t v = 0; v < n; ++v) a.frame_times.push_back(static_cast<double>(v) / fps);
  a.motion_beats = beats(std::move(motion));
  a.motion_beats.source = BeatSource::kMotionDerived;
  return a;
}

TEST(CostModel, BeatDisagreement) {
  ConditionTrack tr;
  tr.music_beats = beats({1.0});
  tr.weights.beat = 1.0;
  tr.sigma_s = 0.1;
  const CostModel m(tr, annotations(48, 24, {1.0}), 24);
  // On a music beat with the source on a motion beat: full agreement.
  EXPECT_EQ(m.beat_disagreement(24, 24), 0.0);
  // On a music beat, source far from any motion beat: almost full cost.
  EXPECT_NEAR(m.beat_disagreement(24, 0), 1.0, 1e-12);
  // Away from music beats nothing is demanded.
  EXPECT_NEAR(m.beat_disagreement(0, 0), std::exp(-0.5 * 100.0) * (1 - std::exp(-0.5 * 100.0)), 1e-15);
  // Weighted term.
  EXPECT_NEAR(m.markov_terms(24, 0).beat, 1.0, 1e-12);
}

TEST(CostModel, NoMusicNoBeatCost) {
  ConditionTrack tr;
  tr.weights.beat = 5.0;
  const CostModel m(tr, annotations(10, 24, {}), 24);
  for (NodeId v = 0; v < 10; ++v) EXPECT_EQ(m.markov_terms(3, v).total(), 0.0);
}

TEST(CostModel, TagForbidsMismatches) {
  ConditionTrack tr;
  tr.weights.tag = 1.0;
  tr.tags = tags({{0.0, 10.0, "walk", 0}});
  SourceAnnotations src = annotations(4, 1, {});
  src.tags = tags({{0.0, 2.0, "walk", 0}, {2.0, 4.0, "run", 0}});
  const CostModel m(tr, src, 1);
  EXPECT_FALSE(m.forbidden(0, 1));
  EXPECT_TRUE(m.forbidden(0, 2));
  ConditionTrack off = tr;
  off.weights.tag = 0.0;
  EXPECT_FALSE(CostModel(off, src, 1).forbidden(0, 2));
}

TEST(CostModel, ExternalFeatureDistance) {
  ConditionTrack tr;
  tr.weights.ext = 2.0;
  ExternalFeatures f;
  f.target = {{0.0, 0.0}};
  f.source = {{3.0, 4.0}, {0.0, 0.0}};
  tr.external = f;
  const CostModel m(tr, annotations(2, 24, {}), 24);
  EXPECT_EQ(m.markov_terms(0, 0).ext, 10.0);
  EXPECT_EQ(m.markov_terms(0, 1).ext, 0.0);
}

TEST(CostModel, FrameConditionCostComposesTerms) {
  ConditionTrack tr;
  tr.weights = {1.0, 1.0, 2.0, 0.0, 1.0};
  tr.structural_penalty = 0.25;
  tr.structural_window = 10;
  ExternalFeatures f;
  f.custom = [](std::size_t t, NodeId v) { return 0.5 * static_cast<double>(t + v); };
  tr.external = f;
  const SourceAnnotations src = annotations(8, 24, {});
  SearchContext ctx;
  ctx.source = &src;
  ctx.target_fps = 24;
  const std::vector<NodeId> prefix = {3, 4, 3};
  ctx.path_prefix = prefix;
  // ext 0.5 * (2 + 3) = 2.5, structural 2 * 0.25 * 2 = 1.0.
  EXPECT_EQ(frame_condition_cost(2, 3, tr, ctx), 3.5);
}

TEST(CostModel, RejectsNegativeWeights) {
  ConditionTrack tr;
  tr.weights.beat = -1.0;
  EXPECT_THROW(CostModel(tr, annotations(2, 24, {}), 24), Error);
}

}  // namespace
}  // namespace mgraph
