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

// Acceptance runner: one PASS/FAIL line per criterion, exit 1 on any FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "mgraph/blend.hpp"
#include "mgraph/engine.hpp"
#include "mgraph/error.hpp"
#include "mgraph/io.hpp"
#include "mgraph/metrics.hpp"
#include "mgraph/search.hpp"
#include "mgraph/server.hpp"
#include "support.hpp"

namespace mgraph {
namespace {

namespace fs = std::filesystem;
using testing::Rng;
using Clock = std::chrono::steady_clock;

// Collects the first few failures of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 3) failures_.push_back(what);
    ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(count_) + " failure(s): ";
    for (std::size_t i = 0; i < failures_.size(); ++i) s += (i ? "; " : "") + failures_[i];
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::optional<MotionGraph> random_pruned(Rng& rng, std::size_t n, double p) {
  try {
    return prune_graph(testing::random_graph(rng, n, p));
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct Instance {
  MotionGraph graph;
  std::shared_ptr<testing::CostTable> table;
  std::size_t frames = 0;
};

// 200 seeded pruned graphs with at most 10 nodes and at most 6 frames.
std::vector<Instance> small_instances() {
  std::vector<Instance> out;
  for (std::uint64_t seed = 0; out.size() < 200; ++seed) {
    Rng rng(50000 + seed);
    auto g = random_pruned(rng, 3 + rng.index(8), 0.3);
    if (!g) continue;
    Instance in;
    in.frames = 1 + rng.index(6);
    in.table = std::make_shared<testing::CostTable>(testing::random_costs(rng, in.frames, g->node_count));
    in.graph = std::move(*g);
    out.push_back(std::move(in));
  }
  return out;
}

std::string dp_optimality(const std::vector<Instance>& instances) {
  Check c;
  const auto start = Clock::now();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& in = instances[i];
    const CostModel model = testing::table_model(in.table, in.graph.node_count);
    const auto best = testing::brute_force_best(testing::oracle_graph(in.graph), *in.table, in.frames);
    const SearchResult r = search_dp(in.graph, model, in.frames);
    c.expect(r.cost_total == best.cost, "instance " + std::to_string(i) + " cost");
    c.expect(r.path.size() == in.frames, "instance " + std::to_string(i) + " length");
  }
  const double secs = seconds_since(start);
  c.expect(secs < 10.0, "took " + std::to_string(secs) + " s");
  return c.ok() ? "200 graphs exact in " + std::to_string(secs) + " s" : c.summary();
}

std::string beam_equivalence(const std::vector<Instance>& instances) {
  Check c;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& in = instances[i];
    const CostModel model = testing::table_model(in.table, in.graph.node_count);
    const SearchResult dp = search_dp(in.graph, model, in.frames);
    const SearchResult beam = search_beam(in.graph, model, in.frames, in.graph.node_count);
    c.expect(beam.path == dp.path, "instance " + std::to_string(i) + " path");
    c.expect(beam.cost_total == dp.cost_total, "instance " + std::to_string(i) + " cost");
  }
  return c.ok() ? "200 graphs identical" : c.summary();
}

std::string keyframe_search_matches_oracle() {
  Check c;
  std::size_t feasible = 0, infeasible = 0;
  for (double d : {0.0, 0.1, 0.3}) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Rng rng(60000 + seed + static_cast<std::uint64_t>(d * 1000));
      const std::size_t n = 6 + rng.index(6);
      const auto g = random_pruned(rng, n, 0.3);
      if (!g) continue;
      const auto o = testing::oracle_graph(*g);
      std::vector<NodeId> alive;
      for (NodeId v = 0; v < n; ++v) {
        if (o.alive[v]) alive.push_back(v);
      }
      const std::size_t k = 2 + rng.index(3);
      std::vector<std::size_t> pos = {rng.index(3)};
      for (std::size_t i = 1; i < k; ++i) pos.push_back(pos.back() + 2 + rng.index(6));
      const std::size_t frames = pos.back() + 1;
      auto table = std::make_shared<testing::CostTable>(testing::random_costs(rng, frames, n));
      const CostModel base = testing::table_model(table, n);
      ConditionTrack tr = base.track();
      for (std::size_t i = 0; i < k; ++i) {
        tr.keyframes.push_back({static_cast<double>(pos[i]) / 24.0, alive[rng.index(alive.size())]});
      }
      const CostModel model(tr, base.source(), 24.0);
      const KeyframeOptions opt{d, std::nullopt};
      const std::string tag = "D=" + std::to_string(d) + " seed " + std::to_string(seed);

      std::vector<testing::HopOracle> segs;
      bool oracle_ok = true;
      for (std::size_t i = 0; i + 1 < k; ++i) {
        const std::size_t len = pos[i + 1] - pos[i];
        const HopWindow w = hop_window(len, opt);
        segs.push_back(testing::bellman_ford_hops(o, *table, tr.keyframes[i].source_frame,
                                                  tr.keyframes[i + 1].source_frame, pos[i], len, w.lo, w.hi));
        oracle_ok = oracle_ok && segs.back().feasible;
      }
      SearchResult r;
      try {
        r = search_keyframes(*g, model, opt);
      } catch (const Error& e) {
        c.expect(e.kind() == ErrorKind::kInfeasible && !oracle_ok, tag + " spurious failure");
        ++infeasible;
        continue;
      }
      c.expect(oracle_ok, tag + " oracle says infeasible");
      if (!oracle_ok) continue;
      ++feasible;
      for (std::size_t i = 0; i + 1 < k; ++i) {
        const Segment& s = r.segments[i];
        c.expect(r.path[s.path_begin] == tr.keyframes[i].source_frame, tag + " start pin");
        c.expect(r.path[s.path_end] == tr.keyframes[i + 1].source_frame, tag + " end pin");
        c.expect(s.hops == segs[i].hops, tag + " hops");
        double cost = 0.0;
        for (std::size_t h = 1; h <= s.hops; ++h) {
          const NodeId a = r.path[s.path_begin + h - 1], b = r.path[s.path_begin + h];
          cost = (cost + o.edges.at({a, b})) + (*table)[s.target_begin + std::min(h, s.target_len)][b];
        }
        c.expect(cost == segs[i].cost, tag + " cost");
      }
      // The resampled timeline spans first to last pin at exactly the target
      // length, and every pin lands on its source frame.
      Rng srng(seed);
      const PoseSequence seq = testing::random_walk_sequence(srng, n, 3);
      const BlendedTimeline tl = apply_blending(r, seq);
      const std::size_t span = frames - pos[0];
      c.expect(tl.frames.size() == span, tag + " timeline length");
      for (std::size_t i = 0; i < k && tl.frames.size() == span; ++i) {
        const PoseFrame& got = tl.frames.frames[pos[i] - pos[0]];
        const PoseFrame& want = seq.frames[tr.keyframes[i].source_frame];
        c.expect(got.joints_global == want.joints_global && got.joints_local == want.joints_local,
                 tag + " pin " + std::to_string(i) + " frame");
      }
    }
  }
  c.expect(feasible > 0 && infeasible > 0, "degenerate sample");
  return c.ok() ? std::to_string(feasible) + " feasible and " + std::to_string(infeasible) +
                      " infeasible instances agree"
                : c.summary();
}

std::set<std::pair<NodeId, NodeId>> synthetic_set(const MotionGraph& g) {
  std::set<std::pair<NodeId, NodeId>> s;
  for (const auto& e : g.synthetic_edges) s.emplace(e.from, e.to);
  return s;
}

std::string graph_build() {
  Check c;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(70000 + seed);
    const PoseSequence seq = seed % 2 ? testing::random_walk_sequence(rng, 30, 4)
                                      : testing::random_sequence(rng, 30, 4);
    const double tau = testing::oracle_threshold(seq, 1.0);
    const MotionGraph g = build_graph(seq, tau);
    c.expect(synthetic_set(g) == testing::oracle_edges(seq, tau), "edge set seed " + std::to_string(seed));
    std::set<std::pair<NodeId, NodeId>> prev;
    for (double scale : {0.5, 0.8, 1.0, 1.3, 2.0}) {
      const auto cur = synthetic_set(build_graph(seq, scale * tau));
      c.expect(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()),
               "monotonicity seed " + std::to_string(seed));
      prev = cur;
    }
  }
  std::size_t pruned = 0;
  for (std::uint64_t seed = 0; pruned < 50; ++seed) {
    Rng rng(71000 + seed);
    const auto g = random_pruned(rng, 5 + rng.index(20), 0.08);
    if (!g) continue;
    ++pruned;
    c.expect(prune_graph(*g) == *g, "prune idempotence seed " + std::to_string(seed));
    const auto o = testing::oracle_graph(*g);
    for (NodeId v = 0; v < o.n; ++v) {
      if (o.alive[v]) c.expect(testing::on_cycle(o, v), "survivor off cycle seed " + std::to_string(seed));
    }
  }
  return c.ok() ? "50 corpora edge sets and nesting, 50 graphs pruned" : c.summary();
}

FrameArray filled(double value) { return FrameArray({4, 4, 3}, std::vector<double>(48, value)); }

std::string metric_formulas() {
  Check c;
  Rng rng(80000);
  auto random_array = [&rng] {
    std::vector<double> d(48);
    for (double& x : d) x = std::floor(rng.uniform(0, 256));
    return FrameArray({4, 4, 3}, std::move(d));
  };
  const FrameArray a = random_array();
  c.expect(psnr(a, a) == kPsnrIdentical, "psnr identical");
  c.expect(std::fabs(psnr(filled(0), filled(255))) <= 1e-9, "psnr full scale");
  std::vector<FrameArray> v = {random_array(), random_array(), random_array()};
  c.expect(movie_simplified(v, v) == 0.0, "movie identical");
  for (double off : {1.0, 2.5, 7.0}) {
    std::vector<FrameArray> gen, ref;
    for (int t = 0; t < 5; ++t) {
      ref.push_back(filled(10.0 * t));
      gen.push_back(filled(10.0 * t + off));
    }
    c.expect(std::fabs(movie_simplified(gen, ref) - off * off) <= 1e-12, "movie offset");
  }
  for (int trial = 0; trial < 100; ++trial) {
    const FrameArray x = random_array(), y = random_array();
    double mse = 0.0;
    for (std::size_t k = 0; k < 48; ++k) mse += (x.data[k] - y.data[k]) * (x.data[k] - y.data[k]);
    mse /= 48.0;
    const double want = 10.0 * std::log10(255.0 * 255.0 / mse);
    c.expect(std::fabs(psnr(x, y) - want) <= 1e-9 * std::fabs(want), "psnr oracle");

    std::vector<FrameArray> gen, ref;
    for (int t = 0; t < 4; ++t) {
      gen.push_back(random_array());
      ref.push_back(random_array());
    }
    double sum = 0.0;
    for (int t = 0; t < 4; ++t) {
      for (std::size_t k = 0; k < 48; ++k) sum += std::pow(gen[t].data[k] - ref[t].data[k], 2);
    }
    for (int t = 0; t + 1 < 4; ++t) {
      for (std::size_t k = 0; k < 48; ++k) {
        sum += std::pow((gen[t + 1].data[k] - gen[t].data[k]) - (ref[t + 1].data[k] - ref[t].data[k]), 2);
      }
    }
    const double movie = sum / (4.0 * 48.0);
    c.expect(std::fabs(movie_simplified(gen, ref) - movie) <= 1e-9 * movie, "movie oracle");
  }
  return c.ok() ? "sentinels, closed forms and 100 oracle draws" : c.summary();
}

std::string blending() {
  Check c;
  Rng rng(90000);
  for (int i = 0; i < 1000; ++i) {
    const PoseFrame a = testing::random_frame(rng, 5, 10.0);
    const PoseFrame b = testing::random_frame(rng, 5, 10.0);
    const PoseFrame at0 = lerp_frame(a, b, 0.0), at1 = lerp_frame(a, b, 1.0);
    c.expect(at0.joints_global == a.joints_global && at0.joints_local == a.joints_local, "u=0");
    c.expect(at1.joints_global == b.joints_global && at1.joints_local == b.joints_local, "u=1");
  }
  c.expect(blend_linear(testing::random_frame(rng, 3), testing::random_frame(rng, 3)).size() == 12,
           "default window");

  io::CorpusSpec chain;
  chain.kind = io::CorpusKind::kChain;
  chain.frames = 131;
  c.expect(blend_feasibility(io::generate_synthetic_corpus(chain).sequence) == 1.0, "linear motion");
  io::CorpusSpec sine;
  sine.kind = io::CorpusKind::kSinusoid;
  sine.period_s = 0.25;
  sine.amplitude = 2.0;
  c.expect(blend_feasibility(io::generate_synthetic_corpus(sine).sequence) == 0.0, "large sinusoid");
  io::CorpusSpec mixed;
  mixed.kind = io::CorpusKind::kPiecewiseLinear;
  const PoseSequence seq = io::generate_synthetic_corpus(mixed).sequence;
  double prev = -1.0;
  for (double th : {1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
    const double f = blend_feasibility(seq, 12, th);
    c.expect(f >= prev, "monotone in threshold");
    prev = f;
  }
  return c.ok() ? "1000 endpoint pairs bit-equal, 12 frames, feasibility 1.0 / 0.0 / monotone" : c.summary();
}

std::string beat_pipeline() {
  Check c;
  std::size_t beats = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    io::CorpusSpec spec;
    spec.kind = io::CorpusKind::kSinusoid;
    spec.seed = seed;
    spec.period_s = 0.6 + 0.15 * static_cast<double>(seed);
    const auto corpus = io::generate_synthetic_corpus(spec);
    const auto truth = corpus.annotations["beats_s"].get<std::vector<double>>();
    const BeatTrack got = extract_motion_beats(corpus.sequence, 0.5 * spec.period_s);
    c.expect(got.beats_s.size() == truth.size(), "beat count seed " + std::to_string(seed));
    for (std::size_t i = 0; i < std::min(truth.size(), got.beats_s.size()); ++i) {
      c.expect(std::fabs(got.beats_s[i] - truth[i]) <= 1.0 / spec.fps, "beat time seed " + std::to_string(seed));
    }
    beats += truth.size();
  }
  BeatTrack t, one, off;
  t.beats_s = {0.4, 1.1, 1.9, 2.3};
  c.expect(beat_alignment_score(t, t, 0.1) == 1.0, "identical tracks");
  one.beats_s = {1.0};
  off.beats_s = {1.2};
  c.expect(std::fabs(beat_alignment_score(one, off, 0.2) - std::exp(-0.5)) <= 1e-12, "sigma offset");
  return c.ok() ? std::to_string(beats) + " annotated beats within one frame, alignment exact" : c.summary();
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(MGRAPH_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string determinism_and_round_trips() {
  Check c;
  const fs::path dir = fs::temp_directory_path() / ("mgraph_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto p = [&dir](const char* name) { return (dir / name).string(); };

  c.expect(run_cli("generate --kind figure-eight --frames 240 --seed 11 --out " + p("poses.json")) == 0,
           "generate");
  c.expect(run_cli("build --poses " + p("poses.json") + " --out " + p("a.graph")) == 0, "build a");
  c.expect(run_cli("build --threads 1 --poses " + p("poses.json") + " --out " + p("b.graph")) == 0, "build b");
  const std::string bytes_a = io::read_file(p("a.graph"));
  c.expect(!bytes_a.empty() && bytes_a == io::read_file(p("b.graph")), "rebuild bytes");

  const PoseSequence seq = io::load_pose_sequence(p("poses.json"));
  const EngineConfig cfg;
  const MotionGraph lib = build_pipeline(seq, cfg).graph;
  const auto encoded = io::encode_graph(lib);
  c.expect(std::string(encoded.begin(), encoded.end()) == bytes_a, "library bytes match CLI");
  io::save_graph(p("c.graph"), lib);
  io::save_graph(p("c.json"), lib);
  c.expect(io::load_graph(p("c.graph")) == lib, "binary round trip");
  c.expect(io::load_graph(p("c.json")) == lib, "json round trip");
  Rng rng(123);
  for (int i = 0; i < 50; ++i) {
    auto g = random_pruned(rng, 4 + rng.index(30), 0.2);
    if (!g) continue;
    g->tau = rng.uniform(0.0, 3.0);
    c.expect(io::decode_graph(io::encode_graph(*g)) == *g, "random binary round trip");
    c.expect(io::graph_from_json(io::graph_to_json(*g)) == *g, "random json round trip");
  }

  const std::string cond = R"({"frames": 72, "beats": [0.5, 1.0, 1.5, 2.0, 2.5]})";
  io::write_file(p("cond.json"), cond);
  c.expect(run_cli("search --poses " + p("poses.json") + " --graph " + p("a.graph") + " --condition " +
                   p("cond.json") + " --out " + p("cli.json")) == 0,
           "cli search");
  HttpServer server;
  server.set_engine(Engine::load(p("poses.json"), p("a.graph"), cfg));
  const int port = server.bind("127.0.0.1", 0);
  std::thread t([&server] { server.listen(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(60, 0);
  const auto r = client.Post("/v1/search", cond, "application/json");
  c.expect(r && r->status == 200, "http search");
  c.expect(r && r->body == io::read_file(p("cli.json")), "cli/api bytes");
  server.stop();
  t.join();
  fs::remove_all(dir);
  return c.ok() ? "rebuilds, round trips and CLI/API bodies byte-identical" : c.summary();
}

}  // namespace
}  // namespace mgraph

int main() {
  using namespace mgraph;
  const auto start = Clock::now();
  int failed = 0;
  auto report = [&failed](const char* name, const std::function<std::string()>& fn) {
    bool ok = true;
    std::string note;
    try {
      note = fn();
      ok = note.find("failure(s):") == std::string::npos;
    } catch (const std::exception& e) {
      ok = false;
      note = std::string("exception: ") + e.what();
    }
    if (!ok) ++failed;
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, note.c_str());
    std::fflush(stdout);
  };

  const auto instances = small_instances();
  report("dp_optimality", [&] { return dp_optimality(instances); });
  report("beam_dp_equivalence", [&] { return beam_equivalence(instances); });
  report("keyframe_search", keyframe_search_matches_oracle);
  report("graph_build", graph_build);
  report("metric_formulas", metric_formulas);
  report("blending", blending);
  report("beat_pipeline", beat_pipeline);
  report("determinism_round_trips", determinism_and_round_trips);

  const double total = seconds_since(start);
  const bool fast = total < 120.0;
  if (!fast) ++failed;
  std::printf("%s total_runtime: %.2f s\n", fast ? "PASS" : "FAIL", total);
  return failed == 0 ? 0 : 1;
}
