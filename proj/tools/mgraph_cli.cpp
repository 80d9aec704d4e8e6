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

// mgraph: build motion graphs from pose files and query them.
//
// Every command prints one "key=value" summary line to stdout and writes its
// payload to a file. Errors print a {"code","message","detail"} line to
// stderr. Exit codes: 0 ok, 1 usage, 2 degenerate graph, 3 infeasible query,
// 4 I/O or schema.

#include <cmath>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "mgraph/blend.hpp"
#include "mgraph/config.hpp"
#include "mgraph/engine.hpp"
#include "mgraph/error.hpp"
#include "mgraph/io.hpp"
#include "mgraph/metrics.hpp"
#include "mgraph/server.hpp"

namespace {

using mgraph::json;
namespace io = mgraph::io;

struct Common {
  std::string config_path;
  bool lax = false;
  std::optional<unsigned> threads;
};

mgraph::EngineConfig load_cfg(const Common& c) {
  mgraph::EngineConfig cfg = mgraph::load_config(c.config_path, c.lax);
  if (c.threads) cfg.threads = *c.threads;
  mgraph::validate_config(cfg);
  return cfg;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "EngineConfig JSON (default: $CONFIG)");
  app->add_flag("--lax", c.lax, "Tolerate unknown fields in input files");
  app->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)");
}

json read_json(const std::string& path) {
  const std::string text = io::read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) mgraph::fail(mgraph::ErrorKind::kSchema, path + ": invalid JSON", "/");
  return j;
}

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motion-graph retrieval engine"};
  app.require_subcommand(1);
  std::string active;

  // build
  Common build_c;
  std::string build_poses, build_out, build_stats;
  std::optional<double> build_alpha, build_tau;
  auto* build = app.add_subcommand("build", "Build and prune a motion graph");
  build->add_option("--poses", build_poses, "PoseFileV1 input")->required();
  build->add_option("--out", build_out, "Graph output (.json for the debug form)")->required();
  build->add_option("--stats", build_stats, "Stats JSON output");
  build->add_option("--alpha", build_alpha, "Threshold scale alpha");
  build->add_option("--tau", build_tau, "Explicit threshold tau");
  add_common(build, build_c);

  // search
  Common search_c;
  std::string search_poses, search_graph, search_cond, search_out = "search_result.json";
  bool search_dp = false;
  std::optional<std::size_t> search_beam;
  auto* search = app.add_subcommand("search", "DP or beam path search");
  search->add_option("--poses", search_poses, "PoseFileV1 the graph was built from")->required();
  search->add_option("--graph", search_graph, "Graph file")->required();
  search->add_option("--condition", search_cond, "ConditionFileV1")->required();
  search->add_option("--out", search_out, "Result JSON output");
  auto* dp_flag = search->add_flag("--dp", search_dp, "Exact dynamic programming");
  search->add_option("--beam", search_beam, "Beam search with this width")->excludes(dp_flag);
  add_common(search, search_c);

  // keyframe-search
  Common key_c;
  std::string key_poses, key_graph, key_cond, key_out = "keyframe_result.json";
  std::optional<double> key_d, key_d_upper;
  auto* keyframe = app.add_subcommand("keyframe-search", "Hop-bounded search between pinned frames");
  keyframe->add_option("--poses", key_poses, "PoseFileV1 the graph was built from")->required();
  keyframe->add_option("--graph", key_graph, "Graph file")->required();
  keyframe->add_option("--condition", key_cond, "ConditionFileV1 with keyframes")->required();
  keyframe->add_option("--out", key_out, "Result JSON output");
  keyframe->add_option("--D", key_d, "Length scale factor D");
  keyframe->add_option("--D-upper", key_d_upper, "Upper length scale factor");
  add_common(keyframe, key_c);

  // analyze
  Common an_c;
  std::string an_poses, an_beats, an_out = "analysis.json";
  std::size_t an_window = mgraph::kDefaultTransitionFrames;
  double an_threshold = 0.001;
  auto* analyze = app.add_subcommand("analyze", "Blend feasibility and beat statistics");
  analyze->add_option("--poses", an_poses, "PoseFileV1")->required();
  analyze->add_option("--beats", an_beats, "Music beats: JSON array of seconds");
  analyze->add_option("--window", an_window, "Interior frames per window");
  analyze->add_option("--threshold", an_threshold, "Deviation threshold");
  analyze->add_option("--out", an_out, "Report JSON output");
  add_common(analyze, an_c);

  // serve
  Common serve_c;
  std::string serve_poses, serve_graph, serve_host = "127.0.0.1";
  std::optional<int> serve_port;
  bool serve_stream = false;
  auto* serve = app.add_subcommand("serve", "Start the HTTP API");
  serve->add_option("--poses", serve_poses, "PoseFileV1")->required();
  serve->add_option("--graph", serve_graph, "Graph file")->required();
  serve->add_option("--host", serve_host, "Bind address");
  serve->add_option("--port", serve_port, "Port (default: config, then $PORT)");
  serve->add_flag("--stream", serve_stream, "Enable POST /v1/stream");
  add_common(serve, serve_c);

  // stream
  Common stream_c;
  std::string stream_poses, stream_graph;
  auto* stream = app.add_subcommand(
      "stream", "Streaming beam search over NDJSON on stdin (condition line, then one line per frame)");
  stream->add_option("--poses", stream_poses, "PoseFileV1")->required();
  stream->add_option("--graph", stream_graph, "Graph file")->required();
  add_common(stream, stream_c);

  // generate
  io::CorpusSpec gen_spec;
  std::string gen_kind = "loop", gen_out, gen_ann;
  auto* generate = app.add_subcommand("generate", "Write a seeded synthetic corpus");
  generate->add_option("--kind", gen_kind, "loop | figure-eight | piecewise-linear | sinusoid | chain");
  generate->add_option("--frames", gen_spec.frames, "Frame count");
  generate->add_option("--fps", gen_spec.fps, "Frames per second");
  generate->add_option("--joints", gen_spec.joints, "Joint count");
  generate->add_option("--period", gen_spec.period_frames, "Loop period in frames");
  generate->add_option("--period-s", gen_spec.period_s, "Sinusoid beat period in seconds");
  generate->add_option("--amplitude", gen_spec.amplitude, "Motion amplitude in meters");
  generate->add_option("--seed", gen_spec.seed, "RNG seed");
  generate->add_option("--out", gen_out, "PoseFileV1 output")->required();
  generate->add_option("--annotations", gen_ann, "Ground-truth annotation output");

  // metrics
  std::string met_gen, met_ref, met_poses, met_out = "metrics.json";
  bool met_lax = false;
  auto* metrics = app.add_subcommand("metrics", "PSNR / MOVIE on videos, diversity on poses");
  metrics->add_option("--gen", met_gen, "Generated video JSON");
  metrics->add_option("--ref", met_ref, "Reference video JSON");
  metrics->add_option("--poses", met_poses, "PoseFileV1 for pose metrics");
  metrics->add_option("--out", met_out, "Report JSON output");
  metrics->add_flag("--lax", met_lax, "Tolerate unknown fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  for (auto* sub : app.get_subcommands()) active = sub->get_name();

  try {
    if (build->parsed()) {
      mgraph::EngineConfig cfg = load_cfg(build_c);
      if (build_alpha) cfg.alpha = *build_alpha;
      if (build_tau) cfg.tau = *build_tau;
      mgraph::validate_config(cfg);
      const auto seq = io::load_pose_sequence(build_poses, build_c.lax);
      const auto out = mgraph::build_pipeline(seq, cfg);
      io::save_graph(build_out, out.graph);
      if (!build_stats.empty()) io::write_file(build_stats, io::canonical(out.stats));
      std::cout << "build status=ok nodes=" << out.graph.node_count
                << " active=" << out.graph.active_count()
                << " synthetic_edges=" << out.graph.synthetic_edges.size()
                << " tau=" << fmt(out.graph.tau) << " pruned=" << out.graph.pruned_nodes.size()
                << " out=" << build_out << "\n";
    } else if (search->parsed() || keyframe->parsed()) {
      const bool key = keyframe->parsed();
      const Common& c = key ? key_c : search_c;
      const auto cfg = load_cfg(c);
      const auto engine = mgraph::Engine::load(key ? key_poses : search_poses,
                                               key ? key_graph : search_graph, cfg, c.lax);
      json cond = read_json(key ? key_cond : search_cond);
      if (!cond.is_object()) mgraph::fail(mgraph::ErrorKind::kSchema, "condition must be an object", "/");
      if (search_dp) cond["search"]["searcher"] = "dp";
      if (search_beam) {
        cond["search"]["searcher"] = "beam";
        cond["search"]["beam_width"] = *search_beam;
      }
      if (key_d) cond["search"]["D"] = *key_d;
      if (key_d_upper) cond["search"]["D_upper"] = *key_d_upper;
      const json payload = key ? engine->keyframe_search(cond, c.lax) : engine->search(cond, c.lax);
      const std::string& out = key ? key_out : search_out;
      io::write_file(out, io::canonical(payload));
      const json& r = payload["result"];
      std::cout << active << " status=ok searcher=" << r["searcher"].get<std::string>()
                << " frames=" << r["path"].size() << " transitions=" << r["transitions"].size()
                << " cost=" << fmt(r["cost_total"].get<double>()) << " out=" << out << "\n";
    } else if (analyze->parsed()) {
      const auto cfg = load_cfg(an_c);
      const auto seq = io::load_pose_sequence(an_poses, an_c.lax);
      std::optional<mgraph::BeatTrack> music;
      if (!an_beats.empty()) music = io::beat_track_from_json(read_json(an_beats), "");
      const json report = mgraph::analyze_sequence(seq, cfg, music, an_window, an_threshold);
      io::write_file(an_out, io::canonical(report));
      std::cout << "analyze status=ok feasibility=" << fmt(report["feasibility"]["fraction"].get<double>())
                << " windows=" << report["feasibility"]["windows"].get<std::size_t>()
                << " beats=" << report["beats"]["count"].get<std::size_t>() << " out=" << an_out << "\n";
    } else if (serve->parsed()) {
      mgraph::EngineConfig cfg = load_cfg(serve_c);
      if (serve_port) cfg.port = *serve_port;
      mgraph::validate_config(cfg);
      mgraph::HttpServer server(mgraph::ServerOptions{serve_stream, 16});
      const int port = server.bind(serve_host, cfg.port);
      // Serve 503s while the graph loads; load failures are fatal.
      std::optional<mgraph::Error> load_error;
      std::thread loader([&] {
        try {
          server.set_engine(mgraph::Engine::load(serve_poses, serve_graph, cfg, serve_c.lax));
        } catch (const mgraph::Error& e) {
          load_error = e;
          g_stop = true;
        }
      });
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::thread watcher([&] {
        server.wait_until_ready();
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
        server.stop();
      });
      std::cout << "serve status=listening host=" << serve_host << " port=" << port << std::endl;
      server.listen();
      g_stop = true;
      loader.join();
      watcher.join();
      if (load_error) throw *load_error;
      std::cout << "serve status=stopped\n";
    } else if (stream->parsed()) {
      const auto cfg = load_cfg(stream_c);
      const auto engine = mgraph::Engine::load(stream_poses, stream_graph, cfg, stream_c.lax);
      std::string line;
      std::optional<json> cond;
      std::optional<mgraph::BeamStream> beam;
      std::vector<std::vector<double>> features;
      std::size_t line_no = 0;
      while (std::getline(std::cin, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        const std::string where = "line " + std::to_string(line_no);
        if (j.is_discarded()) mgraph::fail(mgraph::ErrorKind::kSchema, "invalid JSON on " + where, where);
        if (!cond) {
          beam.emplace(engine->open_stream(j, stream_c.lax));
          cond = std::move(j);
          continue;
        }
        const std::vector<double>* feature = nullptr;
        if (j.is_object() && j.contains("feature") && !j["feature"].is_null()) {
          features.push_back(j["feature"].get<std::vector<double>>());
          feature = &features.back();
        }
        const auto committed = beam->advance(feature);
        std::cout << json{{"step", beam->steps() - 1}, {"committed", committed}}.dump() << std::endl;
      }
      if (!cond) mgraph::fail(mgraph::ErrorKind::kSchema, "stdin needs a condition line", "line 1");
      json done = engine->stream_result(*cond, beam->finish(), features, stream_c.lax);
      done["done"] = true;
      std::cout << done.dump() << std::endl;
    } else if (generate->parsed()) {
      const auto kind = io::corpus_kind_from_string(gen_kind);
      if (!kind) {
        std::cerr << "unknown corpus kind '" << gen_kind << "'\n";
        return 1;
      }
      gen_spec.kind = *kind;
      const auto corpus = io::generate_synthetic_corpus(gen_spec);
      io::save_pose_sequence(gen_out, corpus.sequence);
      if (!gen_ann.empty()) io::write_file(gen_ann, io::canonical(corpus.annotations));
      std::cout << "generate status=ok kind=" << gen_kind << " frames=" << corpus.sequence.size()
                << " seed=" << gen_spec.seed << " out=" << gen_out << "\n";
    } else if (metrics->parsed()) {
      json report;
      if (!met_gen.empty() || !met_ref.empty()) {
        if (met_gen.empty() || met_ref.empty()) {
          std::cerr << "--gen and --ref go together\n";
          return 1;
        }
        const auto gen = io::load_video(met_gen);
        const auto ref = io::load_video(met_ref);
        if (gen.size() != ref.size() || gen.empty()) {
          mgraph::fail(mgraph::ErrorKind::kStructural, "videos must have the same nonzero frame count");
        }
        double sum = 0.0;
        std::size_t finite = 0, identical = 0;
        for (std::size_t i = 0; i < gen.size(); ++i) {
          const double p = mgraph::psnr(gen[i], ref[i]);
          if (std::isinf(p)) {
            ++identical;
          } else {
            sum += p;
            ++finite;
          }
        }
        report["psnr_db_mean"] = finite ? json(sum / static_cast<double>(finite)) : json(nullptr);
        report["identical_frames"] = identical;
        report["movie_simplified"] = mgraph::movie_simplified(gen, ref);
        report["lpips"] = nullptr;
        report["fvd"] = nullptr;
      }
      if (!met_poses.empty()) {
        const auto seq = io::load_pose_sequence(met_poses, met_lax);
        const bool has_2d = seq.frames.front().joints_2d.has_value();
        report["motion_diversity"] = has_2d ? json(mgraph::motion_diversity(seq.frames)) : json(nullptr);
        report["motion_diversity_definition"] = "mean pairwise L2 distance of 2D joints";
        report["frame_consistency"] = mgraph::frame_consistency(seq.frames);
      }
      if (report.is_null()) {
        std::cerr << "metrics needs --gen/--ref or --poses\n";
        return 1;
      }
      io::write_file(met_out, io::canonical(report));
      std::cout << "metrics status=ok out=" << met_out << "\n";
    }
  } catch (const mgraph::Error& e) {
    std::cerr << mgraph::error_payload(e).dump() << "\n";
    std::cout << active << " status=error code=" << mgraph::exit_code(e.kind()) << "\n";
    return mgraph::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << mgraph::error_payload(1, e.what()).dump() << "\n";
    std::cout << active << " status=error code=1\n";
    return 1;
  }
  return 0;
}
