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

#include "mgraph/server.hpp"

#include <mutex>

#include "httplib.h"
#include "mgraph/io.hpp"

namespace mgraph {

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSchema:
    case ErrorKind::kStructural: return 400;
    case ErrorKind::kInfeasible: return 409;
    case ErrorKind::kDegenerateGraph:
    case ErrorKind::kIo: return 500;
  }
  return 500;
}

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(io::canonical(body), kJson);
}

void send_error(httplib::Response& res, const Error& e) {
  send(res, http_status(e.kind()), error_payload(e));
}

bool lax_flag(const httplib::Request& req) {
  return req.has_param("lax") && req.get_param_value("lax") != "0";
}

json parse_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::kSchema, "request body is not valid JSON", "/");
  return j;
}

std::size_t query_index(const httplib::Request& req, const std::string& key) {
  if (!req.has_param(key)) fail(ErrorKind::kSchema, "missing query parameter '" + key + "'", key);
  const std::string v = req.get_param_value(key);
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || v.front() == '-') {
    fail(ErrorKind::kSchema, "query parameter '" + key + "' must be a non-negative integer", key);
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

struct HttpServer::Impl {
  ServerOptions options;
  httplib::Server http;
  mutable std::mutex mu;
  std::shared_ptr<const Engine> engine;

  std::shared_ptr<const Engine> current() const {
    std::lock_guard lock(mu);
    return engine;
  }

  // Runs fn against the loaded engine, translating errors to payloads.
  template <typename Fn>
  void guarded(httplib::Response& res, Fn&& fn) const {
    auto e = current();
    if (!e) {
      send(res, 503, error_payload(exit_code(ErrorKind::kIo), "graph not loaded"));
      return;
    }
    try {
      send(res, 200, fn(*e));
    } catch (const Error& err) {
      send_error(res, err);
    } catch (const std::exception& ex) {
      send(res, 500, error_payload(1, ex.what()));
    }
  }

  void routes();
  void stream(const httplib::Request& req, httplib::Response& res,
              const httplib::ContentReader& reader) const;
};

void HttpServer::Impl::routes() {
  http.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [](const Engine& e) { return e.health(); });
  });
  http.Get("/v1/graph/summary", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [](const Engine& e) { return e.summary(); });
  });
  http.Get("/v1/frames", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&](const Engine& e) { return e.frames(query_index(req, "from"), query_index(req, "to")); });
  });
  http.Post("/v1/search", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&](const Engine& e) { return e.search(parse_body(req.body), lax_flag(req)); });
  });
  http.Post("/v1/keyframe-search", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&](const Engine& e) { return e.keyframe_search(parse_body(req.body), lax_flag(req)); });
  });
  if (options.stream) {
    http.Post("/v1/stream", [this](const httplib::Request& req, httplib::Response& res,
                                   const httplib::ContentReader& reader) { stream(req, res, reader); });
  }
  http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    const std::string msg = res.status == 404 ? "no such endpoint: " + req.path
                                              : "request failed with status " + std::to_string(res.status);
    res.set_content(io::canonical(error_payload(1, msg)), kJson);
    return httplib::Server::HandlerResponse::Handled;
  });
}

// NDJSON in, NDJSON out. The first request line is a ConditionFileV1; each
// later line ({} or {"feature": [...]}) advances one target frame. The reply
// has one {"step", "committed"} line per frame and a final {"done": true}
// line carrying the full search payload.
void HttpServer::Impl::stream(const httplib::Request& req, httplib::Response& res,
                              const httplib::ContentReader& reader) const {
  auto e = current();
  if (!e) {
    send(res, 503, error_payload(exit_code(ErrorKind::kIo), "graph not loaded"));
    return;
  }
  const bool lax = lax_flag(req);
  std::vector<std::string> out;
  std::optional<json> condition;
  std::optional<BeamStream> beam;
  std::vector<std::vector<double>> features;
  std::string pending;
  std::size_t line_no = 0;

  auto handle = [&](const std::string& line) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) return;
    const std::string where = "line " + std::to_string(line_no);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::kSchema, "invalid JSON on " + where, where);
    if (!condition) {
      beam.emplace(e->open_stream(j, lax));
      condition = std::move(j);
      return;
    }
    if (!j.is_object()) fail(ErrorKind::kSchema, "expected an object on " + where, where);
    const std::vector<double>* feature = nullptr;
    if (j.contains("feature") && !j["feature"].is_null()) {
      features.push_back(j["feature"].get<std::vector<double>>());
      feature = &features.back();
    }
    const auto committed = beam->advance(feature);
    out.push_back(json{{"step", beam->steps() - 1}, {"committed", committed}}.dump() + "\n");
  };

  try {
    reader([&](const char* data, std::size_t len) {
      pending.append(data, len);
      std::size_t pos;
      while ((pos = pending.find('\n')) != std::string::npos) {
        ++line_no;
        handle(pending.substr(0, pos));
        pending.erase(0, pos + 1);
      }
      return true;
    });
    if (!pending.empty()) {
      ++line_no;
      handle(pending);
    }
    if (!condition) fail(ErrorKind::kSchema, "stream body needs a condition line", "line 1");
    json done = e->stream_result(*condition, beam->finish(), features, lax);
    done["done"] = true;
    out.push_back(done.dump() + "\n");
  } catch (const json::exception& ex) {
    send(res, 400, error_payload(exit_code(ErrorKind::kSchema), ex.what()));
    return;
  } catch (const Error& err) {
    if (out.empty()) {
      send_error(res, err);
      return;
    }
    out.push_back(json{{"error", error_payload(err)}}.dump() + "\n");
  }

  auto lines = std::make_shared<std::vector<std::string>>(std::move(out));
  res.status = 200;
  res.set_chunked_content_provider(
      "application/x-ndjson", [lines, i = std::size_t{0}](std::size_t, httplib::DataSink& sink) mutable {
        if (i < lines->size()) {
          const std::string& s = (*lines)[i++];
          sink.write(s.data(), s.size());
        } else {
          sink.done();
        }
        return true;
      });
}

HttpServer::HttpServer(ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = options;
  const std::size_t workers = std::max<std::size_t>(1, options.workers);
  impl_->http.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  impl_->routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::set_engine(std::shared_ptr<const Engine> engine) {
  std::lock_guard lock(impl_->mu);
  impl_->engine = std::move(engine);
}

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->http.bind_to_any_port(host)
                              : (impl_->http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    fail(ErrorKind::kIo, "cannot bind " + host + ":" + std::to_string(port), std::to_string(port));
  }
  return bound;
}

void HttpServer::listen() { impl_->http.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void HttpServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace mgraph
