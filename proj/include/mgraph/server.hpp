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
#include <memory>
#include <string>

#include "mgraph/engine.hpp"

namespace mgraph {

struct ServerOptions {
  bool stream = false;        // expose POST /v1/stream
  std::size_t workers = 16;   // request worker threads
};

// HTTP/1.1 JSON API over one immutable Engine. Until set_engine() is called
// every graph endpoint answers 503.
class HttpServer {
 public:
  explicit HttpServer(ServerOptions options = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  void set_engine(std::shared_ptr<const Engine> engine);

  // Binds without serving; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Serves until stop(). Call bind() first.
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// HTTP status for an error kind: 400 schema/structural, 409 infeasible,
// 500 otherwise.
int http_status(ErrorKind kind);

}  // namespace mgraph
