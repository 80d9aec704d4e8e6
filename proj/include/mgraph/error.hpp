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

#include <stdexcept>
#include <string>

namespace mgraph {

// Error categories. Each maps onto a stable CLI exit code and HTTP status.
enum class ErrorKind {
  kStructural,   // malformed in-memory input (joint-count mismatch, T = 0, ...)
  kDegenerateGraph,
  kInfeasible,
  kIo,
  kSchema,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string detail = {})
      : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

  ErrorKind kind() const { return kind_; }

  // Free-form location or diagnostic payload. For schema errors this is a
  // JSON pointer; for infeasible keyframe segments a JSON object.
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// 1 usage, 2 degenerate graph, 3 infeasible query, 4 I/O or schema.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kStructural: return 1;
    case ErrorKind::kDegenerateGraph: return 2;
    case ErrorKind::kInfeasible: return 3;
    case ErrorKind::kIo:
    case ErrorKind::kSchema: return 4;
  }
  return 1;
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message,
                              std::string detail = {}) {
  throw Error(kind, message, std::move(detail));
}

}  // namespace mgraph
