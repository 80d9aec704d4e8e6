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

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mgraph/error.hpp"

namespace mgraph::detail {

using nlohmann::json;

inline std::string child(const std::string& ptr, std::string_view key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') {
      escaped += "~0";
    } else if (c == '/') {
      escaped += "~1";
    } else {
      escaped += c;
    }
  }
  return ptr + "/" + escaped;
}

inline std::string child(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

[[noreturn]] inline void schema_error(const std::string& ptr, const std::string& what) {
  fail(ErrorKind::kSchema, what + " at " + (ptr.empty() ? std::string("/") : ptr),
       ptr.empty() ? std::string("/") : ptr);
}

inline const json& expect_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) schema_error(ptr, "expected an object");
  return j;
}

inline const json& expect_array(const json& j, const std::string& ptr) {
  if (!j.is_array()) schema_error(ptr, "expected an array");
  return j;
}

// Rejects keys outside `allowed` unless lax.
inline void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                       const std::string& ptr, bool lax) {
  expect_object(obj, ptr);
  if (lax) return;
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) schema_error(child(ptr, key), "unknown field '" + key + "'");
  }
}

inline const json& require(const json& obj, std::string_view key, const std::string& ptr) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) schema_error(child(ptr, key), "missing required field");
  return *it;
}

inline bool has(const json& obj, std::string_view key) {
  auto it = obj.find(std::string(key));
  return it != obj.end() && !it->is_null();
}

inline double get_number(const json& j, const std::string& ptr) {
  if (!j.is_number()) schema_error(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(ptr, "non-finite number");
  return v;
}

inline double get_nonneg(const json& j, const std::string& ptr) {
  const double v = get_number(j, ptr);
  if (v < 0.0) schema_error(ptr, "expected a value >= 0");
  return v;
}

inline double get_positive(const json& j, const std::string& ptr) {
  const double v = get_number(j, ptr);
  if (!(v > 0.0)) schema_error(ptr, "expected a value > 0");
  return v;
}

inline std::uint64_t get_uint(const json& j, const std::string& ptr) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  schema_error(ptr, "expected a non-negative integer");
}

inline std::int64_t get_int(const json& j, const std::string& ptr) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  schema_error(ptr, "expected an integer");
}

inline std::string get_string(const json& j, const std::string& ptr) {
  if (!j.is_string()) schema_error(ptr, "expected a string");
  return j.get<std::string>();
}

inline json parse_or_throw(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kSchema, source + ": invalid JSON: " + e.what(), "/");
  }
}

}  // namespace mgraph::detail
