// Copyright (c) 2026 The mdsim Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlohmann/json_fwd.hpp"

namespace mdsim {

// Scalar cell value. Null (monostate) models absent optional fields.
class Value {
 public:
  Value() : v_(std::monostate{}) {}
  Value(int64_t i) : v_(i) {}                      // NOLINT(runtime/explicit)
  Value(int i) : v_(static_cast<int64_t>(i)) {}    // NOLINT(runtime/explicit)
  Value(uint64_t i) : v_(static_cast<int64_t>(i)) {}  // NOLINT(runtime/explicit)
  Value(bool b) : v_(b) {}                         // NOLINT(runtime/explicit)
  Value(std::string s) : v_(std::move(s)) {}       // NOLINT(runtime/explicit)
  Value(const char* s) : v_(std::string(s)) {}     // NOLINT(runtime/explicit)

  bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_int() const { return std::holds_alternative<int64_t>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_str() const { return std::holds_alternative<std::string>(v_); }

  int64_t as_int() const { return std::get<int64_t>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }
  const std::string& as_str() const { return std::get<std::string>(v_); }

  // Canonical byte encoding: type tag, then 8-byte big-endian for ints,
  // raw UTF-8 bytes for strings, one byte for bools. Stable across runs
  // and platforms; partition hashing and pk keys are built from it.
  void AppendCanonical(std::string* out) const;

  bool operator==(const Value& o) const { return v_ == o.v_; }
  bool operator<(const Value& o) const { return v_ < o.v_; }

  nlohmann::json ToJson() const;
  static Value FromJson(const nlohmann::json& j);

 private:
  std::variant<std::monostate, int64_t, bool, std::string> v_;
};

using Row = std::map<std::string, Value>;

// Primary key: field values in the table's declared pk order.
struct Key {
  std::vector<Value> fields;

  Key() = default;
  Key(std::initializer_list<Value> init) : fields(init) {}

  // Injective encoding: each field length-prefixed so tuples never collide.
  std::string Encode() const;

  bool operator==(const Key& o) const { return fields == o.fields; }
  bool operator<(const Key& o) const { return fields < o.fields; }
};

void AppendBigEndian64(std::string* out, uint64_t v);

}  // namespace mdsim
