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

#include "base/value.h"

#include "nlohmann/json.hpp"

namespace mdsim {

void AppendBigEndian64(std::string* out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out->push_back(static_cast<char>((v >> shift) & 0xff));
  }
}

void Value::AppendCanonical(std::string* out) const {
  if (is_null()) {
    out->push_back('n');
  } else if (is_int()) {
    out->push_back('i');
    AppendBigEndian64(out, static_cast<uint64_t>(as_int()));
  } else if (is_bool()) {
    out->push_back('b');
    out->push_back(as_bool() ? 1 : 0);
  } else {
    out->push_back('s');
    out->append(as_str());
  }
}

std::string Key::Encode() const {
  std::string out;
  for (const Value& v : fields) {
    std::string enc;
    v.AppendCanonical(&enc);
    AppendBigEndian64(&out, enc.size());
    out += enc;
  }
  return out;
}

nlohmann::json Value::ToJson() const {
  if (is_null()) return nullptr;
  if (is_int()) return as_int();
  if (is_bool()) return as_bool();
  return as_str();
}

Value Value::FromJson(const nlohmann::json& j) {
  if (j.is_null()) return Value();
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) return Value(j.get<int64_t>());
  return Value(j.get<std::string>());
}

}  // namespace mdsim
