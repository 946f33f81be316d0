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
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "base/status.h"
#include "base/value.h"

namespace mdsim::nn {

// Primary-key material for one cached directory. Only pk and placement data
// is cached, never whole rows.
struct HintEntry {
  int64_t id = 0;
  int64_t parent_id = 0;
  std::string name;
  Value partition_key;
  int depth = 0;
};

// LRU map of absolute directory path -> pk hint. Internally synchronized;
// one cache per namenode, shared by all of its worker threads.
class InodeHintCache {
 public:
  explicit InodeHintCache(size_t capacity = 1 << 16) : capacity_(capacity) {}

  std::optional<HintEntry> Lookup(const std::string& path);
  void Put(const std::string& path, const HintEntry& entry);
  void Invalidate(const std::string& path);
  // Drops the path and everything under it (local move/delete healing).
  void InvalidatePrefix(const std::string& path);
  void Clear();
  size_t size() const;

 private:
  void Touch(const std::string& path);

  size_t capacity_;
  mutable std::mutex mu_;
  std::list<std::string> lru_;  // front = most recent
  struct Slot {
    HintEntry entry;
    std::list<std::string>::iterator lru_it;
  };
  std::unordered_map<std::string, Slot> map_;
};

// Pk material for every ancestor (components[0..n-2], root excluded) iff all
// prefixes are cached. Returns nullopt on any miss.
std::optional<std::vector<HintEntry>> ResolveWithHints(InodeHintCache& cache,
                                                       const std::vector<std::string>& comps);

// "/a/b" -> {"a","b"}; rejects empty components. "/" -> {}.
Result<std::vector<std::string>> SplitPath(const std::string& path);
std::string JoinPrefix(const std::vector<std::string>& comps, size_t count);

}  // namespace mdsim::nn
