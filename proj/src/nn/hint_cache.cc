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

#include "nn/hint_cache.h"

namespace mdsim::nn {

std::optional<HintEntry> InodeHintCache::Lookup(const std::string& path) {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = map_.find(path);
  if (it == map_.end()) return std::nullopt;
  lru_.splice(lru_.begin(), lru_, it->second.lru_it);
  return it->second.entry;
}

void InodeHintCache::Put(const std::string& path, const HintEntry& entry) {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = map_.find(path);
  if (it != map_.end()) {
    it->second.entry = entry;
    lru_.splice(lru_.begin(), lru_, it->second.lru_it);
    return;
  }
  lru_.push_front(path);
  map_[path] = Slot{entry, lru_.begin()};
  while (map_.size() > capacity_) {
    map_.erase(lru_.back());
    lru_.pop_back();
  }
}

void InodeHintCache::Invalidate(const std::string& path) {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = map_.find(path);
  if (it == map_.end()) return;
  lru_.erase(it->second.lru_it);
  map_.erase(it);
}

void InodeHintCache::InvalidatePrefix(const std::string& path) {
  std::lock_guard<std::mutex> lk(mu_);
  std::string prefix = path + "/";
  for (auto it = map_.begin(); it != map_.end();) {
    if (it->first == path || it->first.rfind(prefix, 0) == 0) {
      lru_.erase(it->second.lru_it);
      it = map_.erase(it);
    } else {
      ++it;
    }
  }
}

void InodeHintCache::Clear() {
  std::lock_guard<std::mutex> lk(mu_);
  map_.clear();
  lru_.clear();
}

size_t InodeHintCache::size() const {
  std::lock_guard<std::mutex> lk(mu_);
  return map_.size();
}

std::optional<std::vector<HintEntry>> ResolveWithHints(InodeHintCache& cache,
                                                       const std::vector<std::string>& comps) {
  std::vector<HintEntry> out;
  if (comps.empty()) return out;  // root only: nothing to resolve
  std::string prefix;
  for (size_t i = 0; i + 1 < comps.size(); ++i) {
    prefix += "/" + comps[i];
    auto e = cache.Lookup(prefix);
    if (!e.has_value()) return std::nullopt;
    out.push_back(*e);
  }
  return out;
}

Result<std::vector<std::string>> SplitPath(const std::string& path) {
  if (path.empty() || path[0] != '/') {
    return Status::InvalidArgument("path must be absolute: " + path);
  }
  std::vector<std::string> comps;
  size_t i = 1;
  while (i <= path.size()) {
    size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    if (j == i) {
      if (i == path.size()) break;  // trailing slash
      return Status::InvalidArgument("empty path component in " + path);
    }
    comps.push_back(path.substr(i, j - i));
    i = j + 1;
  }
  return comps;
}

std::string JoinPrefix(const std::vector<std::string>& comps, size_t count) {
  std::string out;
  for (size_t i = 0; i < count && i < comps.size(); ++i) out += "/" + comps[i];
  if (out.empty()) out = "/";
  return out;
}

}  // namespace mdsim::nn
