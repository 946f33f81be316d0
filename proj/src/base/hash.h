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
#include <string_view>

namespace mdsim {

// splitmix64 finalizer. Fixed forever: partition placement and the seeded
// namespace hash depend on it bit-for-bit.
inline uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t HashBytes(uint64_t seed, std::string_view bytes) {
  uint64_t h = Mix64(seed ^ 0x5851f42d4c957f2dULL);
  for (unsigned char c : bytes) {
    h = Mix64(h ^ c);
  }
  return h;
}

}  // namespace mdsim
