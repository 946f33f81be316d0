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

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "base/value.h"
#include "nlohmann/json_fwd.hpp"

namespace mdsim::store {

enum class LockMode : uint8_t {
  kReadCommitted = 0,  // never waits, never conflicts
  kShared = 1,
  kExclusive = 2,
};

const char* LockModeName(LockMode m);

enum class WriteKind : uint8_t { kUpsert, kDelete };

enum class BatchFlushMode : uint8_t {
  kPerRow,   // one PK_w per buffered row (default accounting)
  kGrouped,  // one PK_w per (table, partition) group
};

struct ClusterConfig {
  int num_datanodes = 2;
  int replication_degree = 2;
  int partitions_per_table = 8;
  int64_t lock_wait_timeout_ms = 1200;  // simulated ms
  BatchFlushMode batch_flush_mode = BatchFlushMode::kPerRow;
  uint64_t hash_seed = 0;
};

struct TableDef {
  std::string name;
  std::vector<std::string> pk_fields;   // ordered
  std::string partition_key_field;      // pk field or declared field
  std::set<std::string> indexed_fields;
};

// Round-trip accounting classes. Every store call increments exactly one;
// a batch of any size is one Batch, a partition pruned index scan one PPIS.
enum class OpClass : uint8_t {
  kPkRc = 0,
  kPkShared,
  kPkExcl,
  kPkWrite,
  kBatch,
  kPpis,
  kIndexScan,
  kFullScan,
};
inline constexpr int kNumOpClasses = 8;

const char* OpClassName(OpClass c);  // "PK_rc", "PK_shared", ... "FTS"

struct RoundTripLedger {
  std::array<int64_t, kNumOpClasses> counts{};

  void Add(OpClass c, int64_t n = 1) { counts[static_cast<int>(c)] += n; }
  int64_t Get(OpClass c) const { return counts[static_cast<int>(c)]; }
  int64_t total() const {
    int64_t t = 0;
    for (int64_t c : counts) t += c;
    return t;
  }
  RoundTripLedger& operator+=(const RoundTripLedger& o) {
    for (int i = 0; i < kNumOpClasses; ++i) counts[i] += o.counts[i];
    return *this;
  }
  bool operator==(const RoundTripLedger& o) const { return counts == o.counts; }

  nlohmann::json ToJson() const;
  std::string ToString() const;
};

// An element of a multi-table batched read. `route` overrides partition
// derivation for rows whose partition key is not part of the pk (the inode
// table); callers that know the placement always pass it.
struct ReadSpec {
  std::string table;
  Key pk;
  std::optional<Value> route;
};

struct TxHint {
  std::string table;
  Value partition_key;
};

using TxId = uint64_t;

}  // namespace mdsim::store
