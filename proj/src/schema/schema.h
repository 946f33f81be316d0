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
#include <optional>
#include <string>
#include <vector>

#include "base/status.h"
#include "base/value.h"
#include "store/cluster.h"

namespace mdsim::schema {

// Table names. One row per directory inode; file inodes spread their
// block/replica/state metadata over the file-related tables, all of which
// are partitioned by the owning inode id.
inline constexpr const char* kInodes = "inodes";
inline constexpr const char* kBlocks = "blocks";
inline constexpr const char* kReplicas = "replicas";
inline constexpr const char* kUrb = "urb";            // under-replicated
inline constexpr const char* kPrb = "prb";            // pending replication
inline constexpr const char* kCr = "cr";              // corrupted replicas
inline constexpr const char* kRuc = "ruc";            // replicas under construction
inline constexpr const char* kEr = "er";              // excess replicas
inline constexpr const char* kInv = "inv";            // invalidated replicas
inline constexpr const char* kLeases = "leases";
inline constexpr const char* kQuotas = "quotas";
inline constexpr const char* kSysmeta = "sysmeta";    // id counters + namenode liveness
inline constexpr const char* kSubtreeOps = "subtree_ops";

// Fixed related-table read order for lock plans (after the inode row).
const std::vector<std::string>& RelatedTableOrder();
int TableRank(const std::string& table);  // inode=0, lease=1, ... sysmeta/subtree last

inline constexpr int64_t kRootId = 1;
inline constexpr int64_t kNoInode = 0;

// sysmeta row keys
inline constexpr const char* kSysInoNext = "ino_next";
inline constexpr const char* kSysBlkNext = "blk_next";
inline constexpr const char* kSysNnNext = "nnid_next";
inline constexpr const char* kSysSubopNext = "subop_next";
inline constexpr const char* kSysEpoch = "cache_epoch";
inline constexpr const char* kSysPoolCursor = "pool_cursor";
std::string SysNamenodeKey(int64_t nn_id);  // "nn:<id>"

inline constexpr int64_t kBlockNominalBytes = 128LL << 20;
inline constexpr int kNumSimStorageIds = 24;  // simulated fs datanode pool

struct PartitionPolicy {
  int random_partition_depth = 2;  // levels placed by seeded name hash
  uint64_t name_hash_seed = 0;
};

// Documented, bit-exact encoding hashed for pseudo-random placement:
// 8-byte big-endian parent inode id followed by the UTF-8 bytes of name.
std::string EncodeInodeHashKey(int64_t parent_id, const std::string& name);

// Placement rule. Inodes at depth <= random_partition_depth scatter by a
// seeded hash of (parent, name); deeper inodes colocate with their siblings
// under the parent's id. Root (depth 0) is never placed by this rule.
Value InodePartitionKey(const PartitionPolicy& policy, int64_t parent_id, const std::string& name,
                        int depth);

struct InodeRec {
  int64_t id = 0;
  int64_t parent_id = 0;
  std::string name;
  Value partition_key;
  bool is_dir = false;
  int perms = 0;               // 12-bit mode
  std::string owner;
  std::string group;
  int replication = 0;         // files only
  int64_t subtree_lock_owner = 0;  // namenode id, 0 = none
  int depth = 0;               // levels from root; refreshed lazily after moves
  int64_t size_hint = 0;
  int64_t mtime = 0;

  Row ToRow() const;
  static InodeRec FromRow(const Row& row);

  static InodeRec Root();
};

struct SubtreeOpRec {
  int64_t op_id = 0;
  int64_t namenode_id = 0;
  int64_t root_inode_id = 0;
  std::string root_path;
  std::string kind;  // Delete | Move | Chmod | Chown | SetQuota
  int64_t started_at = 0;

  Row ToRow() const;
  static SubtreeOpRec FromRow(const Row& row);
};

// --- keys ---
Key InodeKey(int64_t parent_id, const std::string& name);
Key LeaseKey(int64_t inode_id);
Key QuotaKey(int64_t inode_id);
Key BlockKey(int64_t inode_id, int64_t block_id);
Key ReplicaKey(int64_t inode_id, int64_t block_id, int64_t storage_id);
Key SysKey(const std::string& key);
Key SubtreeOpKey(int64_t op_id);

Row SysRow(const std::string& key, int64_t val, int64_t val2 = 0);
Row LeaseRow(int64_t inode_id, const std::string& holder, int64_t acquired_at);
Row QuotaRow(int64_t inode_id, int64_t ns_quota, int64_t ds_quota, int64_t ns_used,
             int64_t ds_used);

// Creates the 13 tables and seeds the root inode, the root quota row and the
// id counters. Fails with DuplicateTable on a non-fresh store.
Status DefineSchema(store::StoreCluster* store);

// Allocates the next value of a sysmeta counter in its own small transaction
// (exclusive-locked increment). Aborted increments may burn nothing here, but
// callers must not assume gap-free sequences.
Result<int64_t> AllocateId(store::StoreCluster* store, const std::string& counter_key);

// POSIX-ish permission check against a 12-bit mode. bit: 4 read, 2 write,
// 1 execute/traverse.
bool HasPerm(const InodeRec& rec, const std::string& user,
             const std::vector<std::string>& groups, int bit);

}  // namespace mdsim::schema
