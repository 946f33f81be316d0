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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nn/namenode.h"
#include "schema/schema.h"
#include "store/cluster.h"

namespace mdsim::nn {

struct UserCtx {
  std::string user = "hdfs";
  std::vector<std::string> groups = {"hadoop"};
  bool superuser = false;
};

// Transaction-scoped snapshot: read-your-writes layered over the rows the
// lock phase pulled in. Op bodies only see this view; they cannot reach the
// store, which is what makes "execute phase reads are cache hits" structural.
class TxSnapshot {
 public:
  void Bind(store::StoreCluster* store, store::Tx* tx) {
    store_ = store;
    tx_ = tx;
  }
  void Seed(const std::string& table, const Key& pk, std::optional<Row> row);
  bool Has(const std::string& table, const Key& pk) const;
  // Rows must have been planned into the snapshot; reading an unplanned row
  // is an op bug surfaced as InvariantViolation.
  Result<std::optional<Row>> Get(const std::string& table, const Key& pk) const;

  Status Upsert(const std::string& table, const Row& row);
  Status Delete(const std::string& table, const Row& pk_row);

 private:
  store::StoreCluster* store_ = nullptr;
  store::Tx* tx_ = nullptr;
  std::map<std::pair<std::string, std::string>, std::optional<Row>> rows_;
};

// Per-path requirements for the lock step.
struct PathReq {
  bool must_exist = true;
  bool must_be_absent = false;
  bool lock_parent = false;
  bool parent_write_perm = false;
};

struct PathState {
  std::string path;
  std::vector<std::string> comps;
  std::vector<schema::InodeRec> ancestors;  // root excluded; parent is last
  schema::InodeRec parent;                  // Root() when depth-1 target
  std::optional<schema::InodeRec> target;
  int target_depth = 0;
  Value target_route;

  const std::string& target_name() const { return comps.back(); }
  Key target_pk() const { return schema::InodeKey(parent.id, comps.back()); }
};

class OpCtx;

// A lockable row with its global-order key. Lock steps sort by
// (owner depth, owner path, table rank, pk bytes): root-down, with related
// rows following their owner inode in the fixed table order.
struct LockItem {
  store::ReadSpec spec;
  int owner_depth = 0;
  std::string owner_path;
  int table_rank = 0;
};

struct OpTemplate {
  store::LockMode target_mode = store::LockMode::kShared;
  bool mutator = false;             // preflight rows ride the hint batch / repair pass
  bool target_read_perm = false;
  std::vector<PathReq> path_reqs;   // aligned with paths; {} = single default req
  PathReq default_req;

  std::function<Status(OpCtx&)> pre_probes;    // RC point reads, pre-lock
  std::function<void(OpCtx&, std::vector<LockItem>*)> extra_locks;
  std::function<Status(OpCtx&)> post_lock;     // related scans, late probes
  std::function<Status(OpCtx&)> execute;       // snapshot-only; buffers writes
};

struct OpOutcome {
  store::RoundTripLedger ledger;  // merged over repair passes and attempts
  int attempts = 0;
  int64_t value = 0;
};

class OpCtx {
 public:
  Namenode* nn = nullptr;
  store::StoreCluster* store = nullptr;
  const UserCtx* user = nullptr;
  store::Tx tx;
  TxSnapshot snap;
  std::vector<PathState> paths;
  int64_t now_ms = 0;

  // Preflight values (mutators).
  int64_t cand_ino = 0;
  int64_t cand_blk = 0;
  int64_t pool_cursor = 0;
  bool parent_has_quota = false;  // from the pre-lock quota probe, when issued

  int64_t result_value = 0;

  PathState& p0() { return paths[0]; }

  // RC point read, seeded into the snapshot.
  Result<std::optional<Row>> ProbeRc(const std::string& table, const Key& pk,
                                     const std::optional<Value>& route = std::nullopt);
  // Late exclusive point lock (contended-path corrections).
  Result<std::optional<Row>> LockPointX(const std::string& table, const Key& pk,
                                        const std::optional<Value>& route = std::nullopt);
  Result<std::vector<Row>> Ppis(const std::string& table, const Value& partition_key,
                                store::LockMode mode, const store::ScanOptions& opts = {});
  Result<std::vector<Row>> IndexScan(const std::string& table, store::LockMode mode,
                                     const store::ScanOptions& opts = {});
};

// Runs one path-based operation under the lock/execute/update template with
// hint-batch resolution, cache repair, subtree-flag handling, permission
// checks and bounded retry (exponential backoff on SubtreeLocked/Timeout).
Result<OpOutcome> RunInodeOp(Namenode* nn, const UserCtx& user, const OpTemplate& tmpl,
                             const std::vector<std::string>& paths);

// Cache repair for one path: per-component RC reads from the top-level
// directory down, in the repair pass's own read-only transaction. Used by
// the runner and by lock-free readers.
Status RepairPath(Namenode* nn, const std::vector<std::string>& comps, bool mutator_preflight,
                  store::RoundTripLedger* ledger);

// Clears a subtree flag owned by a dead namenode (its own small transaction).
// Returns true if this call cleared the flag.
Result<bool> CleanupDeadLock(Namenode* nn, const schema::InodeRec& rec,
                             store::RoundTripLedger* ledger);

std::vector<store::ReadSpec> PreflightSpecs(const Namenode* nn);

}  // namespace mdsim::nn
