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

#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "base/clock.h"
#include "base/status.h"
#include "base/value.h"
#include "nlohmann/json_fwd.hpp"
#include "store/types.h"

namespace mdsim::store {

class StoreCluster;

// Move-only transaction handle. Destroying an active handle aborts it.
class Tx {
 public:
  Tx() = default;
  Tx(Tx&& o) noexcept { *this = std::move(o); }
  Tx& operator=(Tx&& o) noexcept;
  Tx(const Tx&) = delete;
  Tx& operator=(const Tx&) = delete;
  ~Tx();

  TxId id() const { return id_; }
  bool valid() const { return cluster_ != nullptr; }
  bool active() const;
  RoundTripLedger ledger() const;

 private:
  friend class StoreCluster;
  Tx(StoreCluster* c, TxId id) : cluster_(c), id_(id) {}
  StoreCluster* cluster_ = nullptr;
  TxId id_ = 0;
};

using RowPredicate = std::function<bool(const Row&)>;

struct ScanOptions {
  RowPredicate predicate;              // empty = all rows
  std::vector<std::string> projection; // empty = all fields
};

// Shared-nothing partitioned row store with node groups, row locks,
// read-committed point reads, batched reads, partition pruned index scans,
// and per-transaction round-trip accounting. Internally synchronized; many
// transactions may run from independent threads.
class StoreCluster {
 public:
  static Result<std::unique_ptr<StoreCluster>> Create(const ClusterConfig& config,
                                                      std::shared_ptr<Clock> clock = nullptr);

  ~StoreCluster();

  const ClusterConfig& config() const { return config_; }
  Clock* clock() const { return clock_.get(); }
  int num_node_groups() const { return num_groups_; }

  // --- schema ---
  Status CreateTable(const TableDef& def);
  bool HasTable(const std::string& name) const;
  // Deterministic hash placement of a partition-key value.
  Result<int> PartitionOf(const std::string& table, const Value& partition_key) const;
  int GroupOfPartition(int partition) const { return partition % num_groups_; }

  // --- transactions ---
  Result<Tx> Begin(const std::optional<TxHint>& hint = std::nullopt);

  Result<std::optional<Row>> ReadPk(Tx& tx, const std::string& table, const Key& pk,
                                    LockMode mode,
                                    const std::optional<Value>& route = std::nullopt);
  // One round trip regardless of size or partitions touched. Elements are
  // acquired in the given order; callers order them by the global lock order.
  Result<std::vector<std::optional<Row>>> BatchRead(Tx& tx, const std::vector<ReadSpec>& items,
                                                    LockMode mode);
  // Per-table convenience form.
  Result<std::vector<std::optional<Row>>> BatchReadPk(Tx& tx, const std::string& table,
                                                      const std::vector<Key>& pks, LockMode mode);

  // PPIS: one partition, one round trip.
  Result<std::vector<Row>> ScanPartition(Tx& tx, const std::string& table,
                                         const Value& partition_key, LockMode mode,
                                         const ScanOptions& opts = {});
  // IS / FTS: every partition participates.
  Result<std::vector<Row>> ScanIndex(Tx& tx, const std::string& table, LockMode mode,
                                     const ScanOptions& opts = {});
  Result<std::vector<Row>> ScanFull(Tx& tx, const std::string& table);

  // Buffered until commit; requires a prior Exclusive (or absence) lock on
  // the row's pk, which is how lock upgrades stay impossible.
  Status Write(Tx& tx, const std::string& table, const Row& row, WriteKind kind);

  Status Commit(Tx& tx);
  void Abort(Tx& tx);

  // --- failure injection ---
  void KillDatanode(int id);
  void ReviveDatanode(int id);
  bool GroupAlive(int group) const;

  // --- introspection ---
  nlohmann::json DumpJson() const;  // tables -> partitions -> rows (quiescent)
  bool TxActive(TxId id) const;
  RoundTripLedger TxLedger(TxId id) const;
  int64_t CommitSeq(const Tx& tx) const;  // 0 if not committed
  // Per-partition access counts since last reset, keyed "table/partition".
  std::map<std::string, int64_t> PartitionAccessCounts() const;
  void ResetPartitionAccessCounts();
  bool LockTableEmpty() const;
  int ActiveTxCount() const;
  // Local vs remote reads for the tx's coordinator (hint quality signal).
  std::pair<int64_t, int64_t> LocalRemoteReads(const Tx& tx) const;

 private:
  struct TxState;
  struct TableState;
  struct LockEntry;

  explicit StoreCluster(const ClusterConfig& config, std::shared_ptr<Clock> clock);

  TxState* GetActive(Tx& tx, Status* st);
  Status AcquireLock(std::unique_lock<std::mutex>& lk, TxState* tx, const std::string& table,
                     const std::string& key_bytes, LockMode mode);
  void ReleaseLocks(TxState* tx);
  void AbortLocked(TxState* tx);
  Result<int> RoutePartition(const TableState& t, const Key& pk,
                             const std::optional<Value>& route) const;
  Status CheckPartitionAlive(const TableState& t, int partition) const;
  std::optional<Row> CommittedRow(const TableState& t, const std::string& key_bytes) const;
  Status ReadOneLocked(std::unique_lock<std::mutex>& lk, TxState* tx, const ReadSpec& spec,
                       LockMode mode, std::optional<Row>* out);
  void CountAccess(const TableState& t, int partition);

  ClusterConfig config_;
  std::shared_ptr<Clock> clock_;
  int num_groups_;

  mutable std::mutex mu_;
  std::condition_variable cv_;  // lock releases

  std::vector<bool> datanode_alive_;
  std::map<std::string, std::unique_ptr<TableState>> tables_;
  std::unordered_map<TxId, std::unique_ptr<TxState>> txs_;
  std::map<std::pair<std::string, std::string>, LockEntry> locks_;
  TxId next_tx_id_ = 1;
  int64_t next_commit_seq_ = 1;
  int next_coordinator_ = 0;  // round-robin for unhinted transactions
  std::map<std::string, int64_t> partition_access_;
};

}  // namespace mdsim::store
