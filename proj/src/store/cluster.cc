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

#include "store/cluster.h"

#include <algorithm>
#include <cassert>

#include "base/hash.h"
#include "nlohmann/json.hpp"

namespace mdsim::store {

const char* LockModeName(LockMode m) {
  switch (m) {
    case LockMode::kReadCommitted: return "RC";
    case LockMode::kShared: return "S";
    case LockMode::kExclusive: return "X";
  }
  return "?";
}

const char* OpClassName(OpClass c) {
  switch (c) {
    case OpClass::kPkRc: return "PK_rc";
    case OpClass::kPkShared: return "PK_shared";
    case OpClass::kPkExcl: return "PK_excl";
    case OpClass::kPkWrite: return "PK_w";
    case OpClass::kBatch: return "Batch";
    case OpClass::kPpis: return "PPIS";
    case OpClass::kIndexScan: return "IS";
    case OpClass::kFullScan: return "FTS";
  }
  return "?";
}

nlohmann::json RoundTripLedger::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  for (int i = 0; i < kNumOpClasses; ++i) {
    j[OpClassName(static_cast<OpClass>(i))] = counts[i];
  }
  j["total"] = total();
  return j;
}

std::string RoundTripLedger::ToString() const { return ToJson().dump(); }

// ---------------------------------------------------------------------------

struct StoreCluster::TableState {
  TableDef def;
  int num_partitions;
  // committed rows, per partition, ordered by encoded pk
  std::vector<std::map<std::string, Row>> partitions;
  std::unordered_map<std::string, int> key_partition;  // encoded pk -> partition
};

struct StoreCluster::LockEntry {
  TxId excl = 0;
  std::set<TxId> shared;
  bool Free() const { return excl == 0 && shared.empty(); }
};

struct StoreCluster::TxState {
  TxId id = 0;
  enum class S { kActive, kCommitted, kAborted } state = S::kActive;
  int coordinator_group = 0;
  RoundTripLedger ledger;
  std::map<std::pair<std::string, std::string>, LockMode> held;
  struct BufferedWrite {
    std::string table;
    Row row;
    WriteKind kind;
  };
  std::vector<BufferedWrite> buffer;
  int64_t commit_seq = 0;
  int64_t local_reads = 0;
  int64_t remote_reads = 0;
  bool handle_alive = true;
};

// ---------------------------------------------------------------------------

Tx& Tx::operator=(Tx&& o) noexcept {
  if (this != &o) {
    if (cluster_ != nullptr) cluster_->Abort(*this);
    cluster_ = o.cluster_;
    id_ = o.id_;
    o.cluster_ = nullptr;
    o.id_ = 0;
  }
  return *this;
}

Tx::~Tx() {
  if (cluster_ != nullptr) cluster_->Abort(*this);
}

bool Tx::active() const {
  return cluster_ != nullptr && cluster_->TxActive(id_);
}

RoundTripLedger Tx::ledger() const {
  if (cluster_ == nullptr) return {};
  return cluster_->TxLedger(id_);
}

// ---------------------------------------------------------------------------

StoreCluster::StoreCluster(const ClusterConfig& config, std::shared_ptr<Clock> clock)
    : config_(config), clock_(std::move(clock)) {
  num_groups_ = config_.num_datanodes / config_.replication_degree;
  datanode_alive_.assign(config_.num_datanodes, true);
}

StoreCluster::~StoreCluster() = default;

Result<std::unique_ptr<StoreCluster>> StoreCluster::Create(const ClusterConfig& config,
                                                           std::shared_ptr<Clock> clock) {
  if (config.num_datanodes <= 0 || config.replication_degree <= 0 ||
      config.partitions_per_table <= 0) {
    return Status::InvalidConfig("counts must be positive");
  }
  if (config.num_datanodes % config.replication_degree != 0) {
    return Status::InvalidConfig("datanode count must be a multiple of the replication degree");
  }
  if (clock == nullptr) clock = std::make_shared<WallClock>();
  return std::unique_ptr<StoreCluster>(new StoreCluster(config, std::move(clock)));
}

Status StoreCluster::CreateTable(const TableDef& def) {
  std::lock_guard<std::mutex> lk(mu_);
  if (def.name.empty() || def.pk_fields.empty() || def.partition_key_field.empty()) {
    return Status::InvalidArgument("table needs a name, pk fields and a partition key field");
  }
  if (tables_.count(def.name) != 0) {
    return Status::DuplicateTable(def.name);
  }
  auto t = std::make_unique<TableState>();
  t->def = def;
  t->num_partitions = config_.partitions_per_table;
  t->partitions.resize(t->num_partitions);
  tables_[def.name] = std::move(t);
  return Status::OK();
}

bool StoreCluster::HasTable(const std::string& name) const {
  std::lock_guard<std::mutex> lk(mu_);
  return tables_.count(name) != 0;
}

static int PartitionIndex(uint64_t seed, int num_partitions, const Value& key) {
  std::string bytes;
  key.AppendCanonical(&bytes);
  return static_cast<int>(HashBytes(seed, bytes) % static_cast<uint64_t>(num_partitions));
}

Result<int> StoreCluster::PartitionOf(const std::string& table, const Value& partition_key) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = tables_.find(table);
  if (it == tables_.end()) return Status::NotFound("no such table: " + table);
  return PartitionIndex(config_.hash_seed, it->second->num_partitions, partition_key);
}

bool StoreCluster::GroupAlive(int group) const {
  int r = config_.replication_degree;
  for (int d = group * r; d < (group + 1) * r; ++d) {
    if (datanode_alive_[d]) return true;
  }
  return false;
}

void StoreCluster::KillDatanode(int id) {
  std::lock_guard<std::mutex> lk(mu_);
  if (id >= 0 && id < static_cast<int>(datanode_alive_.size())) datanode_alive_[id] = false;
  cv_.notify_all();
}

void StoreCluster::ReviveDatanode(int id) {
  std::lock_guard<std::mutex> lk(mu_);
  if (id >= 0 && id < static_cast<int>(datanode_alive_.size())) datanode_alive_[id] = true;
  cv_.notify_all();
}

// ---------------------------------------------------------------------------

Result<Tx> StoreCluster::Begin(const std::optional<TxHint>& hint) {
  std::lock_guard<std::mutex> lk(mu_);
  int group;
  if (hint.has_value()) {
    auto it = tables_.find(hint->table);
    if (it == tables_.end()) return Status::NotFound("no such table: " + hint->table);
    int p = PartitionIndex(config_.hash_seed, it->second->num_partitions, hint->partition_key);
    group = GroupOfPartition(p);
    if (!GroupAlive(group)) {
      return Status::Unavailable("hinted partition's node group is down");
    }
  } else {
    group = next_coordinator_++ % num_groups_;
  }
  auto tx = std::make_unique<TxState>();
  tx->id = next_tx_id_++;
  tx->coordinator_group = group;
  TxId id = tx->id;
  txs_[id] = std::move(tx);
  return Tx(this, id);
}

StoreCluster::TxState* StoreCluster::GetActive(Tx& tx, Status* st) {
  auto it = txs_.find(tx.id());
  if (it == txs_.end() || it->second->state != TxState::S::kActive) {
    *st = Status::TxInactive("transaction is not active");
    return nullptr;
  }
  return it->second.get();
}

Status StoreCluster::AcquireLock(std::unique_lock<std::mutex>& lk, TxState* tx,
                                 const std::string& table, const std::string& key_bytes,
                                 LockMode mode) {
  assert(mode != LockMode::kReadCommitted);
  auto held_it = tx->held.find({table, key_bytes});
  if (held_it != tx->held.end()) {
    if (held_it->second == LockMode::kExclusive || held_it->second == mode) {
      return Status::OK();  // re-entrant at same or stronger level
    }
    // Shared held, Exclusive requested: upgrades are a design violation.
    return Status::LockUpgrade(table + " pk already held Shared");
  }

  const int64_t deadline_sim = clock_->NowMs() + config_.lock_wait_timeout_ms;
  auto wall_deadline = std::chrono::steady_clock::now() +
                       std::chrono::microseconds(config_.lock_wait_timeout_ms *
                                                 clock_->wall_us_per_sim_ms());
  for (;;) {
    LockEntry& e = locks_[{table, key_bytes}];
    bool grantable = (mode == LockMode::kShared)
                         ? (e.excl == 0 || e.excl == tx->id)
                         : (e.excl == 0 && (e.shared.empty() ||
                                            (e.shared.size() == 1 && e.shared.count(tx->id))));
    if (grantable && mode == LockMode::kExclusive && e.shared.count(tx->id)) {
      // Caught above via held map; defensive.
      return Status::LockUpgrade(table + " pk already held Shared");
    }
    if (grantable) {
      if (mode == LockMode::kShared) {
        e.shared.insert(tx->id);
      } else {
        e.excl = tx->id;
      }
      tx->held[{table, key_bytes}] = mode;
      return Status::OK();
    }
    if (clock_->simulated()) {
      // Single-worker deterministic mode: nobody else can release the lock
      // while we hold the thread, so the wait runs straight to the deadline.
      static_cast<SimClock*>(clock_.get())->Advance(config_.lock_wait_timeout_ms);
      AbortLocked(tx);
      return Status::Timeout("lock wait timed out (simulated)");
    }
    if (cv_.wait_until(lk, wall_deadline) == std::cv_status::timeout &&
        clock_->NowMs() >= deadline_sim) {
      AbortLocked(tx);
      return Status::Timeout("lock wait timed out");
    }
    if (tx->state != TxState::S::kActive) {
      return Status::TxInactive("transaction aborted while waiting");
    }
  }
}

void StoreCluster::ReleaseLocks(TxState* tx) {
  for (const auto& [key, mode] : tx->held) {
    auto it = locks_.find(key);
    if (it == locks_.end()) continue;
    if (mode == LockMode::kExclusive) {
      if (it->second.excl == tx->id) it->second.excl = 0;
    } else {
      it->second.shared.erase(tx->id);
    }
    if (it->second.Free()) locks_.erase(it);
  }
  tx->held.clear();
  cv_.notify_all();
}

void StoreCluster::AbortLocked(TxState* tx) {
  if (tx->state != TxState::S::kActive) return;
  tx->state = TxState::S::kAborted;
  tx->buffer.clear();
  ReleaseLocks(tx);
}

Result<int> StoreCluster::RoutePartition(const TableState& t, const Key& pk,
                                         const std::optional<Value>& route) const {
  if (route.has_value()) {
    return PartitionIndex(config_.hash_seed, t.num_partitions, *route);
  }
  // Derive from the pk when the partition key is a pk field; otherwise fall
  // back to hashing the whole pk (callers that know better pass a route).
  for (size_t i = 0; i < t.def.pk_fields.size(); ++i) {
    if (t.def.pk_fields[i] == t.def.partition_key_field) {
      if (i >= pk.fields.size()) return Status::InvalidArgument("short pk");
      return PartitionIndex(config_.hash_seed, t.num_partitions, pk.fields[i]);
    }
  }
  return static_cast<int>(HashBytes(config_.hash_seed, pk.Encode()) %
                          static_cast<uint64_t>(t.num_partitions));
}

Status StoreCluster::CheckPartitionAlive(const TableState& t, int partition) const {
  (void)t;
  if (!GroupAlive(GroupOfPartition(partition))) {
    return Status::Unavailable("partition's node group has no alive member");
  }
  return Status::OK();
}

std::optional<Row> StoreCluster::CommittedRow(const TableState& t,
                                              const std::string& key_bytes) const {
  auto pit = t.key_partition.find(key_bytes);
  if (pit == t.key_partition.end()) return std::nullopt;
  const auto& part = t.partitions[pit->second];
  auto rit = part.find(key_bytes);
  if (rit == part.end()) return std::nullopt;
  return rit->second;
}

void StoreCluster::CountAccess(const TableState& t, int partition) {
  partition_access_[t.def.name + "/" + std::to_string(partition)]++;
}

Status StoreCluster::ReadOneLocked(std::unique_lock<std::mutex>& lk, TxState* tx,
                                   const ReadSpec& spec, LockMode mode,
                                   std::optional<Row>* out) {
  auto tit = tables_.find(spec.table);
  if (tit == tables_.end()) return Status::NotFound("no such table: " + spec.table);
  TableState& t = *tit->second;
  std::string key_bytes = spec.pk.Encode();

  // Existing rows answer from where they live; absent rows route by the
  // caller-supplied placement (or pk derivation).
  int partition;
  auto pit = t.key_partition.find(key_bytes);
  if (pit != t.key_partition.end()) {
    partition = pit->second;
  } else {
    auto rp = RoutePartition(t, spec.pk, spec.route);
    if (!rp.ok()) return rp.status();
    partition = *rp;
  }
  CountAccess(t, partition);
  Status alive = CheckPartitionAlive(t, partition);
  if (!alive.ok()) {
    AbortLocked(tx);
    return alive;
  }
  if (GroupOfPartition(partition) == tx->coordinator_group) {
    tx->local_reads++;
  } else {
    tx->remote_reads++;
  }
  if (mode != LockMode::kReadCommitted) {
    MDSIM_RETURN_IF_ERROR(AcquireLock(lk, tx, spec.table, key_bytes, mode));
  }
  *out = CommittedRow(t, key_bytes);
  return Status::OK();
}

Result<std::optional<Row>> StoreCluster::ReadPk(Tx& tx, const std::string& table, const Key& pk,
                                                LockMode mode, const std::optional<Value>& route) {
  std::unique_lock<std::mutex> lk(mu_);
  Status st;
  TxState* t = GetActive(tx, &st);
  if (t == nullptr) return st;
  switch (mode) {
    case LockMode::kReadCommitted: t->ledger.Add(OpClass::kPkRc); break;
    case LockMode::kShared: t->ledger.Add(OpClass::kPkShared); break;
    case LockMode::kExclusive: t->ledger.Add(OpClass::kPkExcl); break;
  }
  std::optional<Row> row;
  MDSIM_RETURN_IF_ERROR(ReadOneLocked(lk, t, ReadSpec{table, pk, route}, mode, &row));
  return row;
}

Result<std::vector<std::optional<Row>>> StoreCluster::BatchRead(Tx& tx,
                                                                const std::vector<ReadSpec>& items,
                                                                LockMode mode) {
  if (items.empty()) return Status::InvalidArgument("empty batch");
  std::unique_lock<std::mutex> lk(mu_);
  Status st;
  TxState* t = GetActive(tx, &st);
  if (t == nullptr) return st;
  t->ledger.Add(OpClass::kBatch);
  std::vector<std::optional<Row>> out(items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    MDSIM_RETURN_IF_ERROR(ReadOneLocked(lk, t, items[i], mode, &out[i]));
  }
  return out;
}

Result<std::vector<std::optional<Row>>> StoreCluster::BatchReadPk(Tx& tx, const std::string& table,
                                                                  const std::vector<Key>& pks,
                                                                  LockMode mode) {
  std::vector<ReadSpec> items;
  items.reserve(pks.size());
  for (const Key& k : pks) items.push_back(ReadSpec{table, k, std::nullopt});
  return BatchRead(tx, items, mode);
}

static Row ProjectRow(const Row& row, const std::vector<std::string>& projection) {
  if (projection.empty()) return row;
  Row out;
  for (const std::string& f : projection) {
    auto it = row.find(f);
    if (it != row.end()) out[f] = it->second;
  }
  return out;
}

Result<std::vector<Row>> StoreCluster::ScanPartition(Tx& tx, const std::string& table,
                                                     const Value& partition_key, LockMode mode,
                                                     const ScanOptions& opts) {
  std::unique_lock<std::mutex> lk(mu_);
  Status st;
  TxState* t = GetActive(tx, &st);
  if (t == nullptr) return st;
  auto tit = tables_.find(table);
  if (tit == tables_.end()) return Status::NotFound("no such table: " + table);
  TableState& ts = *tit->second;
  int partition = PartitionIndex(config_.hash_seed, ts.num_partitions, partition_key);

  t->ledger.Add(OpClass::kPpis);
  CountAccess(ts, partition);
  Status alive = CheckPartitionAlive(ts, partition);
  if (!alive.ok()) {
    AbortLocked(t);
    return alive;
  }
  if (GroupOfPartition(partition) == t->coordinator_group) {
    t->local_reads++;
  } else {
    t->remote_reads++;
  }

  // Candidate set snapshot, then per-row locks in key order. Rows inserted
  // while the scan waits are not visited; the fs layer's parent/flag locks
  // own phantom prevention.
  std::vector<std::string> keys;
  for (const auto& [kb, row] : ts.partitions[partition]) {
    if (!opts.predicate || opts.predicate(row)) keys.push_back(kb);
  }
  std::vector<Row> out;
  for (const std::string& kb : keys) {
    if (mode != LockMode::kReadCommitted) {
      MDSIM_RETURN_IF_ERROR(AcquireLock(lk, t, table, kb, mode));
    }
    auto row = CommittedRow(ts, kb);
    if (!row.has_value()) continue;  // deleted while waiting
    if (opts.predicate && !opts.predicate(*row)) continue;
    out.push_back(ProjectRow(*row, opts.projection));
  }
  return out;
}

Result<std::vector<Row>> StoreCluster::ScanIndex(Tx& tx, const std::string& table, LockMode mode,
                                                 const ScanOptions& opts) {
  std::unique_lock<std::mutex> lk(mu_);
  Status st;
  TxState* t = GetActive(tx, &st);
  if (t == nullptr) return st;
  auto tit = tables_.find(table);
  if (tit == tables_.end()) return Status::NotFound("no such table: " + table);
  TableState& ts = *tit->second;

  t->ledger.Add(OpClass::kIndexScan);
  for (int p = 0; p < ts.num_partitions; ++p) {
    CountAccess(ts, p);
    Status alive = CheckPartitionAlive(ts, p);
    if (!alive.ok()) {
      AbortLocked(t);
      return alive;
    }
  }
  std::vector<Row> out;
  for (int p = 0; p < ts.num_partitions; ++p) {
    std::vector<std::string> keys;
    for (const auto& [kb, row] : ts.partitions[p]) {
      if (!opts.predicate || opts.predicate(row)) keys.push_back(kb);
    }
    for (const std::string& kb : keys) {
      if (mode != LockMode::kReadCommitted) {
        MDSIM_RETURN_IF_ERROR(AcquireLock(lk, t, table, kb, mode));
      }
      auto row = CommittedRow(ts, kb);
      if (!row.has_value()) continue;
      if (opts.predicate && !opts.predicate(*row)) continue;
      out.push_back(ProjectRow(*row, opts.projection));
    }
  }
  return out;
}

Result<std::vector<Row>> StoreCluster::ScanFull(Tx& tx, const std::string& table) {
  std::unique_lock<std::mutex> lk(mu_);
  Status st;
  TxState* t = GetActive(tx, &st);
  if (t == nullptr) return st;
  auto tit = tables_.find(table);
  if (tit == tables_.end()) return Status::NotFound("no such table: " + table);
  TableState& ts = *tit->second;

  t->ledger.Add(OpClass::kFullScan);
  std::vector<Row> out;
  for (int p = 0; p < ts.num_partitions; ++p) {
    CountAccess(ts, p);
    Status alive = CheckPartitionAlive(ts, p);
    if (!alive.ok()) {
      AbortLocked(t);
      return alive;
    }
    for (const auto& [kb, row] : ts.partitions[p]) out.push_back(row);
  }
  return out;
}

Status StoreCluster::Write(Tx& tx, const std::string& table, const Row& row, WriteKind kind) {
  std::lock_guard<std::mutex> lk(mu_);
  Status st;
  TxState* t = GetActive(tx, &st);
  if (t == nullptr) return st;
  auto tit = tables_.find(table);
  if (tit == tables_.end()) return Status::NotFound("no such table: " + table);
  TableState& ts = *tit->second;

  Key pk;
  for (const std::string& f : ts.def.pk_fields) {
    auto it = row.find(f);
    if (it == row.end()) return Status::InvalidArgument("row is missing pk field " + f);
    pk.fields.push_back(it->second);
  }
  if (kind == WriteKind::kUpsert && row.count(ts.def.partition_key_field) == 0) {
    return Status::InvalidArgument("row is missing partition key field " +
                                   ts.def.partition_key_field);
  }
  std::string key_bytes = pk.Encode();
  auto held = t->held.find({table, key_bytes});
  if (held == t->held.end() || held->second != LockMode::kExclusive) {
    return Status::LockNotHeld("write requires a prior exclusive read of " + table + " pk");
  }
  t->buffer.push_back(TxState::BufferedWrite{table, row, kind});
  return Status::OK();
}

Status StoreCluster::Commit(Tx& tx) {
  std::lock_guard<std::mutex> lk(mu_);
  Status st;
  TxState* t = GetActive(tx, &st);
  if (t == nullptr) return st;

  // Resolve target partitions first: all-or-nothing across partitions.
  struct Apply {
    TableState* ts;
    std::string key_bytes;
    int partition;
    const TxState::BufferedWrite* w;
  };
  std::vector<Apply> applies;
  applies.reserve(t->buffer.size());
  for (const auto& w : t->buffer) {
    TableState& ts = *tables_.at(w.table);
    Key pk;
    for (const std::string& f : ts.def.pk_fields) pk.fields.push_back(w.row.at(f));
    std::string kb = pk.Encode();
    int partition;
    if (w.kind == WriteKind::kUpsert) {
      partition = PartitionIndex(config_.hash_seed, ts.num_partitions,
                                 w.row.at(ts.def.partition_key_field));
    } else {
      auto pit = ts.key_partition.find(kb);
      partition = (pit != ts.key_partition.end())
                      ? pit->second
                      : [&] {
                          auto rp = RoutePartition(ts, pk, std::nullopt);
                          return rp.ok() ? *rp : 0;
                        }();
    }
    Status alive = CheckPartitionAlive(ts, partition);
    if (!alive.ok()) {
      AbortLocked(t);
      return alive;
    }
    applies.push_back(Apply{&ts, kb, partition, &w});
  }

  std::set<std::pair<std::string, int>> groups;
  for (const Apply& a : applies) {
    if (a.w->kind == WriteKind::kUpsert) {
      auto pit = a.ts->key_partition.find(a.key_bytes);
      if (pit != a.ts->key_partition.end() && pit->second != a.partition) {
        a.ts->partitions[pit->second].erase(a.key_bytes);  // placement changed
      }
      a.ts->partitions[a.partition][a.key_bytes] = a.w->row;
      a.ts->key_partition[a.key_bytes] = a.partition;
    } else {
      auto pit = a.ts->key_partition.find(a.key_bytes);
      if (pit != a.ts->key_partition.end()) {
        a.ts->partitions[pit->second].erase(a.key_bytes);
        a.ts->key_partition.erase(pit);
      }
    }
    if (config_.batch_flush_mode == BatchFlushMode::kPerRow) {
      t->ledger.Add(OpClass::kPkWrite);
    } else {
      groups.insert({a.ts->def.name, a.partition});
    }
  }
  if (config_.batch_flush_mode == BatchFlushMode::kGrouped) {
    t->ledger.Add(OpClass::kPkWrite, static_cast<int64_t>(groups.size()));
  }

  t->buffer.clear();
  t->state = TxState::S::kCommitted;
  t->commit_seq = next_commit_seq_++;
  ReleaseLocks(t);
  return Status::OK();
}

void StoreCluster::Abort(Tx& tx) {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = txs_.find(tx.id());
  if (it == txs_.end()) {
    tx.cluster_ = nullptr;
    return;
  }
  TxState* t = it->second.get();
  if (t->state == TxState::S::kActive) AbortLocked(t);
  // The handle is done with this transaction; drop the state.
  txs_.erase(it);
  tx.cluster_ = nullptr;
  tx.id_ = 0;
}

// ---------------------------------------------------------------------------

bool StoreCluster::TxActive(TxId id) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = txs_.find(id);
  return it != txs_.end() && it->second->state == TxState::S::kActive;
}

RoundTripLedger StoreCluster::TxLedger(TxId id) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = txs_.find(id);
  return it == txs_.end() ? RoundTripLedger{} : it->second->ledger;
}

int64_t StoreCluster::CommitSeq(const Tx& tx) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = txs_.find(tx.id());
  return it == txs_.end() ? 0 : it->second->commit_seq;
}

std::pair<int64_t, int64_t> StoreCluster::LocalRemoteReads(const Tx& tx) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = txs_.find(tx.id());
  if (it == txs_.end()) return {0, 0};
  return {it->second->local_reads, it->second->remote_reads};
}

std::map<std::string, int64_t> StoreCluster::PartitionAccessCounts() const {
  std::lock_guard<std::mutex> lk(mu_);
  return partition_access_;
}

void StoreCluster::ResetPartitionAccessCounts() {
  std::lock_guard<std::mutex> lk(mu_);
  partition_access_.clear();
}

bool StoreCluster::LockTableEmpty() const {
  std::lock_guard<std::mutex> lk(mu_);
  return locks_.empty();
}

int StoreCluster::ActiveTxCount() const {
  std::lock_guard<std::mutex> lk(mu_);
  int n = 0;
  for (const auto& [id, t] : txs_) {
    if (t->state == TxState::S::kActive) ++n;
  }
  return n;
}

nlohmann::json StoreCluster::DumpJson() const {
  std::lock_guard<std::mutex> lk(mu_);
  nlohmann::json tables = nlohmann::json::object();
  for (const auto& [name, ts] : tables_) {
    nlohmann::json parts = nlohmann::json::object();
    for (int p = 0; p < ts->num_partitions; ++p) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& [kb, row] : ts->partitions[p]) {
        nlohmann::json jr = nlohmann::json::object();
        for (const auto& [f, v] : row) jr[f] = v.ToJson();
        rows.push_back(jr);
      }
      if (!rows.empty()) parts[std::to_string(p)] = rows;
    }
    tables[name] = nlohmann::json{{"partitions", ts->num_partitions}, {"rows", parts}};
  }
  return nlohmann::json{{"tables", tables}};
}

}  // namespace mdsim::store
