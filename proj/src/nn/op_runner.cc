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

#include "nn/op_runner.h"

#include <algorithm>
#include <set>

namespace mdsim::nn {

using schema::InodeRec;
using store::LockMode;
using store::ReadSpec;
using store::RoundTripLedger;
using store::ScanOptions;
using store::Tx;
using store::WriteKind;

// ---------------------------------------------------------------------------
// TxSnapshot

void TxSnapshot::Seed(const std::string& table, const Key& pk, std::optional<Row> row) {
  rows_[{table, pk.Encode()}] = std::move(row);
}

bool TxSnapshot::Has(const std::string& table, const Key& pk) const {
  return rows_.count({table, pk.Encode()}) != 0;
}

Result<std::optional<Row>> TxSnapshot::Get(const std::string& table, const Key& pk) const {
  auto it = rows_.find({table, pk.Encode()});
  if (it == rows_.end()) {
    return Status::InvariantViolation("execute phase touched an unplanned row in " + table);
  }
  return it->second;
}

// Static pk layout per table; matches the schema definitions.
Key PkOfRow(const std::string& table, const Row& row);

Status TxSnapshot::Upsert(const std::string& table, const Row& row) {
  MDSIM_RETURN_IF_ERROR(store_->Write(*tx_, table, row, WriteKind::kUpsert));
  // Read-your-writes: later snapshot reads observe the buffered value.
  rows_[{table, PkOfRow(table, row).Encode()}] = row;
  return Status::OK();
}

Status TxSnapshot::Delete(const std::string& table, const Row& pk_row) {
  MDSIM_RETURN_IF_ERROR(store_->Write(*tx_, table, pk_row, WriteKind::kDelete));
  rows_[{table, PkOfRow(table, pk_row).Encode()}] = std::nullopt;
  return Status::OK();
}

Key PkOfRow(const std::string& table, const Row& row) {
  Key pk;
  auto push = [&](const char* f) { pk.fields.push_back(row.at(f)); };
  if (table == schema::kInodes) {
    push("parent_id");
    push("name");
  } else if (table == schema::kSysmeta) {
    push("key");
  } else if (table == schema::kSubtreeOps) {
    push("op_id");
  } else if (table == schema::kLeases || table == schema::kQuotas) {
    push("inode_id");
  } else if (table == schema::kBlocks || table == schema::kUrb || table == schema::kPrb) {
    push("inode_id");
    push("block_id");
  } else {
    push("inode_id");
    push("block_id");
    push("storage_id");
  }
  return pk;
}

// ---------------------------------------------------------------------------
// OpCtx helpers

Result<std::optional<Row>> OpCtx::ProbeRc(const std::string& table, const Key& pk,
                                          const std::optional<Value>& route) {
  auto r = store->ReadPk(tx, table, pk, LockMode::kReadCommitted, route);
  if (r.ok()) snap.Seed(table, pk, *r);
  return r;
}

Result<std::optional<Row>> OpCtx::LockPointX(const std::string& table, const Key& pk,
                                             const std::optional<Value>& route) {
  auto r = store->ReadPk(tx, table, pk, LockMode::kExclusive, route);
  if (r.ok()) snap.Seed(table, pk, *r);
  return r;
}

Result<std::vector<Row>> OpCtx::Ppis(const std::string& table, const Value& partition_key,
                                     LockMode mode, const ScanOptions& opts) {
  return store->ScanPartition(tx, table, partition_key, mode, opts);
}

Result<std::vector<Row>> OpCtx::IndexScan(const std::string& table, LockMode mode,
                                          const ScanOptions& opts) {
  return store->ScanIndex(tx, table, mode, opts);
}

// ---------------------------------------------------------------------------

std::vector<ReadSpec> PreflightSpecs(const Namenode* nn) {
  return {
      ReadSpec{schema::kQuotas, schema::QuotaKey(schema::kRootId), std::nullopt},
      ReadSpec{schema::kSysmeta, schema::SysKey(schema::kSysInoNext), std::nullopt},
      ReadSpec{schema::kSysmeta, schema::SysKey(schema::kSysBlkNext), std::nullopt},
      ReadSpec{schema::kSysmeta, schema::SysKey(schema::SysNamenodeKey(nn->id())), std::nullopt},
      ReadSpec{schema::kSysmeta, schema::SysKey(schema::kSysEpoch), std::nullopt},
      ReadSpec{schema::kSysmeta, schema::SysKey(schema::kSysPoolCursor), std::nullopt},
  };
}

Status RepairPath(Namenode* nn, const std::vector<std::string>& comps, bool mutator_preflight,
                  RoundTripLedger* ledger) {
  store::StoreCluster* store = nn->store();
  auto txr = store->Begin();
  if (!txr.ok()) return txr.status();
  Tx tx = txr.take();
  auto finish = [&](Status st) {
    *ledger += tx.ledger();
    return st;
  };

  int64_t parent_id = schema::kRootId;
  int depth = 1;
  std::string prefix;
  for (size_t i = 0; i + 1 < comps.size(); ++i) {
    const std::string& name = comps[i];
    prefix += "/" + name;
    Value route = schema::InodePartitionKey(nn->config().policy, parent_id, name, depth);
    auto rd = store->ReadPk(tx, schema::kInodes, schema::InodeKey(parent_id, name),
                            LockMode::kReadCommitted, route);
    if (!rd.ok()) return finish(rd.status());
    if (!rd->has_value()) return finish(Status::NotFound(prefix));
    InodeRec rec = InodeRec::FromRow(**rd);
    if (!rec.is_dir) return finish(Status::NotADirectory(prefix));
    nn->cache().Put(prefix, HintEntry{rec.id, parent_id, name, rec.partition_key, depth});
    parent_id = rec.id;
    ++depth;
  }
  if (mutator_preflight) {
    for (const ReadSpec& spec : PreflightSpecs(nn)) {
      auto rd = store->ReadPk(tx, spec.table, spec.pk, LockMode::kReadCommitted, spec.route);
      if (!rd.ok()) return finish(rd.status());
    }
  }
  Status st = store->Commit(tx);
  return finish(st);
}

Result<bool> CleanupDeadLock(Namenode* nn, const InodeRec& rec, RoundTripLedger* ledger) {
  store::StoreCluster* store = nn->store();
  auto txr = store->Begin();
  if (!txr.ok()) return txr.status();
  Tx tx = txr.take();
  auto finish = [&](Result<bool> r) {
    *ledger += tx.ledger();
    return r;
  };

  Key pk = schema::InodeKey(rec.parent_id, rec.name);
  auto rd = store->ReadPk(tx, schema::kInodes, pk, LockMode::kExclusive, rec.partition_key);
  if (!rd.ok()) return finish(rd.status());
  if (!rd->has_value()) return finish(false);
  InodeRec cur = InodeRec::FromRow(**rd);
  if (cur.subtree_lock_owner == 0 || cur.subtree_lock_owner != rec.subtree_lock_owner) {
    (void)store->Commit(tx);
    return finish(false);  // someone else already cleaned up
  }
  auto alive = nn->IsAlive(cur.subtree_lock_owner);
  if (!alive.ok()) return finish(alive.status());
  if (*alive) {
    (void)store->Commit(tx);
    return finish(false);
  }
  cur.subtree_lock_owner = 0;
  MDSIM_RETURN_IF_ERROR(store->Write(tx, schema::kInodes, cur.ToRow(), WriteKind::kUpsert));
  ScanOptions opts;
  int64_t root_id = cur.id;
  opts.predicate = [root_id](const Row& r) { return r.at("root_inode_id").as_int() == root_id; };
  auto records = store->ScanIndex(tx, schema::kSubtreeOps, LockMode::kExclusive, opts);
  if (!records.ok()) return finish(records.status());
  for (const Row& r : *records) {
    MDSIM_RETURN_IF_ERROR(store->Write(tx, schema::kSubtreeOps, r, WriteKind::kDelete));
  }
  MDSIM_RETURN_IF_ERROR(store->Commit(tx));
  return finish(true);
}

// ---------------------------------------------------------------------------

namespace {

struct LockItemLess {
  bool operator()(const LockItem& a, const LockItem& b) const {
    if (a.owner_depth != b.owner_depth) return a.owner_depth < b.owner_depth;
    if (a.owner_path != b.owner_path) return a.owner_path < b.owner_path;
    if (a.table_rank != b.table_rank) return a.table_rank < b.table_rank;
    return a.spec.pk.Encode() < b.spec.pk.Encode();
  }
};

// Checks a traversed inode's subtree flag. Live owner: voluntary abort (the
// caller retries with backoff). Dead owner: lazy cleanup, then continue.
Status HandleSubtreeFlag(Namenode* nn, InodeRec* rec, bool row_locked_by_us, OpCtx* ctx,
                         RoundTripLedger* ledger) {
  if (rec->subtree_lock_owner == 0) return Status::OK();
  auto alive = nn->IsAlive(rec->subtree_lock_owner);
  if (!alive.ok()) return alive.status();
  if (*alive) {
    return Status::SubtreeLocked("path crosses an active subtree operation");
  }
  if (row_locked_by_us) {
    // We hold the exclusive lock: clear in-transaction.
    rec->subtree_lock_owner = 0;
    MDSIM_RETURN_IF_ERROR(ctx->snap.Upsert(schema::kInodes, rec->ToRow()));
    ScanOptions opts;
    int64_t root_id = rec->id;
    opts.predicate = [root_id](const Row& r) { return r.at("root_inode_id").as_int() == root_id; };
    auto records = ctx->store->ScanIndex(ctx->tx, schema::kSubtreeOps, LockMode::kExclusive, opts);
    if (!records.ok()) return records.status();
    for (const Row& r : *records) {
      MDSIM_RETURN_IF_ERROR(ctx->store->Write(ctx->tx, schema::kSubtreeOps, r, WriteKind::kDelete));
    }
    return Status::OK();
  }
  auto cleared = CleanupDeadLock(nn, *rec, ledger);
  if (!cleared.ok()) return cleared.status();
  rec->subtree_lock_owner = 0;
  return Status::OK();
}

Status TryOnce(Namenode* nn, const UserCtx& user, const OpTemplate& tmpl,
               const std::vector<std::vector<std::string>>& comps_list, RoundTripLedger* ledger,
               int64_t* value) {
  store::StoreCluster* store = nn->store();
  const auto& policy = nn->config().policy;

  // Hints for every path; repair on miss.
  std::vector<std::vector<HintEntry>> hints(comps_list.size());
  for (size_t p = 0; p < comps_list.size(); ++p) {
    auto h = ResolveWithHints(nn->cache(), comps_list[p]);
    if (h.has_value()) {
      // A broken chain (parent link mismatch) counts as a miss.
      bool chain_ok = true;
      int64_t prev = schema::kRootId;
      for (const HintEntry& e : *h) {
        if (e.parent_id != prev) { chain_ok = false; break; }
        prev = e.id;
      }
      if (!chain_ok) h.reset();
    }
    if (!h.has_value()) {
      MDSIM_RETURN_IF_ERROR(RepairPath(nn, comps_list[p], tmpl.mutator, ledger));
      h = ResolveWithHints(nn->cache(), comps_list[p]);
      if (!h.has_value()) return Status::StaleHint("repair raced a concurrent move");
    }
    hints[p] = std::move(*h);
  }

  OpCtx ctx;
  ctx.nn = nn;
  ctx.store = store;
  ctx.user = &user;
  ctx.now_ms = nn->clock()->NowMs();
  ctx.paths.resize(comps_list.size());
  for (size_t p = 0; p < comps_list.size(); ++p) {
    PathState& ps = ctx.paths[p];
    ps.comps = comps_list[p];
    ps.path = JoinPrefix(ps.comps, ps.comps.size());
    ps.target_depth = static_cast<int>(ps.comps.size());
    if (hints[p].empty()) {
      ps.parent = InodeRec::Root();
    } else {
      const HintEntry& e = hints[p].back();
      ps.parent.id = e.id;  // authoritative copy arrives with the hint batch
      ps.parent.partition_key = e.partition_key;
    }
    ps.target_route =
        schema::InodePartitionKey(policy, ps.parent.id, ps.target_name(), ps.target_depth);
  }

  auto txr = store->Begin(store::TxHint{schema::kInodes, ctx.p0().target_route});
  if (!txr.ok()) return txr.status();
  ctx.tx = txr.take();
  ctx.snap.Bind(store, &ctx.tx);
  auto finish = [&](Status st) {
    *ledger += ctx.tx.ledger();
    return st;
  };

  // Hint batch: ancestors of every path plus the mutator preflight, one
  // round trip. Validates the cache; any mismatch falls back to repair.
  std::vector<ReadSpec> batch;
  std::vector<std::pair<size_t, size_t>> batch_tag;  // (path, ancestor idx)
  std::set<std::string> seen;
  for (size_t p = 0; p < comps_list.size(); ++p) {
    for (size_t j = 0; j < hints[p].size(); ++j) {
      const HintEntry& e = hints[p][j];
      ReadSpec spec{schema::kInodes, schema::InodeKey(e.parent_id, e.name), e.partition_key};
      std::string kb = spec.pk.Encode();
      if (!seen.insert(kb).second) continue;
      batch.push_back(spec);
      batch_tag.emplace_back(p, j);
    }
  }
  size_t num_ancestor_items = batch.size();
  if (tmpl.mutator) {
    for (ReadSpec& s : PreflightSpecs(nn)) batch.push_back(std::move(s));
  }
  if (!batch.empty()) {
    auto rows = store->BatchRead(ctx.tx, batch, LockMode::kReadCommitted);
    if (!rows.ok()) return finish(rows.status());
    for (size_t i = 0; i < num_ancestor_items; ++i) {
      auto [p, j] = batch_tag[i];
      const HintEntry& e = hints[p][j];
      const auto& row = (*rows)[i];
      if (!row.has_value() || InodeRec::FromRow(*row).id != e.id ||
          !InodeRec::FromRow(*row).is_dir) {
        nn->cache().InvalidatePrefix(JoinPrefix(comps_list[p], j + 1));
        return finish(Status::StaleHint(JoinPrefix(comps_list[p], j + 1)));
      }
      ctx.snap.Seed(schema::kInodes, batch[i].pk, row);
    }
    // Ancestor recs per path (shared prefixes resolve to the same rows).
    for (size_t p = 0; p < comps_list.size(); ++p) {
      ctx.paths[p].ancestors.clear();
      for (size_t j = 0; j < hints[p].size(); ++j) {
        const HintEntry& e = hints[p][j];
        auto got = ctx.snap.Get(schema::kInodes, schema::InodeKey(e.parent_id, e.name));
        if (!got.ok() || !got->has_value()) {
          return finish(Status::StaleHint("ancestor vanished"));
        }
        InodeRec rec = InodeRec::FromRow(**got);
        rec.depth = static_cast<int>(j) + 1;
        ctx.paths[p].ancestors.push_back(rec);
      }
      if (!ctx.paths[p].ancestors.empty()) {
        ctx.paths[p].parent = ctx.paths[p].ancestors.back();
      } else {
        ctx.paths[p].parent = InodeRec::Root();
      }
    }
    if (tmpl.mutator) {
      for (size_t i = num_ancestor_items; i < batch.size(); ++i) {
        const auto& row = (*rows)[i];
        if (!row.has_value()) {
          return finish(Status::InvariantViolation("preflight row missing: " + batch[i].table));
        }
        ctx.snap.Seed(batch[i].table, batch[i].pk, row);
        if (batch[i].table == schema::kSysmeta) {
          const std::string& k = (*row)->at("key").as_str();
          if (k == schema::kSysInoNext) ctx.cand_ino = (*row)->at("val").as_int();
          if (k == schema::kSysBlkNext) ctx.cand_blk = (*row)->at("val").as_int();
          if (k == schema::kSysPoolCursor) ctx.pool_cursor = (*row)->at("val").as_int();
        }
      }
    }
  }

  // Subtree flags along every traversed ancestor.
  for (PathState& ps : ctx.paths) {
    for (InodeRec& rec : ps.ancestors) {
      Status st = HandleSubtreeFlag(nn, &rec, false, &ctx, ledger);
      if (!st.ok()) return finish(st);
    }
  }

  if (tmpl.pre_probes) {
    Status st = tmpl.pre_probes(ctx);
    if (!st.ok()) return finish(st);
  }

  // Lock step: parents where required, every target, plus op extras, in one
  // locked batch (point read when a single row).
  std::vector<LockItem> items;
  for (size_t p = 0; p < ctx.paths.size(); ++p) {
    const PathReq& req = tmpl.path_reqs.empty() ? tmpl.default_req : tmpl.path_reqs[p];
    PathState& ps = ctx.paths[p];
    if (req.lock_parent && ps.parent.id != schema::kRootId) {
      items.push_back(LockItem{
          ReadSpec{schema::kInodes, schema::InodeKey(ps.parent.parent_id, ps.parent.name),
                   ps.parent.partition_key},
          ps.target_depth - 1, JoinPrefix(ps.comps, ps.comps.size() - 1), 0});
    }
    items.push_back(LockItem{ReadSpec{schema::kInodes, ps.target_pk(), ps.target_route},
                             ps.target_depth, ps.path, 0});
  }
  if (tmpl.extra_locks) tmpl.extra_locks(ctx, &items);
  std::sort(items.begin(), items.end(), LockItemLess{});
  items.erase(std::unique(items.begin(), items.end(),
                          [](const LockItem& a, const LockItem& b) {
                            return a.spec.table == b.spec.table &&
                                   a.spec.pk.Encode() == b.spec.pk.Encode();
                          }),
              items.end());

  std::map<std::pair<std::string, std::string>, std::optional<Row>> locked;
  if (items.size() == 1) {
    auto rd = store->ReadPk(ctx.tx, items[0].spec.table, items[0].spec.pk, tmpl.target_mode,
                            items[0].spec.route);
    if (!rd.ok()) return finish(rd.status());
    locked[{items[0].spec.table, items[0].spec.pk.Encode()}] = *rd;
  } else {
    std::vector<ReadSpec> specs;
    specs.reserve(items.size());
    for (const LockItem& it : items) specs.push_back(it.spec);
    auto rows = store->BatchRead(ctx.tx, specs, tmpl.target_mode);
    if (!rows.ok()) return finish(rows.status());
    for (size_t i = 0; i < items.size(); ++i) {
      locked[{items[i].spec.table, items[i].spec.pk.Encode()}] = (*rows)[i];
    }
  }
  for (const auto& [key, row] : locked) {
    // Seed by reconstructing the pk from the stored spec list.
    for (const LockItem& it : items) {
      if (it.spec.table == key.first && it.spec.pk.Encode() == key.second) {
        ctx.snap.Seed(it.spec.table, it.spec.pk, row);
        break;
      }
    }
  }

  // Re-validate parents and targets from the locked rows.
  for (size_t p = 0; p < ctx.paths.size(); ++p) {
    const PathReq& req = tmpl.path_reqs.empty() ? tmpl.default_req : tmpl.path_reqs[p];
    PathState& ps = ctx.paths[p];
    if (req.lock_parent && ps.parent.id != schema::kRootId) {
      auto it = locked.find({schema::kInodes,
                             schema::InodeKey(ps.parent.parent_id, ps.parent.name).Encode()});
      if (it == locked.end() || !it->second.has_value()) {
        nn->cache().InvalidatePrefix(JoinPrefix(ps.comps, ps.comps.size() - 1));
        return finish(Status::StaleHint("parent vanished before lock"));
      }
      InodeRec parent = InodeRec::FromRow(*it->second);
      if (!parent.is_dir) return finish(Status::NotADirectory(ps.path));
      parent.depth = ps.target_depth - 1;
      MDSIM_RETURN_IF_ERROR(
          finishable(HandleSubtreeFlag(nn, &parent, true, &ctx, ledger), finish));
      ps.parent = parent;
    }
    auto it = locked.find({schema::kInodes, ps.target_pk().Encode()});
    if (it != locked.end() && it->second.has_value()) {
      InodeRec target = InodeRec::FromRow(*it->second);
      target.depth = ps.target_depth;
      MDSIM_RETURN_IF_ERROR(
          finishable(HandleSubtreeFlag(nn, &target, true, &ctx, ledger), finish));
      ps.target = target;
    } else {
      ps.target.reset();
    }
    if (req.must_exist && !ps.target.has_value()) return finish(Status::NotFound(ps.path));
    if (req.must_be_absent && ps.target.has_value()) {
      return finish(Status::AlreadyExists(ps.path));
    }
  }

  // Permissions, centralized after all reads, before any write.
  if (!user.superuser) {
    for (size_t p = 0; p < ctx.paths.size(); ++p) {
      const PathReq& req = tmpl.path_reqs.empty() ? tmpl.default_req : tmpl.path_reqs[p];
      PathState& ps = ctx.paths[p];
      for (const InodeRec& a : ps.ancestors) {
        if (!schema::HasPerm(a, user.user, user.groups, 1)) {
          return finish(Status::PermissionDenied(ps.path + ": traverse " + a.name));
        }
      }
      if (req.parent_write_perm && ps.parent.id != schema::kRootId &&
          !schema::HasPerm(ps.parent, user.user, user.groups, 2)) {
        return finish(Status::PermissionDenied(ps.path + ": parent not writable"));
      }
      if (tmpl.target_read_perm && ps.target.has_value() &&
          !schema::HasPerm(*ps.target, user.user, user.groups, 4)) {
        return finish(Status::PermissionDenied(ps.path + ": not readable"));
      }
    }
  }

  if (tmpl.post_lock) {
    Status st = tmpl.post_lock(ctx);
    if (!st.ok()) return finish(st);
  }
  if (tmpl.execute) {
    Status st = tmpl.execute(ctx);
    if (!st.ok()) return finish(st);
  }
  Status st = store->Commit(ctx.tx);
  if (st.ok()) *value = ctx.result_value;
  return finish(st);
}

}  // namespace

Result<OpOutcome> RunInodeOp(Namenode* nn, const UserCtx& user, const OpTemplate& tmpl,
                             const std::vector<std::string>& paths) {
  std::vector<std::vector<std::string>> comps_list;
  for (const std::string& p : paths) {
    auto comps = SplitPath(p);
    if (!comps.ok()) return comps.status();
    if (comps->empty()) {
      return Status::InvalidArgument("operation target cannot be the root");
    }
    comps_list.push_back(comps.take());
  }

  OpOutcome out;
  const NamenodeConfig& cfg = nn->config();
  int64_t backoff = cfg.retry_base_ms;
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    if (nn->killed()) return Status::NamenodeDown("namenode killed");
    out.attempts = attempt + 1;
    Status st = TryOnce(nn, user, tmpl, comps_list, &out.ledger, &out.value);
    if (st.ok()) return out;
    if (st.Is(Code::kStaleHint)) continue;  // cache repaired; retry immediately
    if (st.Is(Code::kSubtreeLocked) || st.Is(Code::kTimeout)) {
      nn->clock()->SleepMs(backoff);
      backoff *= cfg.retry_factor;
      continue;
    }
    return st;
  }
  return Status::RetriesExhausted("gave up after " + std::to_string(cfg.max_attempts) +
                                  " attempts");
}

}  // namespace mdsim::nn
