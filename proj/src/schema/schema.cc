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

#include "schema/schema.h"

#include <algorithm>

#include "base/hash.h"

namespace mdsim::schema {

using store::LockMode;
using store::StoreCluster;
using store::TableDef;
using store::Tx;
using store::WriteKind;

const std::vector<std::string>& RelatedTableOrder() {
  static const std::vector<std::string> kOrder = {kLeases, kQuotas, kBlocks, kReplicas, kUrb,
                                                  kPrb,    kRuc,    kCr,     kEr,       kInv};
  return kOrder;
}

int TableRank(const std::string& table) {
  if (table == kInodes) return 0;
  const auto& order = RelatedTableOrder();
  for (size_t i = 0; i < order.size(); ++i) {
    if (order[i] == table) return static_cast<int>(i) + 1;
  }
  if (table == kSysmeta) return 20;
  if (table == kSubtreeOps) return 21;
  return 30;
}

std::string SysNamenodeKey(int64_t nn_id) { return "nn:" + std::to_string(nn_id); }

std::string EncodeInodeHashKey(int64_t parent_id, const std::string& name) {
  std::string out;
  AppendBigEndian64(&out, static_cast<uint64_t>(parent_id));
  out += name;
  return out;
}

Value InodePartitionKey(const PartitionPolicy& policy, int64_t parent_id, const std::string& name,
                        int depth) {
  if (depth <= policy.random_partition_depth) {
    return Value(static_cast<int64_t>(
        HashBytes(policy.name_hash_seed, EncodeInodeHashKey(parent_id, name))));
  }
  return Value(parent_id);
}

Row InodeRec::ToRow() const {
  Row r;
  r["id"] = id;
  r["parent_id"] = parent_id;
  r["name"] = name;
  r["partition_key"] = partition_key;
  r["is_dir"] = is_dir;
  r["perms"] = static_cast<int64_t>(perms);
  r["owner"] = owner;
  r["group"] = group;
  r["replication"] = static_cast<int64_t>(replication);
  r["subtree_lock_owner"] = subtree_lock_owner;
  r["depth"] = static_cast<int64_t>(depth);
  r["size_hint"] = size_hint;
  r["mtime"] = mtime;
  return r;
}

InodeRec InodeRec::FromRow(const Row& row) {
  InodeRec rec;
  rec.id = row.at("id").as_int();
  rec.parent_id = row.at("parent_id").as_int();
  rec.name = row.at("name").as_str();
  rec.partition_key = row.at("partition_key");
  rec.is_dir = row.at("is_dir").as_bool();
  rec.perms = static_cast<int>(row.at("perms").as_int());
  rec.owner = row.at("owner").as_str();
  rec.group = row.at("group").as_str();
  rec.replication = static_cast<int>(row.at("replication").as_int());
  rec.subtree_lock_owner = row.at("subtree_lock_owner").as_int();
  rec.depth = static_cast<int>(row.at("depth").as_int());
  rec.size_hint = row.at("size_hint").as_int();
  rec.mtime = row.at("mtime").as_int();
  return rec;
}

InodeRec InodeRec::Root() {
  InodeRec root;
  root.id = kRootId;
  root.parent_id = 0;
  root.name = "";
  root.partition_key = Value(int64_t{0});
  root.is_dir = true;
  root.perms = 0755;
  root.owner = "root";
  root.group = "root";
  root.depth = 0;
  return root;
}

Row SubtreeOpRec::ToRow() const {
  Row r;
  r["op_id"] = op_id;
  r["namenode_id"] = namenode_id;
  r["root_inode_id"] = root_inode_id;
  r["root_path"] = root_path;
  r["kind"] = kind;
  r["started_at"] = started_at;
  return r;
}

SubtreeOpRec SubtreeOpRec::FromRow(const Row& row) {
  SubtreeOpRec rec;
  rec.op_id = row.at("op_id").as_int();
  rec.namenode_id = row.at("namenode_id").as_int();
  rec.root_inode_id = row.at("root_inode_id").as_int();
  rec.root_path = row.at("root_path").as_str();
  rec.kind = row.at("kind").as_str();
  rec.started_at = row.at("started_at").as_int();
  return rec;
}

Key InodeKey(int64_t parent_id, const std::string& name) { return Key{Value(parent_id), Value(name)}; }
Key LeaseKey(int64_t inode_id) { return Key{Value(inode_id)}; }
Key QuotaKey(int64_t inode_id) { return Key{Value(inode_id)}; }
Key BlockKey(int64_t inode_id, int64_t block_id) { return Key{Value(inode_id), Value(block_id)}; }
Key ReplicaKey(int64_t inode_id, int64_t block_id, int64_t storage_id) {
  return Key{Value(inode_id), Value(block_id), Value(storage_id)};
}
Key SysKey(const std::string& key) { return Key{Value(key)}; }
Key SubtreeOpKey(int64_t op_id) { return Key{Value(op_id)}; }

Row SysRow(const std::string& key, int64_t val, int64_t val2) {
  Row r;
  r["key"] = key;
  r["val"] = val;
  r["val2"] = val2;
  return r;
}

Row LeaseRow(int64_t inode_id, const std::string& holder, int64_t acquired_at) {
  Row r;
  r["inode_id"] = inode_id;
  r["holder_client_id"] = holder;
  r["acquired_at"] = acquired_at;
  return r;
}

Row QuotaRow(int64_t inode_id, int64_t ns_quota, int64_t ds_quota, int64_t ns_used,
             int64_t ds_used) {
  Row r;
  r["inode_id"] = inode_id;
  r["namespace_quota"] = ns_quota;
  r["disk_quota"] = ds_quota;
  r["ns_used"] = ns_used;
  r["ds_used"] = ds_used;
  return r;
}

namespace {

TableDef FileRelated(const std::string& name, std::vector<std::string> pk) {
  TableDef def;
  def.name = name;
  def.pk_fields = std::move(pk);
  def.partition_key_field = "inode_id";
  return def;
}

}  // namespace

Status DefineSchema(StoreCluster* store) {
  {
    TableDef inodes;
    inodes.name = kInodes;
    inodes.pk_fields = {"parent_id", "name"};
    inodes.partition_key_field = "partition_key";
    inodes.indexed_fields = {"parent_id", "subtree_lock_owner"};
    MDSIM_RETURN_IF_ERROR(store->CreateTable(inodes));
  }
  MDSIM_RETURN_IF_ERROR(
      store->CreateTable(FileRelated(kBlocks, {"inode_id", "block_id"})));
  MDSIM_RETURN_IF_ERROR(
      store->CreateTable(FileRelated(kReplicas, {"inode_id", "block_id", "storage_id"})));
  MDSIM_RETURN_IF_ERROR(store->CreateTable(FileRelated(kUrb, {"inode_id", "block_id"})));
  MDSIM_RETURN_IF_ERROR(store->CreateTable(FileRelated(kPrb, {"inode_id", "block_id"})));
  MDSIM_RETURN_IF_ERROR(
      store->CreateTable(FileRelated(kCr, {"inode_id", "block_id", "storage_id"})));
  MDSIM_RETURN_IF_ERROR(
      store->CreateTable(FileRelated(kRuc, {"inode_id", "block_id", "storage_id"})));
  MDSIM_RETURN_IF_ERROR(
      store->CreateTable(FileRelated(kEr, {"inode_id", "block_id", "storage_id"})));
  MDSIM_RETURN_IF_ERROR(
      store->CreateTable(FileRelated(kInv, {"inode_id", "block_id", "storage_id"})));
  MDSIM_RETURN_IF_ERROR(store->CreateTable(FileRelated(kLeases, {"inode_id"})));
  MDSIM_RETURN_IF_ERROR(store->CreateTable(FileRelated(kQuotas, {"inode_id"})));
  {
    TableDef sys;
    sys.name = kSysmeta;
    sys.pk_fields = {"key"};
    sys.partition_key_field = "key";
    MDSIM_RETURN_IF_ERROR(store->CreateTable(sys));
  }
  {
    TableDef ops;
    ops.name = kSubtreeOps;
    ops.pk_fields = {"op_id"};
    ops.partition_key_field = "op_id";
    ops.indexed_fields = {"root_inode_id", "namenode_id"};
    MDSIM_RETURN_IF_ERROR(store->CreateTable(ops));
  }

  // Seed root inode, root quota and counters in one transaction.
  auto txr = store->Begin();
  if (!txr.ok()) return txr.status();
  Tx tx = txr.take();

  auto seed = [&](const std::string& table, const Key& pk, const Row& row,
                  const std::optional<Value>& route) -> Status {
    auto rd = store->ReadPk(tx, table, pk, LockMode::kExclusive, route);
    if (!rd.ok()) return rd.status();
    if (rd->has_value()) return Status::AlreadyExists("schema already defined");
    return store->Write(tx, table, row, WriteKind::kUpsert);
  };

  InodeRec root = InodeRec::Root();
  MDSIM_RETURN_IF_ERROR(
      seed(kInodes, InodeKey(root.parent_id, root.name), root.ToRow(), root.partition_key));
  MDSIM_RETURN_IF_ERROR(
      seed(kQuotas, QuotaKey(kRootId), QuotaRow(kRootId, -1, -1, 0, 0), std::nullopt));
  MDSIM_RETURN_IF_ERROR(seed(kSysmeta, SysKey(kSysInoNext), SysRow(kSysInoNext, 2), std::nullopt));
  MDSIM_RETURN_IF_ERROR(seed(kSysmeta, SysKey(kSysBlkNext), SysRow(kSysBlkNext, 1), std::nullopt));
  MDSIM_RETURN_IF_ERROR(seed(kSysmeta, SysKey(kSysNnNext), SysRow(kSysNnNext, 1), std::nullopt));
  MDSIM_RETURN_IF_ERROR(
      seed(kSysmeta, SysKey(kSysSubopNext), SysRow(kSysSubopNext, 1), std::nullopt));
  MDSIM_RETURN_IF_ERROR(seed(kSysmeta, SysKey(kSysEpoch), SysRow(kSysEpoch, 1), std::nullopt));
  MDSIM_RETURN_IF_ERROR(
      seed(kSysmeta, SysKey(kSysPoolCursor), SysRow(kSysPoolCursor, 0), std::nullopt));
  return store->Commit(tx);
}

Result<int64_t> AllocateId(StoreCluster* store, const std::string& counter_key) {
  auto txr = store->Begin();
  if (!txr.ok()) return txr.status();
  Tx tx = txr.take();
  auto rd = store->ReadPk(tx, kSysmeta, SysKey(counter_key), LockMode::kExclusive);
  if (!rd.ok()) return rd.status();
  if (!rd->has_value()) return Status::NotFound("counter " + counter_key);
  int64_t val = (**rd).at("val").as_int();
  MDSIM_RETURN_IF_ERROR(
      store->Write(tx, kSysmeta, SysRow(counter_key, val + 1), WriteKind::kUpsert));
  MDSIM_RETURN_IF_ERROR(store->Commit(tx));
  return val;
}

bool HasPerm(const InodeRec& rec, const std::string& user,
             const std::vector<std::string>& groups, int bit) {
  int shift;
  if (rec.owner == user) {
    shift = 6;
  } else if (std::find(groups.begin(), groups.end(), rec.group) != groups.end()) {
    shift = 3;
  } else {
    shift = 0;
  }
  return ((rec.perms >> shift) & bit) != 0;
}

}  // namespace mdsim::schema
