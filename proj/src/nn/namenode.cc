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

#include "nn/namenode.h"

#include <algorithm>

namespace mdsim::nn {

using store::LockMode;
using store::ScanOptions;
using store::Tx;
using store::WriteKind;

Namenode::Namenode(store::StoreCluster* store, NamenodeConfig config)
    : store_(store), config_(config), cache_(config.cache_capacity) {}

Status Namenode::Register() {
  auto idr = schema::AllocateId(store_, schema::kSysNnNext);
  if (!idr.ok()) return idr.status();
  id_ = *idr;

  auto txr = store_->Begin();
  if (!txr.ok()) return txr.status();
  Tx tx = txr.take();
  std::string key = schema::SysNamenodeKey(id_);
  auto rd = store_->ReadPk(tx, schema::kSysmeta, schema::SysKey(key), LockMode::kExclusive);
  if (!rd.ok()) return rd.status();
  MDSIM_RETURN_IF_ERROR(store_->Write(tx, schema::kSysmeta,
                                      schema::SysRow(key, 1, clock()->NowMs()),
                                      WriteKind::kUpsert));
  return store_->Commit(tx);
}

Status Namenode::Heartbeat() {
  if (killed_.load()) return Status::NamenodeDown("namenode killed");
  auto txr = store_->Begin();
  if (!txr.ok()) return txr.status();
  Tx tx = txr.take();
  std::string key = schema::SysNamenodeKey(id_);
  auto rd = store_->ReadPk(tx, schema::kSysmeta, schema::SysKey(key), LockMode::kExclusive);
  if (!rd.ok()) return rd.status();
  if (!rd->has_value()) return Status::NotFound("namenode row missing");
  int64_t beats = (**rd).at("val").as_int();
  MDSIM_RETURN_IF_ERROR(store_->Write(tx, schema::kSysmeta,
                                      schema::SysRow(key, beats + 1, clock()->NowMs()),
                                      WriteKind::kUpsert));
  return store_->Commit(tx);
}

Result<std::vector<int64_t>> Namenode::AliveNamenodes() {
  auto txr = store_->Begin();
  if (!txr.ok()) return txr.status();
  Tx tx = txr.take();
  ScanOptions opts;
  opts.predicate = [](const Row& r) {
    return r.at("key").as_str().rfind("nn:", 0) == 0;
  };
  auto rows = store_->ScanIndex(tx, schema::kSysmeta, LockMode::kReadCommitted, opts);
  if (!rows.ok()) return rows.status();
  MDSIM_RETURN_IF_ERROR(store_->Commit(tx));

  int64_t now = clock()->NowMs();
  std::vector<int64_t> alive;
  {
    std::lock_guard<std::mutex> lk(view_mu_);
    view_last_beats_.clear();
    for (const Row& r : *rows) {
      int64_t nn_id = std::stoll(r.at("key").as_str().substr(3));
      int64_t last = r.at("val2").as_int();
      view_last_beats_[nn_id] = last;
      if (now - last <= liveness_window_ms()) alive.push_back(nn_id);
    }
    view_refreshed_at_ = now;
  }
  std::sort(alive.begin(), alive.end());
  return alive;
}

Result<int64_t> Namenode::Leader() {
  auto alive = AliveNamenodes();
  if (!alive.ok()) return alive.status();
  if (alive->empty()) return Status::NotFound("no alive namenode");
  return alive->front();
}

Status Namenode::RefreshView() {
  auto alive = AliveNamenodes();
  return alive.status();
}

Result<bool> Namenode::IsAlive(int64_t nn_id) {
  int64_t now = clock()->NowMs();
  {
    std::lock_guard<std::mutex> lk(view_mu_);
    if (view_refreshed_at_ >= 0 && now - view_refreshed_at_ < config_.beat_period_ms) {
      auto it = view_last_beats_.find(nn_id);
      return it != view_last_beats_.end() && now - it->second <= liveness_window_ms();
    }
  }
  MDSIM_RETURN_IF_ERROR(RefreshView());
  std::lock_guard<std::mutex> lk(view_mu_);
  auto it = view_last_beats_.find(nn_id);
  return it != view_last_beats_.end() && now - it->second <= liveness_window_ms();
}

}  // namespace mdsim::nn
