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

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "base/clock.h"
#include "base/status.h"
#include "nn/hint_cache.h"
#include "schema/schema.h"
#include "store/cluster.h"

namespace mdsim::nn {

struct NamenodeConfig {
  int64_t beat_period_ms = 500;  // simulated ms
  int liveness_beats = 3;
  int64_t retry_base_ms = 50;
  int retry_factor = 2;
  int max_attempts = 8;
  size_t cache_capacity = 1 << 16;
  schema::PartitionPolicy policy;
};

// A stateless metadata server. All namespace state lives in the store; the
// only local state is the pk hint cache and a cached membership view. The
// store doubles as shared memory for membership and leader election: a
// namenode is alive iff it keeps writing heartbeats in bounded time.
class Namenode {
 public:
  Namenode(store::StoreCluster* store, NamenodeConfig config = {});

  // Allocates a fresh incarnation id and writes the first heartbeat. A
  // restarted namenode registers again and never resumes its old identity.
  Status Register();

  int64_t id() const { return id_; }
  store::StoreCluster* store() const { return store_; }
  Clock* clock() const { return store_->clock(); }
  const NamenodeConfig& config() const { return config_; }
  InodeHintCache& cache() { return cache_; }
  int64_t liveness_window_ms() const { return config_.beat_period_ms * config_.liveness_beats; }

  Status Heartbeat();
  // Fresh membership scan (index scan over the liveness rows).
  Result<std::vector<int64_t>> AliveNamenodes();
  Result<int64_t> Leader();  // smallest alive id
  // Membership check against a view refreshed at most once per beat period.
  Result<bool> IsAlive(int64_t nn_id);

  // Simulated process death: no new operations, no more heartbeats.
  void Kill() { killed_.store(true); }
  bool killed() const { return killed_.load(); }

 private:
  Status RefreshView();

  store::StoreCluster* store_;
  NamenodeConfig config_;
  InodeHintCache cache_;
  int64_t id_ = 0;
  std::atomic<bool> killed_{false};

  std::mutex view_mu_;
  std::map<int64_t, int64_t> view_last_beats_;  // nn id -> last beat time
  int64_t view_refreshed_at_ = -1;
};

}  // namespace mdsim::nn
