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
#include <chrono>
#include <cstdint>
#include <memory>
#include <thread>

namespace mdsim {

// All timeouts and periods in the system are expressed in simulated
// milliseconds. A SimClock advances only when told to (deterministic,
// single-worker mode); a WallClock maps simulated ms to scaled wall time
// for concurrent runs.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t NowMs() const = 0;
  virtual void SleepMs(int64_t sim_ms) = 0;
  virtual bool simulated() const = 0;
  // Wall microseconds per simulated ms, for condition-variable deadlines.
  virtual int64_t wall_us_per_sim_ms() const { return 1000; }
};

class SimClock : public Clock {
 public:
  int64_t NowMs() const override { return now_.load(std::memory_order_relaxed); }
  void SleepMs(int64_t sim_ms) override { Advance(sim_ms); }
  bool simulated() const override { return true; }

  void Advance(int64_t ms) { now_.fetch_add(ms, std::memory_order_relaxed); }

 private:
  std::atomic<int64_t> now_{0};
};

class WallClock : public Clock {
 public:
  // wall_us_per_sim_ms: how many wall microseconds one simulated ms takes.
  // The default keeps heartbeat periods and lock backoffs test-friendly.
  explicit WallClock(int64_t wall_us_per_sim_ms = 10)
      : scale_us_(wall_us_per_sim_ms), start_(std::chrono::steady_clock::now()) {}

  int64_t NowMs() const override {
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                  std::chrono::steady_clock::now() - start_)
                  .count();
    return us / scale_us_;
  }

  void SleepMs(int64_t sim_ms) override {
    std::this_thread::sleep_for(std::chrono::microseconds(sim_ms * scale_us_));
  }

  bool simulated() const override { return false; }
  int64_t wall_us_per_sim_ms() const override { return scale_us_; }

  int64_t scale_us() const { return scale_us_; }

 private:
  int64_t scale_us_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace mdsim
