// Copyright 2026 The dronefleet Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "dronefleet/controllers.hpp"
#include "dronefleet/metrics.hpp"
#include "dronefleet/random.hpp"
#include "dronefleet/scheduler.hpp"
#include "dronefleet/simcore.hpp"

namespace dronefleet {

/// Queue traces of one action epoch, [pdc][slot].
struct EpochOutcome {
  std::vector<std::vector<int>> queue;
  std::vector<int> owned;  // allocation held during the epoch
  int max_queue = 0;
};

/// Simulator plus central scheduler, advanced one action epoch at a time.
class FleetEnvironment {
 public:
  using SlotCallback = std::function<void(const SlotRecord&)>;

  FleetEnvironment(const District& district, const ArrivalConfig& arrivals,
                   const std::vector<int>& initial_allocation,
                   std::uint64_t seed, int slots_per_epoch)
      : sim_(district, arrivals, initial_allocation, seed),
        scheduler_rng_(make_stream(seed, stream::kScheduler)),
        slots_per_epoch_(slots_per_epoch) {
    if (slots_per_epoch_ < 1) {
      throw std::invalid_argument("slots per epoch must be >= 1");
    }
  }

  Simulator& sim() { return sim_; }
  const Simulator& sim() const { return sim_; }
  int slots_per_epoch() const { return slots_per_epoch_; }
  std::int64_t epoch() const { return epoch_; }

  std::vector<Observation> observe() const {
    std::vector<Observation> out;
    for (std::size_t d = 0; d < sim_.num_pdcs(); ++d) out.push_back(sim_.observe(d));
    return out;
  }

  std::vector<Move> apply_requests(const std::vector<int>& requests) {
    if (requests.size() != sim_.num_pdcs()) {
      throw std::invalid_argument("request length must equal PDC count");
    }
    auto moves = schedule(snapshot(sim_), requests, scheduler_rng_);
    sim_.apply_moves(moves);
    return moves;
  }

  /// Runs `slots` slots (one full epoch by default).
  EpochOutcome advance(const SlotCallback& on_slot = {}, int slots = -1) {
    if (slots < 0) slots = slots_per_epoch_;
    EpochOutcome out;
    out.queue.assign(sim_.num_pdcs(), {});
    out.owned = sim_.allocation();
    for (int k = 0; k < slots; ++k) {
      const SlotRecord rec = sim_.step();
      for (std::size_t d = 0; d < rec.queue.size(); ++d) {
        out.queue[d].push_back(rec.queue[d]);
        out.max_queue = std::max(out.max_queue, rec.queue[d]);
      }
      if (on_slot) on_slot(rec);
    }
    ++epoch_;
    return out;
  }

 private:
  Simulator sim_;
  Rng scheduler_rng_;
  int slots_per_epoch_;
  std::int64_t epoch_ = 0;
};

/// Drives `controller` for warmup + horizon slots and returns the
/// post-warm-up trace.
inline RunTrace run_controller(FleetEnvironment& env, Controller& controller,
                               std::int64_t horizon, std::int64_t warmup,
                               const FleetEnvironment::SlotCallback& on_slot = {}) {
  RunTrace trace;
  const std::int64_t total = warmup + horizon;
  const auto record = [&](const SlotRecord& rec) {
    if (rec.t >= warmup) trace.record(rec, warmup);
    if (on_slot) on_slot(rec);
  };
  while (env.sim().now() < total) {
    const auto obs = env.observe();
    env.apply_requests(controller.decide(obs, env.epoch()));
    const std::int64_t left = total - env.sim().now();
    env.advance(record, static_cast<int>(std::min<std::int64_t>(
                            left, env.slots_per_epoch())));
  }
  return trace;
}

}  // namespace dronefleet
