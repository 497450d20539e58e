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

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dronefleet/config.hpp"
#include "dronefleet/controllers.hpp"
#include "dronefleet/environment.hpp"
#include "dronefleet/metrics.hpp"
#include "dronefleet/rl/network.hpp"
#include "dronefleet/rl/train.hpp"

namespace dronefleet {

/// Builds the configured controller; "rl" needs one network per PDC.
inline std::unique_ptr<Controller> make_controller(
    const ExperimentConfig& cfg, const std::string& kind,
    const std::vector<rl::Mlp>& networks = {}) {
  if (kind == "static") return std::make_unique<StaticController>();
  if (kind == "threshold") {
    return std::make_unique<ThresholdController>(cfg.q_ub, cfg.delta);
  }
  if (kind == "ql") {
    return std::make_unique<QueueProportionalController>(cfg.district.total_uavs,
                                                         cfg.ql_update_multiple);
  }
  if (kind == "rl") {
    if (networks.size() != cfg.district.num_pdcs()) {
      throw std::invalid_argument("rl controller needs one network per PDC");
    }
    return std::make_unique<rl::PolicyController>(networks, cfg.delta);
  }
  throw std::invalid_argument("unknown controller '" + kind + "'");
}

/// Runs one controller for warmup + horizon slots and summarizes the
/// post-warm-up window.
inline MetricsReport evaluate(const ExperimentConfig& cfg, Controller& controller,
                              std::uint64_t seed,
                              const FleetEnvironment::SlotCallback& on_slot = {}) {
  FleetEnvironment env(cfg.district, cfg.arrivals, cfg.resolved_initial_allocation(),
                       seed, cfg.slots_per_action());
  const RunTrace trace = run_controller(env, controller, cfg.horizon, cfg.warmup, on_slot);
  return summarize(trace, cfg.q_ub);
}

}  // namespace dronefleet
