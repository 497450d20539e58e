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
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "dronefleet/random.hpp"
#include "dronefleet/rl/encoder.hpp"
#include "dronefleet/rl/network.hpp"

namespace dronefleet::rl {

constexpr int kNumActions = 3;

/// Action index to UAV delta: 0 -> -delta, 1 -> 0, 2 -> +delta.
inline int action_delta(int action, int delta) { return (action - 1) * delta; }

/// Double DQN target: the online net picks the action at s', the target net
/// scores it.
inline double ddqn_target(double reward, std::span<const double> online_next,
                          std::span<const double> target_next, bool done,
                          double gamma) {
  if (done) return reward;
  if (online_next.size() != target_next.size() || online_next.empty()) {
    throw std::invalid_argument("action-value vectors must match");
  }
  const std::size_t best = argmax(online_next);
  return reward + gamma * target_next[best];
}

inline double ddqn_target(double reward, const EncodedState& next, bool done,
                          const Mlp& online, const Mlp& target, double gamma) {
  if (done) return reward;
  const auto on = online.forward(next);
  const auto tg = target.forward(next);
  return ddqn_target(reward, on, tg, false, gamma);
}

/// Linear decay from start to end over decay_fraction * total_steps, then
/// flat.
struct EpsilonSchedule {
  double start = 0.5;
  double end = 0.05;
  double decay_fraction = 0.8;
  std::int64_t total_steps = 1;

  double at(std::int64_t step) const {
    const double horizon = decay_fraction * static_cast<double>(total_steps);
    if (step <= 0) return start;
    if (!(horizon > 0.0) || static_cast<double>(step) >= horizon) return end;
    const double frac = static_cast<double>(step) / horizon;
    return start + (end - start) * frac;
  }
};

inline double epsilon_at(std::int64_t step, const EpsilonSchedule& schedule) {
  return schedule.at(step);
}

/// Epsilon-greedy; argmax ties resolve to the lowest index. Always consumes
/// one uniform draw, plus one more when exploring.
inline int select_action(std::span<const double> values, double epsilon,
                         Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < epsilon) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(values.size()) - 1);
    return pick(rng);
  }
  return static_cast<int>(argmax(values));
}

}  // namespace dronefleet::rl
