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

#include <cstdint>
#include <vector>

#include "dronefleet/random.hpp"
#include "dronefleet/rl/adam.hpp"
#include "dronefleet/rl/ddqn.hpp"
#include "dronefleet/rl/encoder.hpp"
#include "dronefleet/rl/network.hpp"
#include "dronefleet/rl/replay.hpp"
#include "dronefleet/simcore.hpp"

namespace dronefleet::rl {

struct AgentConfig {
  std::vector<int> layer_sizes = {kStateBits, 32, 32, kNumActions};
  AdamConfig adam;
  double gamma = 0.99;
  std::size_t batch_size = 25;
  std::size_t replay_capacity = 1000000;
  std::size_t learning_starts = 1000;
};

/// One PDC's learner: online and target networks, replay memory and Adam.
class DdqnAgent {
 public:
  DdqnAgent(const AgentConfig& config, std::uint64_t seed, std::size_t index)
      : config_(config),
        replay_(config.replay_capacity),
        explore_rng_(make_stream(seed, stream::kAgentExplore + index)),
        replay_rng_(make_stream(seed, stream::kAgentReplay + index)) {
    Rng init = make_stream(seed, stream::kAgentInit + index);
    online_ = Mlp::glorot_uniform(config_.layer_sizes, init);
    target_ = online_;
    adam_ = Adam(online_.parameters(), config_.adam);
  }

  const AgentConfig& config() const { return config_; }
  const Mlp& online() const { return online_; }
  const Mlp& target() const { return target_; }
  const ReplayBuffer& replay() const { return replay_; }
  std::int64_t updates() const { return adam_.steps(); }

  std::vector<double> values(const Observation& s) const {
    return online_.forward(encode_state(s.n, s.q));
  }

  int act(const Observation& s, double epsilon) {
    return select_action(values(s), epsilon, explore_rng_);
  }

  int greedy(const Observation& s) const {
    return static_cast<int>(argmax(values(s)));
  }

  void remember(const Experience& e) { replay_.push(e); }

  /// One mini-batch gradient step on the masked squared TD error. Returns
  /// false while the replay memory is below the warm-up size.
  bool learn() {
    if (replay_.size() < std::max(config_.learning_starts, config_.batch_size)) {
      return false;
    }
    const auto batch = replay_.sample(config_.batch_size, replay_rng_);
    Parameters grads = zeros_like(online_.parameters());
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (const Experience* e : batch) {
      const double y = ddqn_target(e->reward,
                                   encode_state(e->next_state.n, e->next_state.q),
                                   e->done, online_, target_, config_.gamma);
      online_.accumulate_gradient(encode_state(e->state.n, e->state.q),
                                  e->action, y, scale, grads);
    }
    adam_.step(online_.parameters(), grads);
    return true;
  }

  void sync_target() { target_ = online_; }

 private:
  AgentConfig config_;
  Mlp online_;
  Mlp target_;
  Adam adam_;
  ReplayBuffer replay_;
  Rng explore_rng_;
  Rng replay_rng_;
};

}  // namespace dronefleet::rl
