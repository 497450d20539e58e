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
#include <deque>
#include <functional>
#include <vector>

#include "dronefleet/config.hpp"
#include "dronefleet/environment.hpp"
#include "dronefleet/rl/agent.hpp"
#include "dronefleet/rl/ddqn.hpp"
#include "dronefleet/rl/reward.hpp"

namespace dronefleet::rl {

struct EpisodeStats {
  int episode = 0;
  int steps = 0;
  double average_reward = 0.0;      // over agents and action steps
  std::vector<double> violation;    // per PDC, windowed over recent episodes
  double violation_max = 0.0;
  double mean_owned = 0.0;          // time-average of UAVs held by PDCs
  double epsilon = 0.0;             // at the end of the episode
  bool saturated = false;
};

struct TrainResult {
  std::vector<DdqnAgent> agents;
  std::vector<EpisodeStats> curve;
  std::int64_t total_steps = 0;
};

inline AgentConfig agent_config(const TrainConfig& t) {
  AgentConfig a;
  a.layer_sizes = {kStateBits};
  for (int h : t.hidden) a.layer_sizes.push_back(h);
  a.layer_sizes.push_back(kNumActions);
  a.adam.learning_rate = t.learning_rate;
  a.gamma = t.gamma;
  a.batch_size = static_cast<std::size_t>(t.batch_size);
  a.replay_capacity = static_cast<std::size_t>(t.replay_capacity);
  a.learning_starts = static_cast<std::size_t>(t.learning_starts);
  return a;
}

inline std::uint64_t episode_seed(std::uint64_t seed, int episode) {
  return mix_seed(mix_seed(seed) + static_cast<std::uint64_t>(episode) + 1);
}

/// Trains one DDQN agent per PDC in a shared district. Agents act jointly
/// every T slots through the central scheduler. An episode stops after
/// max_steps actions (bootstrapped) or once any queue passes the saturation
/// level (terminal).
inline TrainResult train(const ExperimentConfig& cfg, std::uint64_t seed,
                         const std::function<void(const EpisodeStats&)>& on_episode = {}) {
  cfg.validate();
  const TrainConfig& tc = cfg.train;
  const std::size_t num = cfg.district.num_pdcs();
  const int T = cfg.slots_per_action();
  const auto initial = cfg.resolved_initial_allocation();

  TrainResult result;
  const AgentConfig ac = agent_config(tc);
  for (std::size_t d = 0; d < num; ++d) result.agents.emplace_back(ac, seed, d);

  EpsilonSchedule eps{tc.epsilon_start, tc.epsilon_end, tc.epsilon_decay_fraction,
                      static_cast<std::int64_t>(tc.episodes) * tc.max_steps};
  std::int64_t step = 0;

  // Per-episode exceedance counts (q >= q_ub) for the sliding window.
  std::deque<std::vector<std::int64_t>> window_hits;
  std::deque<std::int64_t> window_slots;

  for (int ep = 0; ep < tc.episodes; ++ep) {
    FleetEnvironment env(cfg.district, cfg.arrivals, initial,
                         episode_seed(seed, ep), T);
    EpisodeStats stats;
    stats.episode = ep;
    std::vector<std::int64_t> hits(num, 0);
    std::int64_t slots = 0;
    double reward_sum = 0.0;
    double owned_sum = 0.0;

    auto obs = env.observe();
    for (int k = 0; k < tc.max_steps; ++k) {
      const double epsilon = eps.at(step);
      std::vector<int> actions(num);
      std::vector<int> requests(num);
      for (std::size_t d = 0; d < num; ++d) {
        actions[d] = result.agents[d].act(obs[d], epsilon);
        requests[d] = action_delta(actions[d], cfg.delta);
      }
      env.apply_requests(requests);
      const EpochOutcome out = env.advance();
      const auto next = env.observe();
      const bool done = out.max_queue > tc.saturation_queue;

      for (std::size_t d = 0; d < num; ++d) {
        const double r = compute_reward(out.queue[d], cfg.q_ub[d], out.owned[d], cfg.reward);
        reward_sum += r;
        owned_sum += static_cast<double>(out.owned[d]) * T;
        for (int q : out.queue[d]) hits[d] += q >= cfg.q_ub[d] ? 1 : 0;
        result.agents[d].remember(Experience{obs[d], actions[d], r, next[d], done});
        result.agents[d].learn();
      }
      slots += T;
      ++step;
      ++stats.steps;
      stats.epsilon = epsilon;
      obs = next;
      if (done) {
        stats.saturated = true;
        break;
      }
    }

    if ((ep + 1) % tc.target_update_episodes == 0) {
      for (auto& a : result.agents) a.sync_target();
    }

    window_hits.push_back(hits);
    window_slots.push_back(slots);
    while (static_cast<int>(window_slots.size()) > tc.violation_window_episodes) {
      window_hits.pop_front();
      window_slots.pop_front();
    }
    std::int64_t total_slots = 0;
    for (auto s : window_slots) total_slots += s;
    stats.violation.assign(num, 0.0);
    for (std::size_t d = 0; d < num; ++d) {
      std::int64_t h = 0;
      for (const auto& w : window_hits) h += w[d];
      stats.violation[d] = total_slots > 0 ? static_cast<double>(h) / total_slots : 0.0;
    }
    stats.violation_max = *std::max_element(stats.violation.begin(), stats.violation.end());
    stats.average_reward = reward_sum / static_cast<double>(stats.steps * num);
    stats.mean_owned = owned_sum / static_cast<double>(slots);
    result.curve.push_back(stats);
    if (on_episode) on_episode(stats);
  }
  result.total_steps = step;
  return result;
}

/// Frozen greedy policies, one network per PDC.
class PolicyController final : public Controller {
 public:
  PolicyController(std::vector<Mlp> networks, int delta)
      : networks_(std::move(networks)), delta_(delta) {}

  std::string name() const override { return "rl"; }

  std::vector<int> decide(std::span<const Observation> obs,
                          std::int64_t) override {
    if (obs.size() != networks_.size()) {
      throw std::invalid_argument("policy count does not match PDC count");
    }
    std::vector<int> out(obs.size());
    for (std::size_t d = 0; d < obs.size(); ++d) {
      const auto values = networks_[d].forward(encode_state(obs[d].n, obs[d].q));
      out[d] = action_delta(static_cast<int>(argmax(values)), delta_);
    }
    return out;
  }

 private:
  std::vector<Mlp> networks_;
  int delta_;
};

}  // namespace dronefleet::rl
