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
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dronefleet/arrivals.hpp"
#include "dronefleet/controllers.hpp"
#include "dronefleet/geography.hpp"
#include "dronefleet/rl/reward.hpp"

namespace dronefleet {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainConfig {
  int episodes = 300;
  int max_steps = 1000;
  double gamma = 0.99;
  int batch_size = 25;
  int target_update_episodes = 5;
  double epsilon_start = 0.5;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.8;
  int saturation_queue = 2000;
  int learning_starts = 1000;
  int replay_capacity = 1000000;
  double learning_rate = 0.001;
  std::vector<int> hidden = {32, 32};
  int violation_window_episodes = 10;
};

struct ExperimentConfig {
  District district;
  ArrivalConfig arrivals;
  std::string controller = "rl";  // static | threshold | ql | rl
  rl::RewardParams reward;
  std::vector<double> q_ub = {85, 80, 120, 150};
  int delta = 5;
  int ql_update_multiple = 5;
  /// Allocation at t = 0; empty means population-proportional.
  std::vector<int> initial_allocation;
  TrainConfig train;
  std::vector<std::uint64_t> seeds = {1};
  std::int64_t horizon = 100000;
  std::int64_t warmup = 1000;
  std::vector<int> sweep_uavs;
  std::string checkpoint_dir;
  std::string output_dir = "runs";

  int slots_per_action() const { return reward.slots_per_action; }

  std::vector<int> resolved_initial_allocation() const {
    if (!initial_allocation.empty()) return initial_allocation;
    const auto w = population_weights(district);
    return static_allocate(w, district.total_uavs);
  }

  void validate() const {
    try {
      dronefleet::validate(district);
      arrivals.validate();
      reward.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const std::size_t num = district.num_pdcs();
    if (arrivals.num_pdcs() != num) {
      throw ConfigError("arrivals.batch_mean length must equal region count");
    }
    if (q_ub.size() != num) throw ConfigError("q_ub length must equal region count");
    for (double b : q_ub) {
      if (!(b > 0.0)) throw ConfigError("q_ub entries must be positive");
    }
    if (controller != "static" && controller != "threshold" &&
        controller != "ql" && controller != "rl") {
      throw ConfigError("unknown controller '" + controller + "'");
    }
    if (delta < 1) throw ConfigError("delta must be >= 1");
    if (ql_update_multiple < 1) throw ConfigError("ql_update_multiple must be >= 1");
    if (!initial_allocation.empty()) {
      if (initial_allocation.size() != num) {
        throw ConfigError("initial_allocation length must equal region count");
      }
      long total = 0;
      for (int c : initial_allocation) {
        if (c < 0) throw ConfigError("initial_allocation entries must be >= 0");
        total += c;
      }
      if (total > district.total_uavs) {
        throw ConfigError("initial_allocation exceeds total_uavs");
      }
    }
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (warmup < 0) throw ConfigError("warmup must be >= 0");
    const auto& t = train;
    if (t.episodes < 0) throw ConfigError("train.episodes must be >= 0");
    if (t.max_steps < 1) throw ConfigError("train.max_steps must be >= 1");
    if (!(t.gamma > 0.0 && t.gamma <= 1.0)) throw ConfigError("train.gamma must be in (0, 1]");
    if (t.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
    if (t.target_update_episodes < 1) {
      throw ConfigError("train.target_update_episodes must be >= 1");
    }
    for (double e : {t.epsilon_start, t.epsilon_end}) {
      if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("epsilon bounds must be in [0, 1]");
    }
    if (t.replay_capacity < t.batch_size) {
      throw ConfigError("train.replay_capacity must be >= batch_size");
    }
    if (t.violation_window_episodes < 1) {
      throw ConfigError("train.violation_window_episodes must be >= 1");
    }
    if (!(t.learning_rate > 0.0)) throw ConfigError("train.learning_rate must be > 0");
    for (int h : t.hidden) {
      if (h < 1) throw ConfigError("hidden layer sizes must be positive");
    }
    for (int n : sweep_uavs) {
      if (n < 1) throw ConfigError("sweep sizes must be >= 1");
    }
  }
};

inline void to_json(nlohmann::json& j, const TrainConfig& t) {
  j = {{"episodes", t.episodes},
       {"max_steps", t.max_steps},
       {"gamma", t.gamma},
       {"batch_size", t.batch_size},
       {"target_update_episodes", t.target_update_episodes},
       {"epsilon_start", t.epsilon_start},
       {"epsilon_end", t.epsilon_end},
       {"epsilon_decay_fraction", t.epsilon_decay_fraction},
       {"saturation_queue", t.saturation_queue},
       {"learning_starts", t.learning_starts},
       {"replay_capacity", t.replay_capacity},
       {"learning_rate", t.learning_rate},
       {"hidden", t.hidden},
       {"violation_window_episodes", t.violation_window_episodes}};
}

inline void from_json(const nlohmann::json& j, TrainConfig& t) {
  const TrainConfig d;
  t.episodes = j.value("episodes", d.episodes);
  t.max_steps = j.value("max_steps", d.max_steps);
  t.gamma = j.value("gamma", d.gamma);
  t.batch_size = j.value("batch_size", d.batch_size);
  t.target_update_episodes = j.value("target_update_episodes", d.target_update_episodes);
  t.epsilon_start = j.value("epsilon_start", d.epsilon_start);
  t.epsilon_end = j.value("epsilon_end", d.epsilon_end);
  t.epsilon_decay_fraction = j.value("epsilon_decay_fraction", d.epsilon_decay_fraction);
  t.saturation_queue = j.value("saturation_queue", d.saturation_queue);
  t.learning_starts = j.value("learning_starts", d.learning_starts);
  t.replay_capacity = j.value("replay_capacity", d.replay_capacity);
  t.learning_rate = j.value("learning_rate", d.learning_rate);
  t.hidden = j.value("hidden", d.hidden);
  t.violation_window_episodes =
      j.value("violation_window_episodes", d.violation_window_episodes);
}

/// Fully expanded config; the district is embedded so the file is
/// self-contained.
inline nlohmann::json resolved_json(const ExperimentConfig& c) {
  return {{"district", c.district},
          {"arrivals", c.arrivals},
          {"controller", c.controller},
          {"reward", {{"lambda", c.reward.lambda}, {"epsilon", c.reward.epsilon}}},
          {"update_period_T_mins", c.reward.slots_per_action},
          {"q_ub", c.q_ub},
          {"delta", c.delta},
          {"ql_update_multiple", c.ql_update_multiple},
          {"initial_allocation", c.initial_allocation},
          {"train", c.train},
          {"seeds", c.seeds},
          {"horizon", c.horizon},
          {"warmup", c.warmup},
          {"sweep_uavs", c.sweep_uavs},
          {"checkpoint_dir", c.checkpoint_dir},
          {"output_dir", c.output_dir}};
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

/// Parses an experiment config. Relative district paths resolve against
/// `base_dir`.
inline ExperimentConfig parse_config(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  try {
    const auto& dj = j.at("district");
    if (dj.is_string()) {
      std::filesystem::path p = dj.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      c.district = read_json_file(p).get<District>();
    } else {
      c.district = dj.get<District>();
    }
    if (j.contains("total_uavs")) c.district.total_uavs = j.at("total_uavs").get<int>();
    c.arrivals = j.value("arrivals", nlohmann::json::object()).get<ArrivalConfig>();
    c.controller = j.value("controller", c.controller);
    if (j.contains("reward")) {
      c.reward.lambda = j["reward"].value("lambda", c.reward.lambda);
      c.reward.epsilon = j["reward"].value("epsilon", c.reward.epsilon);
    }
    c.reward.slots_per_action = j.value("update_period_T_mins", c.reward.slots_per_action);
    c.q_ub = j.value("q_ub", c.q_ub);
    c.delta = j.value("delta", c.delta);
    c.ql_update_multiple = j.value("ql_update_multiple", c.ql_update_multiple);
    c.initial_allocation = j.value("initial_allocation", c.initial_allocation);
    if (j.contains("train")) c.train = j.at("train").get<TrainConfig>();
    c.seeds = j.value("seeds", c.seeds);
    c.horizon = j.value("horizon", c.horizon);
    c.warmup = j.value("warmup", c.warmup);
    c.sweep_uavs = j.value("sweep_uavs", c.sweep_uavs);
    c.checkpoint_dir = j.value("checkpoint_dir", c.checkpoint_dir);
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto j = read_json_file(path);
  return parse_config(j, path.parent_path());
}

}  // namespace dronefleet
