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
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dronefleet/rl/network.hpp"

namespace dronefleet::rl {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Network snapshot with the training step counter and the resolved config.
struct Checkpoint {
  Mlp network;
  std::int64_t train_steps = 0;
  nlohmann::json config;
};

inline nlohmann::json network_to_json(const Mlp& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : net.parameters()) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < l.out; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < l.in; ++c) row.push_back(l.w(r, c));
      rows.push_back(std::move(row));
    }
    layers.push_back({{"weight", std::move(rows)}, {"bias", l.bias}});
  }
  return {{"layer_sizes", net.sizes()}, {"layers", std::move(layers)}};
}

inline Mlp network_from_json(const nlohmann::json& j) {
  try {
    const auto sizes = j.at("layer_sizes").get<std::vector<int>>();
    const auto& layers = j.at("layers");
    if (sizes.size() < 2 || layers.size() != sizes.size() - 1) {
      throw CheckpointError("layer count does not match layer_sizes");
    }
    Parameters params;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      DenseLayer l;
      l.in = sizes[i];
      l.out = sizes[i + 1];
      const auto& rows = layers[i].at("weight");
      if (rows.size() != static_cast<std::size_t>(l.out)) {
        throw CheckpointError("weight rows do not match layer size");
      }
      for (const auto& row : rows) {
        if (row.size() != static_cast<std::size_t>(l.in)) {
          throw CheckpointError("weight columns do not match layer size");
        }
        for (const auto& x : row) l.weight.push_back(x.get<double>());
      }
      l.bias = layers[i].at("bias").get<std::vector<double>>();
      if (l.bias.size() != static_cast<std::size_t>(l.out)) {
        throw CheckpointError("bias length does not match layer size");
      }
      params.push_back(std::move(l));
    }
    return Mlp(std::move(params));
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("malformed network: ") + e.what());
  }
}

inline nlohmann::json to_json(const Checkpoint& c) {
  nlohmann::json j = network_to_json(c.network);
  j["train_steps"] = c.train_steps;
  j["config"] = c.config;
  return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  Checkpoint c;
  c.network = network_from_json(j);
  c.train_steps = j.value("train_steps", std::int64_t{0});
  c.config = j.value("config", nlohmann::json::object());
  return c;
}

inline void save_checkpoint(const std::string& path, const Checkpoint& c) {
  std::ofstream out(path);
  if (!out) throw CheckpointError("cannot write checkpoint " + path);
  out << to_json(c).dump(1) << '\n';
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("checkpoint " + path + " is not valid JSON: " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace dronefleet::rl
