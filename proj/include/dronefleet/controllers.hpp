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
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dronefleet/simcore.hpp"

namespace dronefleet {

/// Largest-remainder apportionment of `total` by nonnegative weights.
/// Remainder ties go to the lower index.
inline std::vector<int> apportion(std::span<const double> weights, int total) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be >= 0");
    sum += w;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("weights are all zero");
  if (total < 0) throw std::invalid_argument("total must be >= 0");

  const std::size_t n = weights.size();
  std::vector<int> out(n, 0);
  std::vector<double> remainder(n, 0.0);
  int assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double share = weights[i] * total / sum;
    const double whole = std::floor(share + 1e-9);
    out[i] = static_cast<int>(whole);
    remainder[i] = std::max(0.0, share - whole);
    assigned += out[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % n) {
    ++out[order[k]];
    ++assigned;
  }
  return out;
}

inline std::vector<int> static_allocate(std::span<const double> weights,
                                        int total_uavs) {
  return apportion(weights, total_uavs);
}

/// Shrink below half the bound, grow at or above 1.5x the bound.
inline int threshold_decide(int q, double q_ub, int delta) {
  if (!(q_ub > 0.0)) throw std::invalid_argument("q_ub must be positive");
  if (q < 0.5 * q_ub) return -delta;
  if (q >= 1.5 * q_ub) return delta;
  return 0;
}

/// Apportions the fleet by queue length; an empty system splits evenly.
inline std::vector<int> ql_proportional_allocate(std::span<const int> queues,
                                                 int total_uavs) {
  std::vector<double> w(queues.begin(), queues.end());
  const bool all_zero = std::all_of(w.begin(), w.end(),
                                    [](double x) { return x == 0.0; });
  if (all_zero) std::fill(w.begin(), w.end(), 1.0);
  return apportion(w, total_uavs);
}

inline std::vector<int> target_to_requests(std::span<const int> target,
                                           std::span<const Observation> obs) {
  std::vector<int> out(target.size());
  for (std::size_t d = 0; d < target.size(); ++d) out[d] = target[d] - obs[d].n;
  return out;
}

/// Decides per-PDC UAV deltas at every action epoch (every T slots).
class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  virtual std::vector<int> decide(std::span<const Observation> obs,
                                  std::int64_t epoch) = 0;
};

/// Holds the initial apportionment for the whole run.
class StaticController final : public Controller {
 public:
  std::string name() const override { return "static"; }
  std::vector<int> decide(std::span<const Observation> obs,
                          std::int64_t) override {
    return std::vector<int>(obs.size(), 0);
  }
};

class ThresholdController final : public Controller {
 public:
  ThresholdController(std::vector<double> q_ub, int delta)
      : q_ub_(std::move(q_ub)), delta_(delta) {}

  std::string name() const override { return "threshold"; }

  std::vector<int> decide(std::span<const Observation> obs,
                          std::int64_t) override {
    std::vector<int> out(obs.size());
    for (std::size_t d = 0; d < obs.size(); ++d) {
      out[d] = threshold_decide(obs[d].q, q_ub_.at(d), delta_);
    }
    return out;
  }

 private:
  std::vector<double> q_ub_;
  int delta_;
};

/// Re-apportions by queue length every `update_multiple` epochs and holds
/// the allocation in between.
class QueueProportionalController final : public Controller {
 public:
  QueueProportionalController(int total_uavs, int update_multiple)
      : total_uavs_(total_uavs), update_multiple_(update_multiple) {
    if (update_multiple_ < 1) {
      throw std::invalid_argument("ql update multiple must be >= 1");
    }
  }

  std::string name() const override { return "ql"; }

  std::vector<int> decide(std::span<const Observation> obs,
                          std::int64_t epoch) override {
    if (epoch % update_multiple_ != 0) return std::vector<int>(obs.size(), 0);
    std::vector<int> queues;
    for (const auto& o : obs) queues.push_back(o.q);
    const auto target = ql_proportional_allocate(queues, total_uavs_);
    return target_to_requests(target, obs);
  }

 private:
  int total_uavs_;
  int update_multiple_;
};

}  // namespace dronefleet
