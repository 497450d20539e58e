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
#include <span>
#include <stdexcept>

namespace dronefleet::rl {

/// Per-slot reward is alpha1 when the queue exceeds its bound and alpha2
/// otherwise; the epoch reward subtracts the UAVs held. With
/// alpha1 = eps*lambda - lambda and alpha2 = eps*lambda the long-run
/// average reward is minus the Lagrangian
///   E[n] + lambda*T * (P(q > q_ub) - eps).
struct RewardParams {
  double lambda = 4.0;
  double epsilon = 0.1;
  int slots_per_action = 60;

  double alpha1() const { return epsilon * lambda - lambda; }
  double alpha2() const { return epsilon * lambda; }
  double dual_multiplier() const { return lambda * slots_per_action; }

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
      throw std::invalid_argument("violation budget must be in (0, 1)");
    }
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (slots_per_action < 1) throw std::invalid_argument("T must be >= 1");
  }
};

/// Slots in the trace with q strictly above the bound.
inline int count_exceedances(std::span<const int> queue_trace, double q_ub) {
  return static_cast<int>(std::count_if(queue_trace.begin(), queue_trace.end(),
                                        [q_ub](int q) { return q > q_ub; }));
}

inline double compute_reward(std::span<const int> queue_trace, double q_ub,
                             int owned, const RewardParams& params) {
  if (static_cast<int>(queue_trace.size()) != params.slots_per_action) {
    throw std::invalid_argument("queue trace length must equal T");
  }
  const int k1 = count_exceedances(queue_trace, q_ub);
  return k1 * params.alpha1() +
         (params.slots_per_action - k1) * params.alpha2() - owned;
}

}  // namespace dronefleet::rl
