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

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "dronefleet/rl/network.hpp"

namespace dronefleet::rl {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam over a Parameters tree.
class Adam {
 public:
  Adam() = default;
  Adam(const Parameters& like, AdamConfig config = {})
      : config_(config), m_(zeros_like(like)), v_(zeros_like(like)) {}

  const AdamConfig& config() const { return config_; }
  std::int64_t steps() const { return t_; }
  const Parameters& first_moment() const { return m_; }
  const Parameters& second_moment() const { return v_; }

  void step(Parameters& params, const Parameters& grads) {
    if (!same_shape(params, m_) || !same_shape(grads, m_)) {
      throw std::invalid_argument("adam: parameter/gradient shape mismatch");
    }
    ++t_;
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    for (std::size_t li = 0; li < params.size(); ++li) {
      update(params[li].weight, grads[li].weight, m_[li].weight, v_[li].weight, c1, c2);
      update(params[li].bias, grads[li].bias, m_[li].bias, v_[li].bias, c1, c2);
    }
  }

 private:
  void update(std::vector<double>& p, const std::vector<double>& g,
              std::vector<double>& m, std::vector<double>& v, double c1,
              double c2) const {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      p[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }

  AdamConfig config_;
  Parameters m_;
  Parameters v_;
  std::int64_t t_ = 0;
};

}  // namespace dronefleet::rl
