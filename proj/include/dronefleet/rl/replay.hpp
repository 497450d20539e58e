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
#include <random>
#include <stdexcept>
#include <vector>

#include "dronefleet/random.hpp"
#include "dronefleet/simcore.hpp"

namespace dronefleet::rl {

struct Experience {
  Observation state;
  int action = 0;
  double reward = 0.0;
  Observation next_state;
  bool done = false;
};

/// Fixed-capacity ring buffer; once full, the oldest entry is overwritten.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("replay capacity must be > 0");
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }

  void push(const Experience& e) {
    if (items_.size() < capacity_) {
      items_.push_back(e);
    } else {
      items_[head_] = e;
    }
    head_ = (head_ + 1) % capacity_;
  }

  /// i-th entry counted from the oldest.
  const Experience& at(std::size_t i) const {
    if (i >= items_.size()) throw std::out_of_range("replay index");
    const std::size_t start = items_.size() < capacity_ ? 0 : head_;
    return items_[(start + i) % capacity_];
  }

  /// Uniform mini-batch, distinct entries within the batch.
  std::vector<const Experience*> sample(std::size_t batch, Rng& rng) const {
    if (batch > items_.size()) {
      throw std::invalid_argument("mini-batch larger than replay contents");
    }
    std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
    std::vector<std::size_t> chosen;
    chosen.reserve(batch);
    while (chosen.size() < batch) {
      const std::size_t i = pick(rng);
      bool seen = false;
      for (std::size_t c : chosen) seen = seen || c == i;
      if (!seen) chosen.push_back(i);
    }
    std::vector<const Experience*> out;
    out.reserve(batch);
    for (std::size_t i : chosen) out.push_back(&items_[i]);
    return out;
  }

 private:
  std::size_t capacity_;
  std::vector<Experience> items_;
  std::size_t head_ = 0;
};

}  // namespace dronefleet::rl
