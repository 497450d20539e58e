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
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dronefleet/random.hpp"

namespace dronefleet {

enum class Phase { kHigh, kLow };

struct Bernoulli {
  double p = 0.5;
};

/// Deterministic high/low square wave; each segment lasts period_slots and
/// the cycle starts High (shifted by phase_offset_slots).
struct TimeVaryingBernoulli {
  double p_high = 0.9;
  double p_low = 0.1;
  std::int64_t period_slots = 300;
  std::int64_t phase_offset_slots = 0;
};

enum class PhaseClock { kPerSlot, kPerOpportunity };

struct MarkovModulatedBernoulli {
  double p_high = 0.9;
  double p_low = 0.1;
  double p_high_to_low = 0.15;
  double p_low_to_high = 0.15;
  Phase phase = Phase::kHigh;
  PhaseClock clock = PhaseClock::kPerSlot;
};

using ArrivalVariant =
    std::variant<Bernoulli, TimeVaryingBernoulli, MarkovModulatedBernoulli>;

/// Batch size law: discrete uniform on [mean - half_width, mean + half_width].
struct BatchSpec {
  int mean = 55;
  int half_width = 15;
};

namespace detail {
inline void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
  }
}
}  // namespace detail

inline bool arrival_opportunity(std::int64_t t, std::int64_t slot_interval) {
  return slot_interval > 0 && t >= 0 && t % slot_interval == 0;
}

/// Markov phase transition for one tick of the modulating chain.
inline Phase mmb_phase_step(const MarkovModulatedBernoulli& m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double flip = m.phase == Phase::kHigh ? m.p_high_to_low : m.p_low_to_high;
  if (u(rng) < flip) {
    return m.phase == Phase::kHigh ? Phase::kLow : Phase::kHigh;
  }
  return m.phase;
}

inline int draw_batch_size(const BatchSpec& spec, Rng& rng) {
  std::uniform_int_distribution<int> size(spec.mean - spec.half_width,
                                          spec.mean + spec.half_width);
  return size(rng);
}

/// One PDC's truck arrival stream. Owns the MMB phase; not thread-shared.
class ArrivalProcess {
 public:
  ArrivalProcess() = default;
  ArrivalProcess(ArrivalVariant variant, std::int64_t slot_interval)
      : variant_(std::move(variant)), slot_interval_(slot_interval) {
    validate();
  }

  const ArrivalVariant& variant() const { return variant_; }
  std::int64_t slot_interval() const { return slot_interval_; }

  bool opportunity(std::int64_t t) const {
    return arrival_opportunity(t, slot_interval_);
  }

  double current_rate(std::int64_t t) const {
    return std::visit(
        [t](const auto& v) -> double {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, Bernoulli>) {
            return v.p;
          } else if constexpr (std::is_same_v<V, TimeVaryingBernoulli>) {
            const std::int64_t cycle = 2 * v.period_slots;
            std::int64_t pos = (t + v.phase_offset_slots) % cycle;
            if (pos < 0) pos += cycle;
            return pos < v.period_slots ? v.p_high : v.p_low;
          } else {
            return v.phase == Phase::kHigh ? v.p_high : v.p_low;
          }
        },
        variant_);
  }

  /// Batch arriving in slot t (0 when no truck), then advances the
  /// modulating chain. Call exactly once per slot, in slot order.
  int draw_batch(const BatchSpec& spec, std::int64_t t, Rng& rng) {
    int count = 0;
    const bool opp = opportunity(t);
    if (opp) {
      std::bernoulli_distribution coin(current_rate(t));
      if (coin(rng)) count = draw_batch_size(spec, rng);
    }
    if (auto* m = std::get_if<MarkovModulatedBernoulli>(&variant_)) {
      if (m->clock == PhaseClock::kPerSlot || opp) {
        m->phase = mmb_phase_step(*m, rng);
      }
    }
    return count;
  }

  Phase phase() const {
    if (const auto* m = std::get_if<MarkovModulatedBernoulli>(&variant_)) {
      return m->phase;
    }
    return Phase::kHigh;
  }

 private:
  void validate() const {
    if (slot_interval_ < 1) {
      throw std::invalid_argument("truck interval must be >= 1 slot");
    }
    std::visit(
        [](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, Bernoulli>) {
            detail::check_probability(v.p, "p");
          } else if constexpr (std::is_same_v<V, TimeVaryingBernoulli>) {
            detail::check_probability(v.p_high, "p_high");
            detail::check_probability(v.p_low, "p_low");
            if (v.period_slots < 1) {
              throw std::invalid_argument("period must be >= 1 slot");
            }
          } else {
            detail::check_probability(v.p_high, "p_high");
            detail::check_probability(v.p_low, "p_low");
            detail::check_probability(v.p_high_to_low, "p_high_to_low");
            detail::check_probability(v.p_low_to_high, "p_low_to_high");
          }
        },
        variant_);
  }

  ArrivalVariant variant_ = Bernoulli{};
  std::int64_t slot_interval_ = 30;
};

/// Experiment-level arrival section. Scalar rates apply to every PDC;
/// phase offsets and batch means are per PDC.
struct ArrivalConfig {
  std::string type = "bernoulli";  // bernoulli | tvb | mmb
  double p = 0.5;
  double p_high = 0.9;
  double p_low = 0.1;
  std::int64_t period_mins = 300;
  std::vector<std::int64_t> phase_offset_mins;  // tvb; empty = all zero
  double p_high_to_low = 0.15;
  double p_low_to_high = 0.15;
  std::string mmb_clock = "slot";  // slot | opportunity
  std::int64_t truck_interval_mins = 30;
  std::vector<int> batch_mean = {55, 50, 75, 90};
  int batch_half_width = 15;

  std::size_t num_pdcs() const { return batch_mean.size(); }

  void validate() const {
    if (type != "bernoulli" && type != "tvb" && type != "mmb") {
      throw std::invalid_argument("unknown arrival type '" + type + "'");
    }
    if (mmb_clock != "slot" && mmb_clock != "opportunity") {
      throw std::invalid_argument("mmb_clock must be 'slot' or 'opportunity'");
    }
    detail::check_probability(p, "p");
    detail::check_probability(p_high, "p_high");
    detail::check_probability(p_low, "p_low");
    detail::check_probability(p_high_to_low, "p_high_to_low");
    detail::check_probability(p_low_to_high, "p_low_to_high");
    if (period_mins < 1) throw std::invalid_argument("period_mins must be >= 1");
    if (truck_interval_mins < 1) {
      throw std::invalid_argument("truck_interval_mins must be >= 1");
    }
    if (batch_half_width < 0) {
      throw std::invalid_argument("batch_half_width must be >= 0");
    }
    for (int m : batch_mean) {
      if (m - batch_half_width < 0) {
        throw std::invalid_argument("batch mean - half width must be >= 0");
      }
    }
    if (!phase_offset_mins.empty() &&
        phase_offset_mins.size() != batch_mean.size()) {
      throw std::invalid_argument("phase_offset_mins length must equal PDC count");
    }
  }

  BatchSpec batch_spec(std::size_t d) const {
    return BatchSpec{batch_mean.at(d), batch_half_width};
  }

  /// Builds PDC d's process. The MMB starting phase is drawn from the
  /// chain's stationary law using rng.
  ArrivalProcess make_process(std::size_t d, Rng& rng) const {
    validate();
    if (type == "bernoulli") {
      return ArrivalProcess(Bernoulli{p}, truck_interval_mins);
    }
    if (type == "tvb") {
      const std::int64_t offset =
          phase_offset_mins.empty() ? 0 : phase_offset_mins.at(d);
      return ArrivalProcess(
          TimeVaryingBernoulli{p_high, p_low, period_mins, offset},
          truck_interval_mins);
    }
    MarkovModulatedBernoulli m{p_high, p_low, p_high_to_low, p_low_to_high};
    m.clock = mmb_clock == "slot" ? PhaseClock::kPerSlot
                                  : PhaseClock::kPerOpportunity;
    const double denom = p_high_to_low + p_low_to_high;
    const double p_start_high = denom > 0.0 ? p_low_to_high / denom : 1.0;
    std::bernoulli_distribution start(p_start_high);
    m.phase = start(rng) ? Phase::kHigh : Phase::kLow;
    return ArrivalProcess(m, truck_interval_mins);
  }
};

inline void to_json(nlohmann::json& j, const ArrivalConfig& c) {
  j = {{"type", c.type},
       {"p", c.p},
       {"p_high", c.p_high},
       {"p_low", c.p_low},
       {"period_mins", c.period_mins},
       {"phase_offset_mins", c.phase_offset_mins},
       {"p_high_to_low", c.p_high_to_low},
       {"p_low_to_high", c.p_low_to_high},
       {"mmb_clock", c.mmb_clock},
       {"truck_interval_mins", c.truck_interval_mins},
       {"batch_mean", c.batch_mean},
       {"batch_half_width", c.batch_half_width}};
}

inline void from_json(const nlohmann::json& j, ArrivalConfig& c) {
  ArrivalConfig d;
  c.type = j.value("type", d.type);
  c.p = j.value("p", d.p);
  c.p_high = j.value("p_high", d.p_high);
  c.p_low = j.value("p_low", d.p_low);
  c.period_mins = j.value("period_mins", d.period_mins);
  c.phase_offset_mins = j.value("phase_offset_mins", d.phase_offset_mins);
  c.p_high_to_low = j.value("p_high_to_low", d.p_high_to_low);
  c.p_low_to_high = j.value("p_low_to_high", d.p_low_to_high);
  c.mmb_clock = j.value("mmb_clock", d.mmb_clock);
  c.truck_interval_mins = j.value("truck_interval_mins", d.truck_interval_mins);
  c.batch_mean = j.value("batch_mean", d.batch_mean);
  c.batch_half_width = j.value("batch_half_width", d.batch_half_width);
  c.validate();
}

}  // namespace dronefleet
