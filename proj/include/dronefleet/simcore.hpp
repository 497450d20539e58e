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
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dronefleet/arrivals.hpp"
#include "dronefleet/geography.hpp"
#include "dronefleet/random.hpp"

namespace dronefleet {

/// PDC index in [0, D), or kPort for the central port.
using SiteId = int;
constexpr SiteId kPort = -1;

struct Package {
  std::uint64_t id = 0;
  std::size_t region = 0;
  std::int64_t arrival_slot = 0;
  Point destination;
  std::optional<std::int64_t> dispatch_slot;
  std::optional<std::int64_t> delivered_slot;

  std::int64_t wait() const { return dispatch_slot.value() - arrival_slot; }
};

namespace status {
struct Idle {};
struct Delivering {
  Point destination;
  std::int64_t eta_slot = 0;
  std::int64_t mission_start_slot = 0;
};
struct Returning {
  std::int64_t eta_slot = 0;
  std::int64_t delivery_completed_slot = 0;
};
struct BatterySwap {
  std::int64_t ready_slot = 0;
  std::int64_t delivery_completed_slot = 0;
};
struct Relocating {
  SiteId target = kPort;
  std::int64_t eta_slot = 0;
  bool swap_on_arrival = false;
};
}  // namespace status

using UavStatus = std::variant<status::Idle, status::Delivering,
                               status::Returning, status::BatterySwap,
                               status::Relocating>;

struct Uav {
  int id = 0;
  SiteId home = kPort;
  UavStatus status = status::Idle{};

  bool idle() const { return std::holds_alternative<status::Idle>(status); }
};

/// Status partition of the UAVs owned by one site. BatterySwap UAVs have
/// just finished a delivery leg and are grouped with the returning ones.
struct StatusCounts {
  int idle = 0;
  int delivering = 0;
  int returning = 0;
  int relocating = 0;

  int total() const { return idle + delivering + returning + relocating; }
};

struct Observation {
  int n = 0;  // UAVs owned, relocating inbound included
  int q = 0;  // packages waiting
  friend bool operator==(const Observation&, const Observation&) = default;
};

struct Move {
  int uav = 0;
  SiteId target = kPort;
  friend bool operator==(const Move&, const Move&) = default;
};

/// What happened during one slot; queue and fleet columns are end-of-slot.
struct SlotRecord {
  std::int64_t t = 0;
  std::vector<int> arrivals;
  std::vector<int> dispatches;
  std::vector<int> queue;
  std::vector<int> owned;
  int port = 0;
  std::vector<Package> dispatched;
};

class Simulator {
 public:
  Simulator(District district, ArrivalConfig arrivals,
            const std::vector<int>& initial_allocation, std::uint64_t seed)
      : district_(std::move(district)),
        arrival_config_(std::move(arrivals)),
        destination_rng_(make_stream(seed, stream::kDestinations)) {
    validate(district_);
    const std::size_t num = district_.num_pdcs();
    if (arrival_config_.num_pdcs() != num) {
      throw std::invalid_argument("batch_mean length must equal PDC count");
    }
    if (initial_allocation.size() != num) {
      throw std::invalid_argument("allocation length must equal PDC count");
    }
    long total = 0;
    for (int c : initial_allocation) {
      if (c < 0) throw std::invalid_argument("allocation counts must be >= 0");
      total += c;
    }
    if (total > district_.total_uavs) {
      throw std::invalid_argument("allocation exceeds fleet size");
    }

    int id = 0;
    for (std::size_t d = 0; d < num; ++d) {
      for (int k = 0; k < initial_allocation[d]; ++k) {
        uavs_.push_back(Uav{id++, static_cast<SiteId>(d), status::Idle{}});
      }
    }
    while (id < district_.total_uavs) {
      uavs_.push_back(Uav{id++, kPort, status::Idle{}});
    }

    queues_.resize(num);
    for (std::size_t d = 0; d < num; ++d) {
      arrival_rngs_.push_back(make_stream(seed, stream::kArrivals + d));
      processes_.push_back(arrival_config_.make_process(d, arrival_rngs_.back()));
    }
  }

  std::int64_t now() const { return t_; }
  const District& district() const { return district_; }
  const ArrivalConfig& arrival_config() const { return arrival_config_; }
  std::size_t num_pdcs() const { return district_.num_pdcs(); }
  const std::vector<Uav>& uavs() const { return uavs_; }
  const std::deque<Package>& queue(std::size_t d) const { return queues_.at(d); }
  const ArrivalProcess& process(std::size_t d) const { return processes_.at(d); }

  Point site_location(SiteId site) const {
    if (site == kPort) return district_.port_location;
    return district_.regions.at(static_cast<std::size_t>(site)).pdc_location;
  }

  std::int64_t travel(const Point& a, const Point& b) const {
    return travel_time_slots(a, b, district_.speed_kph);
  }

  StatusCounts counts(SiteId site) const {
    StatusCounts c;
    for (const auto& u : uavs_) {
      if (u.home != site) continue;
      std::visit(
          [&c](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, status::Idle>) {
              ++c.idle;
            } else if constexpr (std::is_same_v<S, status::Delivering>) {
              ++c.delivering;
            } else if constexpr (std::is_same_v<S, status::Relocating>) {
              ++c.relocating;
            } else {
              ++c.returning;
            }
          },
          u.status);
    }
    return c;
  }

  int owned(SiteId site) const {
    return static_cast<int>(std::count_if(
        uavs_.begin(), uavs_.end(),
        [site](const Uav& u) { return u.home == site; }));
  }

  std::vector<int> allocation() const {
    std::vector<int> out(num_pdcs(), 0);
    for (const auto& u : uavs_) {
      if (u.home != kPort) ++out[static_cast<std::size_t>(u.home)];
    }
    return out;
  }

  Observation observe(std::size_t d) const {
    if (d >= num_pdcs()) throw std::out_of_range("PDC index out of range");
    return Observation{owned(static_cast<SiteId>(d)),
                       static_cast<int>(queues_[d].size())};
  }

  /// Adds a package to PDC d's queue as if it arrived now.
  void inject_package(std::size_t d, const Point& destination) {
    Package p;
    p.id = next_package_id_++;
    p.region = d;
    p.arrival_slot = t_;
    p.destination = destination;
    queues_.at(d).push_back(p);
  }

  /// One slot: status transitions, arrivals, FCFS dispatch, clock tick.
  SlotRecord step() {
    const std::size_t num = num_pdcs();
    SlotRecord rec;
    rec.t = t_;
    rec.arrivals.assign(num, 0);
    rec.dispatches.assign(num, 0);

    for (auto& u : uavs_) advance(u);

    for (std::size_t d = 0; d < num; ++d) {
      const int batch = processes_[d].draw_batch(arrival_config_.batch_spec(d),
                                                 t_, arrival_rngs_[d]);
      rec.arrivals[d] = batch;
      for (int k = 0; k < batch; ++k) {
        inject_package(d, sample_destination(district_.regions[d],
                                             destination_rng_));
      }
    }

    // UAVs are stored in id order, so the first idle match is the lowest id.
    for (std::size_t d = 0; d < num; ++d) {
      auto& q = queues_[d];
      const Point pdc = district_.regions[d].pdc_location;
      for (auto& u : uavs_) {
        if (q.empty()) break;
        if (u.home != static_cast<SiteId>(d) || !u.idle()) continue;
        Package p = std::move(q.front());
        q.pop_front();
        const std::int64_t eta = t_ + travel(pdc, p.destination);
        u.status = status::Delivering{p.destination, eta, t_};
        p.dispatch_slot = t_;
        p.delivered_slot = eta;
        ++rec.dispatches[d];
        rec.dispatched.push_back(std::move(p));
      }
    }

    rec.queue.resize(num);
    rec.owned.assign(num, 0);
    for (std::size_t d = 0; d < num; ++d) {
      rec.queue[d] = static_cast<int>(queues_[d].size());
    }
    for (const auto& u : uavs_) {
      if (u.home == kPort) {
        ++rec.port;
      } else {
        ++rec.owned[static_cast<std::size_t>(u.home)];
      }
    }
    ++t_;
    return rec;
  }

  /// Reassigns ownership immediately. Idle and returning UAVs fly from
  /// their home site to the target; delivering UAVs finish the current
  /// package and then fly to the new home.
  void apply_moves(std::span<const Move> moves) {
    for (const auto& m : moves) {
      if (m.uav < 0 || static_cast<std::size_t>(m.uav) >= uavs_.size()) {
        throw std::invalid_argument("move references unknown UAV " +
                                    std::to_string(m.uav));
      }
      if (m.target != kPort &&
          (m.target < 0 || static_cast<std::size_t>(m.target) >= num_pdcs())) {
        throw std::invalid_argument("move targets unknown site " +
                                    std::to_string(m.target));
      }
    }
    for (const auto& m : moves) {
      Uav& u = uavs_[static_cast<std::size_t>(m.uav)];
      if (u.home == m.target) continue;
      const Point from = site_location(u.home);
      const Point to = site_location(m.target);
      std::visit(
          [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, status::Idle>) {
              u.status = status::Relocating{m.target, t_ + travel(from, to), false};
            } else if constexpr (std::is_same_v<S, status::Returning> ||
                                 std::is_same_v<S, status::BatterySwap>) {
              u.status = status::Relocating{m.target, t_ + travel(from, to), true};
            } else if constexpr (std::is_same_v<S, status::Relocating>) {
              throw std::invalid_argument("UAV " + std::to_string(m.uav) +
                                          " is already relocating");
            }
          },
          u.status);
      u.home = m.target;
    }
  }

 private:
  void advance(Uav& u) const {
    for (;;) {
      bool changed = false;
      if (auto* s = std::get_if<status::Delivering>(&u.status)) {
        if (s->eta_slot <= t_) {
          const Point dest = s->destination;
          u.status = status::Returning{t_ + travel(dest, site_location(u.home)), t_};
          changed = true;
        }
      } else if (auto* s = std::get_if<status::Returning>(&u.status)) {
        if (s->eta_slot <= t_) {
          u.status = status::BatterySwap{t_ + 1, s->delivery_completed_slot};
          changed = true;
        }
      } else if (auto* s = std::get_if<status::BatterySwap>(&u.status)) {
        if (s->ready_slot <= t_) {
          u.status = status::Idle{};
          changed = true;
        }
      } else if (auto* s = std::get_if<status::Relocating>(&u.status)) {
        if (s->eta_slot <= t_) {
          if (s->swap_on_arrival) {
            u.status = status::BatterySwap{t_ + 1, t_};
          } else {
            u.status = status::Idle{};
          }
          changed = true;
        }
      }
      if (!changed) return;
    }
  }

  District district_;
  ArrivalConfig arrival_config_;
  std::vector<Uav> uavs_;
  std::vector<std::deque<Package>> queues_;
  std::vector<ArrivalProcess> processes_;
  std::vector<Rng> arrival_rngs_;
  Rng destination_rng_;
  std::int64_t t_ = 0;
  std::uint64_t next_package_id_ = 0;
};

inline void write_trace_header(std::ostream& os, std::size_t num_pdcs) {
  os << "t";
  for (std::size_t d = 0; d < num_pdcs; ++d) {
    os << ",q" << d << ",n" << d << ",arrivals" << d << ",dispatches" << d;
  }
  os << ",port\n";
}

inline void write_trace_row(std::ostream& os, const SlotRecord& r) {
  os << r.t;
  for (std::size_t d = 0; d < r.queue.size(); ++d) {
    os << ',' << r.queue[d] << ',' << r.owned[d] << ',' << r.arrivals[d] << ','
       << r.dispatches[d];
  }
  os << ',' << r.port << '\n';
}

}  // namespace dronefleet
