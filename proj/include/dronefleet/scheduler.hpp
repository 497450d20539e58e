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
#include <numeric>
#include <random>
#include <vector>

#include "dronefleet/geography.hpp"
#include "dronefleet/random.hpp"
#include "dronefleet/simcore.hpp"

namespace dronefleet {

// Central swap scheduler. Agents only say how many UAVs they want to gain
// or shed; the scheduler decides which UAVs move where.

enum class UavGroup { kIdle, kReturning, kDelivering, kRelocating };

/// Scheduler-facing view of one UAV.
struct UavView {
  int id = 0;
  SiteId home = kPort;
  UavGroup group = UavGroup::kIdle;
  /// Delivery completion slot for returning UAVs, mission start for
  /// delivering ones; unused otherwise.
  std::int64_t order_slot = 0;
  /// Where the UAV can start a relocation leg from.
  Point position;
  /// Meters still to fly before reaching `position` (delivering UAVs).
  double lead_m = 0.0;
};

struct FleetSnapshot {
  std::vector<Point> pdc_locations;
  Point port_location;
  std::vector<UavView> uavs;

  Point site_location(SiteId s) const {
    return s == kPort ? port_location
                      : pdc_locations.at(static_cast<std::size_t>(s));
  }
};

inline FleetSnapshot snapshot(const Simulator& sim) {
  FleetSnapshot snap;
  for (const auto& r : sim.district().regions) {
    snap.pdc_locations.push_back(r.pdc_location);
  }
  snap.port_location = sim.district().port_location;
  const double meters_per_slot = sim.district().speed_kph * 1000.0 / 60.0;
  for (const auto& u : sim.uavs()) {
    UavView v;
    v.id = u.id;
    v.home = u.home;
    v.position = sim.site_location(u.home);
    if (std::holds_alternative<status::Idle>(u.status)) {
      v.group = UavGroup::kIdle;
    } else if (const auto* s = std::get_if<status::Delivering>(&u.status)) {
      v.group = UavGroup::kDelivering;
      v.order_slot = s->mission_start_slot;
      v.position = s->destination;
      v.lead_m = static_cast<double>(std::max<std::int64_t>(
                     0, s->eta_slot - sim.now())) *
                 meters_per_slot;
    } else if (const auto* s = std::get_if<status::Returning>(&u.status)) {
      v.group = UavGroup::kReturning;
      v.order_slot = s->delivery_completed_slot;
    } else if (const auto* s = std::get_if<status::BatterySwap>(&u.status)) {
      v.group = UavGroup::kReturning;
      v.order_slot = s->delivery_completed_slot;
    } else {
      v.group = UavGroup::kRelocating;
    }
    snap.uavs.push_back(v);
  }
  return snap;
}

struct Donor {
  int uav = 0;
  SiteId source = kPort;
  UavGroup group = UavGroup::kIdle;
  Point position;
  double lead_m = 0.0;

  /// Flight distance to `target` if this UAV were sent there.
  double distance_to(const Point& target) const {
    return lead_m + distance(position, target);
  }
};

using DonorSet = std::vector<Donor>;

namespace detail {

inline Donor to_donor(const UavView& v) {
  return Donor{v.id, v.home, v.group, v.position, v.lead_m};
}

/// Appends up to `want` UAVs of `site`: idle by id, then returning with the
/// most recent completion, then delivering with the earliest start.
inline int take_from_site(const FleetSnapshot& snap, SiteId site, int want,
                          DonorSet& out) {
  std::vector<const UavView*> idle, returning, delivering;
  for (const auto& v : snap.uavs) {
    if (v.home != site) continue;
    switch (v.group) {
      case UavGroup::kIdle: idle.push_back(&v); break;
      case UavGroup::kReturning: returning.push_back(&v); break;
      case UavGroup::kDelivering: delivering.push_back(&v); break;
      case UavGroup::kRelocating: break;
    }
  }
  std::sort(idle.begin(), idle.end(),
            [](const UavView* a, const UavView* b) { return a->id < b->id; });
  std::sort(returning.begin(), returning.end(),
            [](const UavView* a, const UavView* b) {
              if (a->order_slot != b->order_slot) {
                return a->order_slot > b->order_slot;
              }
              return a->id < b->id;
            });
  std::sort(delivering.begin(), delivering.end(),
            [](const UavView* a, const UavView* b) {
              if (a->order_slot != b->order_slot) {
                return a->order_slot < b->order_slot;
              }
              return a->id < b->id;
            });
  int taken = 0;
  for (const auto* group : {&idle, &returning, &delivering}) {
    for (const UavView* v : *group) {
      if (taken == want) return taken;
      out.push_back(to_donor(*v));
      ++taken;
    }
  }
  return taken;
}

}  // namespace detail

/// UAVs released this epoch: shedding PDCs in index order, then port UAVs
/// when the net request is positive.
inline DonorSet form_donor_set(const FleetSnapshot& snap,
                               const std::vector<int>& requests) {
  DonorSet donors;
  int net = 0;
  for (std::size_t d = 0; d < requests.size(); ++d) {
    net += requests[d];
    if (requests[d] < 0) {
      detail::take_from_site(snap, static_cast<SiteId>(d), -requests[d], donors);
    }
  }
  if (net > 0) detail::take_from_site(snap, kPort, net, donors);
  return donors;
}

/// Serves requesting PDCs in uniformly random order, each taking its
/// nearest donors (ties by UAV id). Donors left over go to the port.
inline std::vector<Move> assign_donors(const FleetSnapshot& snap,
                                       DonorSet donors,
                                       const std::vector<int>& requests,
                                       Rng& rng) {
  std::vector<std::size_t> needy;
  for (std::size_t d = 0; d < requests.size(); ++d) {
    if (requests[d] > 0) needy.push_back(d);
  }
  std::vector<Move> moves;
  while (!needy.empty() && !donors.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, needy.size() - 1);
    const std::size_t slot = pick(rng);
    const std::size_t d = needy[slot];
    const Point target = snap.pdc_locations.at(d);

    std::stable_sort(donors.begin(), donors.end(),
                     [&target](const Donor& a, const Donor& b) {
                       const double da = a.distance_to(target);
                       const double db = b.distance_to(target);
                       if (da != db) return da < db;
                       return a.uav < b.uav;
                     });
    const std::size_t take =
        std::min(static_cast<std::size_t>(requests[d]), donors.size());
    for (std::size_t k = 0; k < take; ++k) {
      moves.push_back(Move{donors[k].uav, static_cast<SiteId>(d)});
    }
    donors.erase(donors.begin(), donors.begin() + static_cast<long>(take));
    needy.erase(needy.begin() + static_cast<long>(slot));
  }
  for (const auto& left : donors) moves.push_back(Move{left.uav, kPort});
  return moves;
}

inline std::vector<Move> schedule(const FleetSnapshot& snap,
                                  const std::vector<int>& requests, Rng& rng) {
  return assign_donors(snap, form_donor_set(snap, requests), requests, rng);
}

}  // namespace dronefleet
