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

#include "dronefleet/scheduler.hpp"

#include <algorithm>
#include <map>

#include <gtest/gtest.h>

#include "scheduler_oracle.hpp"

namespace dronefleet {
namespace {

UavView view(int id, SiteId home, UavGroup group, std::int64_t order = 0) {
  UavView v;
  v.id = id;
  v.home = home;
  v.group = group;
  v.order_slot = order;
  return v;
}

FleetSnapshot two_pdc_snapshot() {
  FleetSnapshot s;
  s.pdc_locations = {{0, 0}, {10000, 0}};
  s.port_location = {5000, 0};
  return s;
}

TEST(Scheduler, NoRequestsNoDonors) {
  FleetSnapshot s = two_pdc_snapshot();
  for (int i = 0; i < 4; ++i) s.uavs.push_back(view(i, 0, UavGroup::kIdle));
  EXPECT_TRUE(form_donor_set(s, {0, 0}).empty());
  Rng rng(1);
  EXPECT_TRUE(schedule(s, {0, 0}, rng).empty());
}

TEST(Scheduler, DonorPriorityIdleReturningDelivering) {
  FleetSnapshot s = two_pdc_snapshot();
  s.uavs = {
      view(0, 0, UavGroup::kDelivering, 7), view(1, 0, UavGroup::kIdle),
      view(2, 0, UavGroup::kReturning, 3),  view(3, 0, UavGroup::kDelivering, 2),
      view(4, 0, UavGroup::kReturning, 9),  view(5, 0, UavGroup::kIdle),
      view(6, 0, UavGroup::kDelivering, 5),
  };
  const auto donors = form_donor_set(s, {-5, 0});
  ASSERT_EQ(donors.size(), 5u);
  // 2 idle by id, 2 returning most recent first, 1 delivering earliest start.
  EXPECT_EQ(donors[0].uav, 1);
  EXPECT_EQ(donors[1].uav, 5);
  EXPECT_EQ(donors[2].uav, 4);
  EXPECT_EQ(donors[3].uav, 2);
  EXPECT_EQ(donors[4].uav, 3);
  EXPECT_EQ(donors[4].group, UavGroup::kDelivering);
}

TEST(Scheduler, PortDonorsCappedByNetDemand) {
  FleetSnapshot s = two_pdc_snapshot();
  for (int i = 0; i < 3; ++i) s.uavs.push_back(view(i, kPort, UavGroup::kIdle));
  const auto donors = form_donor_set(s, {5, 0});
  EXPECT_EQ(donors.size(), 3u);
  for (int i = 0; i < 6; ++i) s.uavs.push_back(view(10 + i, kPort, UavGroup::kIdle));
  EXPECT_EQ(form_donor_set(s, {5, 0}).size(), 5u);
  // Net demand is zero: the shedding PDC's UAVs cover it, port untouched.
  s.uavs.push_back(view(30, 1, UavGroup::kIdle));
  EXPECT_EQ(form_donor_set(s, {1, -1}).size(), 1u);
}

TEST(Scheduler, RelocatingUavsAreNeverDonated) {
  FleetSnapshot s = two_pdc_snapshot();
  s.uavs = {view(0, 0, UavGroup::kRelocating), view(1, 0, UavGroup::kIdle)};
  const auto donors = form_donor_set(s, {-2, 0});
  ASSERT_EQ(donors.size(), 1u);
  EXPECT_EQ(donors[0].uav, 1);
}

TEST(Scheduler, NearestDonorsFirstRestToPort) {
  FleetSnapshot s;
  s.pdc_locations = {{0, 0}};
  s.port_location = {0, 0};
  DonorSet donors;
  donors.push_back(Donor{0, kPort, UavGroup::kIdle, {5000, 0}, 0});
  donors.push_back(Donor{1, kPort, UavGroup::kIdle, {2000, 0}, 0});
  donors.push_back(Donor{2, kPort, UavGroup::kIdle, {9000, 0}, 0});
  Rng rng(1);
  const auto moves = assign_donors(s, donors, {2}, rng);
  const auto m = testing::as_map(moves);
  EXPECT_EQ(m.at(1), 0);
  EXPECT_EQ(m.at(0), 0);
  EXPECT_EQ(m.at(2), kPort);
}

TEST(Scheduler, DeliveringDonorDistanceIncludesRemainingLeg) {
  FleetSnapshot s;
  s.pdc_locations = {{0, 0}};
  DonorSet donors;
  // At the destination 1 km away, but 3 km of flight left to get there.
  donors.push_back(Donor{0, 1, UavGroup::kDelivering, {1000, 0}, 3000});
  donors.push_back(Donor{1, 1, UavGroup::kIdle, {3500, 0}, 0});
  Rng rng(1);
  const auto moves = assign_donors(s, donors, {1}, rng);
  EXPECT_EQ(testing::as_map(moves).at(1), 0);
  EXPECT_EQ(testing::as_map(moves).at(0), kPort);
}

TEST(Scheduler, NoNeedyPdcsSendsAllToPort) {
  FleetSnapshot s = two_pdc_snapshot();
  for (int i = 0; i < 3; ++i) s.uavs.push_back(view(i, 0, UavGroup::kIdle));
  Rng rng(1);
  const auto moves = schedule(s, {-3, 0}, rng);
  ASSERT_EQ(moves.size(), 3u);
  for (const auto& m : moves) EXPECT_EQ(m.target, kPort);
}

TEST(Scheduler, SingleDonorSplitsFairly) {
  FleetSnapshot s;
  s.pdc_locations = {{0, 0}, {1000, 0}, {500, 5000}};
  s.port_location = {500, 0};
  s.uavs = {view(0, 2, UavGroup::kIdle)};
  s.uavs[0].position = s.pdc_locations[2];
  Rng rng(2024);
  const int trials = 10000;
  int first = 0;
  for (int k = 0; k < trials; ++k) {
    const auto moves = schedule(s, {5, 5, -5}, rng);
    ASSERT_EQ(moves.size(), 1u);
    ASSERT_NE(moves[0].target, kPort);
    first += moves[0].target == 0 ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(first) / trials, 0.5, 0.02);
}

TEST(Scheduler, StructuralInvariantsOnRandomInstances) {
  Rng gen(5);
  for (int k = 0; k < 2000; ++k) {
    const auto inst = testing::random_instance(gen);
    Rng rng(static_cast<std::uint64_t>(k));
    const auto donors = form_donor_set(inst.snap, inst.requests);
    const auto moves = assign_donors(inst.snap, donors, inst.requests, rng);
    EXPECT_LE(moves.size(), donors.size());
    std::map<int, int> seen;
    for (const auto& m : moves) ++seen[m.uav];
    for (const auto& [id, c] : seen) EXPECT_EQ(c, 1);
    EXPECT_EQ(seen.size(), donors.size());

    std::vector<int> received(4, 0);
    for (const auto& m : moves) {
      if (m.target != kPort) {
        ++received[static_cast<std::size_t>(m.target)];
        EXPECT_GT(inst.requests[static_cast<std::size_t>(m.target)], 0);
      }
    }
    for (std::size_t d = 0; d < 4; ++d) {
      EXPECT_LE(received[d], std::max(0, inst.requests[d]));
    }
    for (const auto& dn : donors) {
      if (dn.source != kPort) {
        EXPECT_LT(inst.requests[static_cast<std::size_t>(dn.source)], 0);
      }
    }
    // A returning UAV only leaves when its PDC had no idle UAV left.
    for (const auto& dn : donors) {
      if (dn.group == UavGroup::kIdle) continue;
      for (const auto& v : inst.snap.uavs) {
        if (v.home != dn.source || v.group != UavGroup::kIdle) continue;
        const bool donated = std::any_of(donors.begin(), donors.end(),
                                         [&](const Donor& x) { return x.uav == v.id; });
        EXPECT_TRUE(donated);
      }
    }
  }
}

TEST(Scheduler, MatchesReplayOracle) {
  Rng gen(17);
  for (int k = 0; k < 2000; ++k) {
    const auto inst = testing::random_instance(gen);
    Rng a(static_cast<std::uint64_t>(1000 + k));
    Rng b(static_cast<std::uint64_t>(1000 + k));
    EXPECT_EQ(testing::as_map(schedule(inst.snap, inst.requests, a)),
              testing::oracle_schedule(inst.snap, inst.requests, b))
        << "instance " << k;
  }
}

TEST(Scheduler, SnapshotFromSimulator) {
  District d;
  d.regions.push_back(Region{{0, 0}, {SubRegion{{-10, -10}, {10, 10}, 1.0}}});
  d.regions.push_back(Region{{3000, 0}, {SubRegion{{2990, -10}, {3010, 10}, 1.0}}});
  d.port_location = {0, 3000};
  d.total_uavs = 3;
  ArrivalConfig a;
  a.p = 0.0;
  a.batch_mean = {10, 10};
  a.batch_half_width = 5;
  Simulator sim(d, a, {2, 0}, 1);
  sim.inject_package(0, {3000, 0});
  sim.step();
  const auto snap = snapshot(sim);
  ASSERT_EQ(snap.uavs.size(), 3u);
  EXPECT_EQ(snap.uavs[0].group, UavGroup::kDelivering);
  EXPECT_EQ(snap.uavs[0].position, (Point{3000, 0}));
  // eta 10, now 1: 9 slots of 300 m left.
  EXPECT_DOUBLE_EQ(snap.uavs[0].lead_m, 2700.0);
  EXPECT_EQ(snap.uavs[1].group, UavGroup::kIdle);
  EXPECT_EQ(snap.uavs[2].home, kPort);
  EXPECT_EQ(snap.uavs[2].position, (Point{0, 3000}));
}

}  // namespace
}  // namespace dronefleet
