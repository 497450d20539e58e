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

#include "dronefleet/metrics.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "dronefleet/config.hpp"
#include "dronefleet/experiment.hpp"

namespace dronefleet {
namespace {

Package waited(std::int64_t arrival, std::int64_t dispatch) {
  Package p;
  p.arrival_slot = arrival;
  p.dispatch_slot = dispatch;
  return p;
}

RunTrace toy_trace() {
  RunTrace trace;
  SlotRecord a;
  a.queue = {1, 3};
  a.owned = {5, 5};
  a.dispatched = {waited(10, 12)};
  SlotRecord b;
  b.queue = {2, 5};
  b.owned = {6, 4};
  b.dispatched = {waited(10, 14), waited(3, 9)};
  SlotRecord c;
  c.queue = {0, 4};
  c.owned = {7, 4};
  c.dispatched = {waited(1, 50)};
  trace.record(a, 2);
  trace.record(b, 2);
  trace.record(c, 2);
  return trace;
}

TEST(Metrics, ViolationProbability) {
  const std::vector<int> q = {0, 120, 130, 40};
  EXPECT_DOUBLE_EQ(violation_probability(q, 100), 0.5);
  const std::vector<int> low = {1, 2, 3};
  EXPECT_EQ(violation_probability(low, 100), 0.0);
  const std::vector<int> at = {100, 100};
  EXPECT_EQ(violation_probability(at, 100), 1.0);
  EXPECT_THROW(violation_probability(std::vector<int>{}, 100), std::invalid_argument);
  std::vector<int> perm = {120, 40, 0, 130};
  EXPECT_EQ(violation_probability(perm, 100), violation_probability(q, 100));
}

TEST(Metrics, PackageWait) {
  EXPECT_EQ(waited(10, 25).wait(), 15);
}

TEST(Metrics, ToyTrace) {
  const RunTrace trace = toy_trace();
  // The package that arrived at slot 1 precedes the wait cutoff.
  ASSERT_EQ(trace.waits, (std::vector<double>{2, 4, 6}));
  const std::vector<double> q_ub = {2, 4};
  const MetricsReport r = summarize(trace, q_ub);
  // Pooled queues {1, 3, 2, 5, 0, 4}: mean 2.5, squared deviations sum 17.5.
  EXPECT_EQ(r.q_mean, 2.5);
  EXPECT_EQ(r.sigma_q, std::sqrt(17.5 / 6.0));
  // Waits {2, 4, 6}: mean 4, squared deviations sum 8.
  EXPECT_EQ(r.w_mean, 4.0);
  EXPECT_EQ(r.sigma_w, std::sqrt(8.0 / 3.0));
  // Owned totals per slot 10, 10, 11.
  EXPECT_EQ(r.n_mean, 31.0 / 3.0);
  EXPECT_EQ(r.violation, (std::vector<double>{1.0 / 3.0, 2.0 / 3.0}));
  EXPECT_EQ(r.p_max, 2.0 / 3.0);
  EXPECT_EQ(r.final_queue, (std::vector<int>{0, 4}));
  EXPECT_EQ(r.horizon, 3);
  EXPECT_EQ(r.packages, 3u);
}

TEST(Metrics, CsvLayout) {
  const MetricsReport r = summarize(toy_trace(), std::vector<double>{2, 4});
  std::ostringstream os;
  write_report_csv_header(os, 2);
  write_report_csv_row(os, "static", "bernoulli", 7, r);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  EXPECT_EQ(header,
            "algorithm,pattern,seed,p_max,q_mean,w_mean,sigma_w,sigma_q,n_mean,"
            "violation0,violation1,horizon");
  EXPECT_EQ(std::count(row.begin(), row.end(), ','),
            std::count(header.begin(), header.end(), ','));
  EXPECT_EQ(row.rfind("static,bernoulli,7,", 0), 0u);
}

TEST(Metrics, RejectsBadInput) {
  EXPECT_THROW(summarize(RunTrace{}, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(summarize(toy_trace(), std::vector<double>{1}), std::invalid_argument);
}

TEST(Metrics, StaticRunOwnsTheApportionedTotal) {
  auto cfg = load_config(DRONEFLEET_SOURCE_DIR "/configs/bernoulli.json");
  cfg.horizon = 3000;
  cfg.warmup = 100;
  StaticController ctrl;
  const MetricsReport r = evaluate(cfg, ctrl, 3);
  EXPECT_EQ(r.n_mean, 60.0);
  EXPECT_EQ(r.horizon, 3000);
  EXPECT_EQ(r.p_max, *std::max_element(r.violation.begin(), r.violation.end()));
  const nlohmann::json j = r;
  EXPECT_EQ(j.at("n_mean").get<double>(), 60.0);
}

}  // namespace
}  // namespace dronefleet
