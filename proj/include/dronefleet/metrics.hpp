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
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dronefleet/simcore.hpp"

namespace dronefleet {

/// Fraction of slots with q >= q_ub.
inline double violation_probability(std::span<const int> trace, double q_ub) {
  if (trace.empty()) throw std::invalid_argument("empty queue trace");
  const auto hits = std::count_if(trace.begin(), trace.end(),
                                  [q_ub](int q) { return q >= q_ub; });
  return static_cast<double>(hits) / static_cast<double>(trace.size());
}

/// Per-slot observations of a finished run (warm-up already removed).
struct RunTrace {
  std::vector<std::vector<int>> queue;  // [slot][pdc]
  std::vector<std::vector<int>> owned;  // [slot][pdc]
  std::vector<double> waits;            // queueing delay per dispatched package

  std::size_t num_pdcs() const { return queue.empty() ? 0 : queue.front().size(); }

  void record(const SlotRecord& r, std::int64_t count_waits_from) {
    queue.push_back(r.queue);
    owned.push_back(r.owned);
    for (const auto& p : r.dispatched) {
      if (p.arrival_slot >= count_waits_from) {
        waits.push_back(static_cast<double>(p.wait()));
      }
    }
  }
};

struct MetricsReport {
  std::vector<double> violation;  // per PDC, P(q_d >= q_ub)
  double p_max = 0.0;
  double q_mean = 0.0;
  double w_mean = 0.0;
  double sigma_q = 0.0;
  double sigma_w = 0.0;
  double n_mean = 0.0;  // time-average of UAVs owned by PDCs (port excluded)
  std::vector<int> final_queue;
  std::int64_t horizon = 0;
  std::size_t packages = 0;
};

namespace detail {
inline void mean_and_std(std::span<const double> xs, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(xs.size()));
}
}  // namespace detail

/// Pools queue samples over (slot, PDC) and waits over packages;
/// standard deviations are population (1/n) deviations.
inline MetricsReport summarize(const RunTrace& trace,
                               std::span<const double> q_ub) {
  const std::size_t slots = trace.queue.size();
  if (slots == 0) throw std::invalid_argument("empty run trace");
  const std::size_t num = trace.num_pdcs();
  if (q_ub.size() != num) throw std::invalid_argument("q_ub length mismatch");

  MetricsReport rep;
  rep.horizon = static_cast<std::int64_t>(slots);
  rep.violation.assign(num, 0.0);
  std::vector<double> pooled;
  pooled.reserve(slots * num);
  std::vector<int> per_pdc(slots);
  for (std::size_t d = 0; d < num; ++d) {
    for (std::size_t s = 0; s < slots; ++s) per_pdc[s] = trace.queue[s].at(d);
    rep.violation[d] = violation_probability(per_pdc, q_ub[d]);
  }
  for (const auto& row : trace.queue) {
    for (int q : row) pooled.push_back(q);
  }
  rep.p_max = *std::max_element(rep.violation.begin(), rep.violation.end());
  detail::mean_and_std(pooled, rep.q_mean, rep.sigma_q);
  detail::mean_and_std(trace.waits, rep.w_mean, rep.sigma_w);
  rep.packages = trace.waits.size();

  double owned_sum = 0.0;
  for (const auto& row : trace.owned) {
    for (int n : row) owned_sum += n;
  }
  rep.n_mean = owned_sum / static_cast<double>(slots);
  rep.final_queue = trace.queue.back();
  return rep;
}

inline void to_json(nlohmann::json& j, const MetricsReport& r) {
  j = {{"violation", r.violation}, {"p_max", r.p_max},
       {"q_mean", r.q_mean},       {"w_mean", r.w_mean},
       {"sigma_q", r.sigma_q},     {"sigma_w", r.sigma_w},
       {"n_mean", r.n_mean},       {"final_queue", r.final_queue},
       {"horizon", r.horizon},     {"packages", r.packages}};
}

/// Column order of the comparison table.
inline void write_report_csv_header(std::ostream& os, std::size_t num_pdcs) {
  os << "algorithm,pattern,seed,p_max,q_mean,w_mean,sigma_w,sigma_q,n_mean";
  for (std::size_t d = 0; d < num_pdcs; ++d) os << ",violation" << d;
  os << ",horizon\n";
}

inline void write_report_csv_row(std::ostream& os, const std::string& algorithm,
                                 const std::string& pattern, std::uint64_t seed,
                                 const MetricsReport& r) {
  os << algorithm << ',' << pattern << ',' << seed << ',' << r.p_max << ','
     << r.q_mean << ',' << r.w_mean << ',' << r.sigma_w << ',' << r.sigma_q
     << ',' << r.n_mean;
  for (double v : r.violation) os << ',' << v;
  os << ',' << r.horizon << '\n';
}

}  // namespace dronefleet
