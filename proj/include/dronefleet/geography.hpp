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
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dronefleet/random.hpp"

namespace dronefleet {

/// Planar position in meters (x east, y north).
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct SubRegion {
  Point min;
  Point max;
  double population_weight = 0.0;

  bool contains(const Point& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

struct Region {
  Point pdc_location;
  std::vector<SubRegion> subregions;
};

struct District {
  std::vector<Region> regions;
  Point port_location;
  int total_uavs = 0;
  double speed_kph = 18.0;

  std::size_t num_pdcs() const { return regions.size(); }
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Flight time rounded up to whole one-minute slots.
inline std::int64_t travel_time_slots(const Point& a, const Point& b,
                                      double speed_kph) {
  if (!(speed_kph > 0.0)) {
    throw std::invalid_argument("speed must be positive");
  }
  const double meters_per_slot = speed_kph * 1000.0 / 60.0;
  const double slots = distance(a, b) / meters_per_slot;
  // Guard against 10.000000000002 style rounding on exact multiples.
  const double nearest = std::round(slots);
  if (std::abs(slots - nearest) < 1e-9) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::ceil(slots));
}

inline void validate(const SubRegion& s) {
  if (!std::isfinite(s.min.x) || !std::isfinite(s.min.y) ||
      !std::isfinite(s.max.x) || !std::isfinite(s.max.y)) {
    throw std::invalid_argument("sub-region bounds must be finite");
  }
  if (!(s.max.x > s.min.x) || !(s.max.y > s.min.y)) {
    throw std::invalid_argument("sub-region must have positive area");
  }
  if (!(s.population_weight >= 0.0)) {
    throw std::invalid_argument("population weight must be nonnegative");
  }
}

inline void validate(const Region& r) {
  double total = 0.0;
  for (const auto& s : r.subregions) {
    validate(s);
    total += s.population_weight;
  }
  if (!(total > 0.0)) throw std::invalid_argument("degenerate region");
}

inline void validate(const District& d) {
  if (d.regions.empty()) throw std::invalid_argument("district has no regions");
  if (d.total_uavs < 1) throw std::invalid_argument("total_uavs must be >= 1");
  if (!(d.speed_kph > 0.0)) throw std::invalid_argument("speed_kph must be > 0");
  for (const auto& r : d.regions) validate(r);
}

/// Population-weighted sub-region choice, then a uniform point inside it.
inline Point sample_destination(const Region& region, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(region.subregions.size());
  double total = 0.0;
  for (const auto& s : region.subregions) {
    weights.push_back(s.population_weight);
    total += s.population_weight;
  }
  if (!(total > 0.0)) throw std::invalid_argument("degenerate region");

  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const SubRegion& s = region.subregions[pick(rng)];
  std::uniform_real_distribution<double> ux(s.min.x, s.max.x);
  std::uniform_real_distribution<double> uy(s.min.y, s.max.y);
  const double x = ux(rng);
  const double y = uy(rng);
  return Point{x, y};
}

/// Sum of sub-region weights for each region.
inline std::vector<double> population_weights(const District& d) {
  std::vector<double> out;
  for (const auto& r : d.regions) {
    double w = 0.0;
    for (const auto& s : r.subregions) w += s.population_weight;
    out.push_back(w);
  }
  return out;
}

// JSON: points are [x, y] arrays.

inline void to_json(nlohmann::json& j, const Point& p) {
  j = nlohmann::json::array({p.x, p.y});
}

inline void from_json(const nlohmann::json& j, Point& p) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("point must be [x, y]");
  }
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
}

inline void to_json(nlohmann::json& j, const SubRegion& s) {
  j = {{"min", s.min}, {"max", s.max}, {"weight", s.population_weight}};
}

inline void from_json(const nlohmann::json& j, SubRegion& s) {
  s.min = j.at("min").get<Point>();
  s.max = j.at("max").get<Point>();
  s.population_weight = j.at("weight").get<double>();
}

inline void to_json(nlohmann::json& j, const Region& r) {
  j = {{"pdc", r.pdc_location}, {"subregions", r.subregions}};
}

inline void from_json(const nlohmann::json& j, Region& r) {
  r.pdc_location = j.at("pdc").get<Point>();
  r.subregions = j.at("subregions").get<std::vector<SubRegion>>();
}

inline void to_json(nlohmann::json& j, const District& d) {
  j = {{"regions", d.regions},
       {"port", d.port_location},
       {"total_uavs", d.total_uavs},
       {"speed_kph", d.speed_kph}};
}

inline void from_json(const nlohmann::json& j, District& d) {
  d.regions = j.at("regions").get<std::vector<Region>>();
  d.port_location = j.at("port").get<Point>();
  d.total_uavs = j.at("total_uavs").get<int>();
  d.speed_kph = j.value("speed_kph", 18.0);
}

}  // namespace dronefleet
