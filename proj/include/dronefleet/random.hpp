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

namespace dronefleet {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds from one
// experiment seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return Rng(mix_seed(mix_seed(seed) ^ mix_seed(stream_id + 0x51ed2701ULL)));
}

// Stream ids; arrivals and agents add the PDC index.
namespace stream {
constexpr std::uint64_t kDestinations = 1;
constexpr std::uint64_t kScheduler = 2;
constexpr std::uint64_t kArrivals = 100;
constexpr std::uint64_t kAgentInit = 200;
constexpr std::uint64_t kAgentExplore = 300;
constexpr std::uint64_t kAgentReplay = 400;
}  // namespace stream

}  // namespace dronefleet
