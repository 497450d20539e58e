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

#include <array>
#include <atomic>
#include <cstdint>
#include <iostream>
#include <utility>

namespace dronefleet::rl {

constexpr int kQueueBits = 15;
constexpr int kFleetBits = 10;
constexpr int kStateBits = kQueueBits + kFleetBits;

/// Queue length bits then fleet-size bits, each least significant first.
using EncodedState = std::array<double, kStateBits>;

namespace detail {
inline std::atomic<std::uint64_t>& clamp_warnings() {
  static std::atomic<std::uint64_t> count{0};
  return count;
}

inline int clamp_bits(int value, int bits, const char* what) {
  const int max = (1 << bits) - 1;
  if (value < 0) value = 0;
  if (value > max) {
    if (clamp_warnings().fetch_add(1) == 0) {
      std::cerr << "warning: " << what << " " << value << " exceeds " << bits
                << "-bit state field; clamped to " << max << "\n";
    }
    return max;
  }
  return value;
}
}  // namespace detail

inline std::uint64_t encoder_clamp_count() {
  return detail::clamp_warnings().load();
}

inline EncodedState encode_state(int n, int q) {
  EncodedState x{};
  const int qc = detail::clamp_bits(q, kQueueBits, "queue length");
  const int nc = detail::clamp_bits(n, kFleetBits, "fleet size");
  for (int b = 0; b < kQueueBits; ++b) x[b] = (qc >> b) & 1;
  for (int b = 0; b < kFleetBits; ++b) x[kQueueBits + b] = (nc >> b) & 1;
  return x;
}

/// Inverse of encode_state for in-range values; returns (n, q).
inline std::pair<int, int> decode_state(const EncodedState& x) {
  int q = 0;
  int n = 0;
  for (int b = 0; b < kQueueBits; ++b) q |= (x[b] > 0.5 ? 1 : 0) << b;
  for (int b = 0; b < kFleetBits; ++b) n |= (x[kQueueBits + b] > 0.5 ? 1 : 0) << b;
  return {n, q};
}

}  // namespace dronefleet::rl
