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
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "dronefleet/random.hpp"

namespace dronefleet::rl {

/// Fully connected layer; weight is out x in, row-major.
struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  double& w(int row, int col) { return weight[static_cast<std::size_t>(row * in + col)]; }
  double w(int row, int col) const {
    return weight[static_cast<std::size_t>(row * in + col)];
  }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Network parameters; gradients and optimizer moments use the same layout.
using Parameters = std::vector<DenseLayer>;

inline Parameters zeros_like(const Parameters& p) {
  Parameters out = p;
  for (auto& l : out) {
    std::fill(l.weight.begin(), l.weight.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
  return out;
}

inline bool same_shape(const Parameters& a, const Parameters& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].in != b[i].in || a[i].out != b[i].out ||
        a[i].weight.size() != b[i].weight.size() ||
        a[i].bias.size() != b[i].bias.size()) {
      return false;
    }
  }
  return true;
}

inline std::size_t parameter_count(const Parameters& p) {
  std::size_t n = 0;
  for (const auto& l : p) n += l.weight.size() + l.bias.size();
  return n;
}

/// Visits every scalar parameter in a fixed order (weights then bias, per
/// layer).
template <typename P, typename F>
void for_each_parameter(P& params, F&& f) {
  for (auto& l : params) {
    for (auto& x : l.weight) f(x);
    for (auto& x : l.bias) f(x);
  }
}

/// ReLU multilayer perceptron with a linear output layer.
class Mlp {
 public:
  Mlp() = default;

  /// All-zero parameters.
  explicit Mlp(const std::vector<int>& sizes) {
    if (sizes.size() < 2) throw std::invalid_argument("need at least two layer sizes");
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
      if (sizes[i] < 1 || sizes[i + 1] < 1) {
        throw std::invalid_argument("layer sizes must be positive");
      }
      DenseLayer l;
      l.in = sizes[i];
      l.out = sizes[i + 1];
      l.weight.assign(static_cast<std::size_t>(l.in * l.out), 0.0);
      l.bias.assign(static_cast<std::size_t>(l.out), 0.0);
      layers_.push_back(std::move(l));
    }
  }

  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static Mlp glorot_uniform(const std::vector<int>& sizes, Rng& rng) {
    Mlp net(sizes);
    for (auto& l : net.layers_) {
      const double limit = std::sqrt(6.0 / static_cast<double>(l.in + l.out));
      std::uniform_real_distribution<double> u(-limit, limit);
      for (auto& w : l.weight) w = u(rng);
    }
    return net;
  }

  explicit Mlp(Parameters layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("network has no layers");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const auto& l = layers_[i];
      if (l.weight.size() != static_cast<std::size_t>(l.in * l.out) ||
          l.bias.size() != static_cast<std::size_t>(l.out)) {
        throw std::invalid_argument("layer parameter shape mismatch");
      }
      if (i > 0 && layers_[i - 1].out != l.in) {
        throw std::invalid_argument("consecutive layer sizes do not chain");
      }
    }
  }

  std::vector<int> sizes() const {
    std::vector<int> s;
    if (layers_.empty()) return s;
    s.push_back(layers_.front().in);
    for (const auto& l : layers_) s.push_back(l.out);
    return s;
  }

  int input_size() const { return layers_.front().in; }
  int output_size() const { return layers_.back().out; }

  Parameters& parameters() { return layers_; }
  const Parameters& parameters() const { return layers_; }

  std::vector<double> forward(std::span<const double> x) const {
    std::vector<double> a(x.begin(), x.end());
    check_input(a.size());
    std::vector<double> z;
    for (std::size_t li = 0; li < layers_.size(); ++li) {
      affine(layers_[li], a, z);
      if (li + 1 < layers_.size()) relu(z);
      a.swap(z);
    }
    return a;
  }

  /// Adds scale * d/dtheta (target - Q(x)[action])^2 into `grads` and
  /// returns Q(x)[action]. The other outputs do not enter the loss.
  double accumulate_gradient(std::span<const double> x, int action,
                             double target, double scale,
                             Parameters& grads) const {
    check_input(x.size());
    if (action < 0 || action >= output_size()) {
      throw std::out_of_range("action index out of range");
    }
    if (!same_shape(grads, layers_)) {
      throw std::invalid_argument("gradient shape mismatch");
    }
    const std::size_t depth = layers_.size();
    // acts[i] is the input to layer i; acts[depth] is the output.
    std::vector<std::vector<double>> acts(depth + 1);
    acts[0].assign(x.begin(), x.end());
    for (std::size_t li = 0; li < depth; ++li) {
      affine(layers_[li], acts[li], acts[li + 1]);
      if (li + 1 < depth) relu(acts[li + 1]);
    }
    const double q = acts[depth][static_cast<std::size_t>(action)];

    std::vector<double> delta(static_cast<std::size_t>(output_size()), 0.0);
    delta[static_cast<std::size_t>(action)] = 2.0 * (q - target) * scale;
    for (std::size_t li = depth; li-- > 0;) {
      const DenseLayer& l = layers_[li];
      DenseLayer& g = grads[li];
      const auto& input = acts[li];
      for (int r = 0; r < l.out; ++r) {
        const double dr = delta[static_cast<std::size_t>(r)];
        if (dr == 0.0) continue;
        g.bias[static_cast<std::size_t>(r)] += dr;
        double* grow = &g.weight[static_cast<std::size_t>(r * l.in)];
        for (int c = 0; c < l.in; ++c) grow[c] += dr * input[static_cast<std::size_t>(c)];
      }
      if (li == 0) break;
      std::vector<double> prev(static_cast<std::size_t>(l.in), 0.0);
      for (int r = 0; r < l.out; ++r) {
        const double dr = delta[static_cast<std::size_t>(r)];
        if (dr == 0.0) continue;
        const double* wrow = &l.weight[static_cast<std::size_t>(r * l.in)];
        for (int c = 0; c < l.in; ++c) prev[static_cast<std::size_t>(c)] += wrow[c] * dr;
      }
      // Hidden activations are post-ReLU, so a zero output means a flat unit.
      for (std::size_t c = 0; c < prev.size(); ++c) {
        if (!(input[c] > 0.0)) prev[c] = 0.0;
      }
      delta.swap(prev);
    }
    return q;
  }

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  void check_input(std::size_t n) const {
    if (layers_.empty()) throw std::logic_error("network has no layers");
    if (n != static_cast<std::size_t>(input_size())) {
      throw std::invalid_argument("input size mismatch");
    }
  }

  static void affine(const DenseLayer& l, const std::vector<double>& in,
                     std::vector<double>& out) {
    out.assign(l.bias.begin(), l.bias.end());
    for (int c = 0; c < l.in; ++c) {
      const double xc = in[static_cast<std::size_t>(c)];
      // Encoded states are mostly zeros.
      if (xc == 0.0) continue;
      for (int r = 0; r < l.out; ++r) {
        out[static_cast<std::size_t>(r)] += l.weight[static_cast<std::size_t>(r * l.in + c)] * xc;
      }
    }
  }

  static void relu(std::vector<double>& v) {
    for (auto& x : v) x = x > 0.0 ? x : 0.0;
  }

  Parameters layers_;
};

inline std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace dronefleet::rl
