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

#include "dronefleet/rl/adam.hpp"
#include "dronefleet/rl/network.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace dronefleet::rl {
namespace {

double loss(const Mlp& net, std::span<const double> x, int a, double y) {
  const double d = y - net.forward(x)[static_cast<std::size_t>(a)];
  return d * d;
}

TEST(Network, HandComputedForward) {
  Mlp net({2, 2, 1});
  auto& p = net.parameters();
  p[0].weight = {1.0, -1.0, 0.5, 0.5};
  p[0].bias = {0.0, -1.0};
  p[1].weight = {2.0, 3.0};
  p[1].bias = {0.25};
  // h = relu([1 - 2, 0.5 + 1 - 1]) = [0, 0.5]; y = 0 + 1.5 + 0.25.
  const std::vector<double> x = {1.0, 2.0};
  EXPECT_DOUBLE_EQ(net.forward(x)[0], 1.75);
  EXPECT_EQ(net.sizes(), (std::vector<int>{2, 2, 1}));
}

TEST(Network, RejectsBadShapes) {
  EXPECT_THROW(Mlp(std::vector<int>{3}), std::invalid_argument);
  Mlp net({2, 3});
  const std::vector<double> bad = {1.0};
  EXPECT_THROW(net.forward(bad), std::invalid_argument);
  Parameters p = net.parameters();
  p[0].bias.pop_back();
  EXPECT_THROW(Mlp{p}, std::invalid_argument);
}

TEST(Network, GlorotBounds) {
  Rng rng(11);
  const auto net = Mlp::glorot_uniform({25, 32, 32, 3}, rng);
  for (const auto& l : net.parameters()) {
    const double limit = std::sqrt(6.0 / (l.in + l.out));
    for (double w : l.weight) EXPECT_LE(std::abs(w), limit);
    for (double b : l.bias) EXPECT_EQ(b, 0.0);
  }
  EXPECT_EQ(parameter_count(net.parameters()),
            25u * 32 + 32 + 32 * 32 + 32 + 32 * 3 + 3);
}

TEST(Network, GradientMatchesFiniteDifference) {
  Rng rng(5);
  std::bernoulli_distribution bit(0.5);
  std::uniform_int_distribution<int> act(0, 2);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Mlp net = Mlp::glorot_uniform({25, 32, 32, 3}, rng);
    for_each_parameter(net.parameters(), [&](double& w) { w += 0.05 * noise(rng); });
    std::vector<double> x(25);
    for (auto& v : x) v = bit(rng) ? 1.0 : 0.0;
    const int a = act(rng);
    const double y = noise(rng);
    Parameters grads = zeros_like(net.parameters());
    net.accumulate_gradient(x, a, y, 1.0, grads);
    std::vector<double> analytic;
    for_each_parameter(grads, [&](double& g) { analytic.push_back(g); });
    std::size_t k = 0;
    const double h = 1e-5;
    for_each_parameter(net.parameters(), [&](double& w) {
      const double saved = w;
      w = saved + h;
      const double up = loss(net, x, a, y);
      w = saved - h;
      const double down = loss(net, x, a, y);
      w = saved;
      const double numeric = (up - down) / (2 * h);
      const double g = analytic[k++];
      EXPECT_NEAR(g, numeric, 1e-4 * std::max(1.0, std::abs(numeric)));
    });
  }
}

TEST(Network, GradientIsMaskedToAction) {
  Rng rng(9);
  Mlp net = Mlp::glorot_uniform({4, 5, 3}, rng);
  const std::vector<double> x = {1, 0, 1, 1};
  Parameters grads = zeros_like(net.parameters());
  net.accumulate_gradient(x, 1, 3.0, 1.0, grads);
  const auto& last = grads.back();
  for (int col = 0; col < last.in; ++col) {
    EXPECT_EQ(last.w(0, col), 0.0);
    EXPECT_EQ(last.w(2, col), 0.0);
  }
  EXPECT_EQ(last.bias[0], 0.0);
  EXPECT_EQ(last.bias[2], 0.0);
  EXPECT_NE(last.bias[1], 0.0);
}

TEST(Network, DeadReluPassesNoGradient) {
  Mlp net({2, 1, 1});
  auto& p = net.parameters();
  p[0].weight = {-1.0, -1.0};
  p[0].bias = {-0.5};
  p[1].weight = {1.0};
  const std::vector<double> x = {1.0, 1.0};
  Parameters grads = zeros_like(p);
  net.accumulate_gradient(x, 0, 5.0, 1.0, grads);
  EXPECT_EQ(grads[0].weight, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(grads[0].bias[0], 0.0);
  EXPECT_EQ(grads[1].weight[0], 0.0);
  EXPECT_DOUBLE_EQ(grads[1].bias[0], -10.0);
}

TEST(Network, ArgmaxTiesPickLowestIndex) {
  const std::vector<double> v = {1.0, 3.0, 3.0};
  EXPECT_EQ(argmax(v), 1u);
  const std::vector<double> flat = {0.0, 0.0, 0.0};
  EXPECT_EQ(argmax(flat), 0u);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Mlp net({1, 1});
  Parameters& p = net.parameters();
  p[0].weight = {1.0};
  p[0].bias = {0.0};
  Parameters g = zeros_like(p);
  g[0].weight = {0.3};
  g[0].bias = {-2.0};
  Adam adam(p, {0.01, 0.9, 0.999, 1e-8});
  adam.step(p, g);
  // Bias correction makes the first step lr * sign(g).
  EXPECT_NEAR(p[0].weight[0], 1.0 - 0.01, 1e-9);
  EXPECT_NEAR(p[0].bias[0], 0.01, 1e-9);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(Adam, MatchesReferenceSequence) {
  Mlp net({1, 1});
  Parameters& p = net.parameters();
  p[0].weight = {0.0};
  Adam adam(p);
  double m = 0, v = 0, w = 0;
  const double gs[] = {1.0, -0.5, 0.25, 2.0};
  for (int t = 1; t <= 4; ++t) {
    Parameters g = zeros_like(p);
    g[0].weight = {gs[t - 1]};
    adam.step(p, g);
    m = 0.9 * m + 0.1 * gs[t - 1];
    v = 0.999 * v + 0.001 * gs[t - 1] * gs[t - 1];
    const double mh = m / (1 - std::pow(0.9, t));
    const double vh = v / (1 - std::pow(0.999, t));
    w -= 0.001 * mh / (std::sqrt(vh) + 1e-8);
    EXPECT_NEAR(p[0].weight[0], w, 1e-15);
  }
}

TEST(Adam, RejectsShapeMismatch) {
  Mlp a({2, 2});
  Mlp b({2, 3});
  Adam adam(a.parameters());
  EXPECT_THROW(adam.step(a.parameters(), zeros_like(b.parameters())),
               std::invalid_argument);
}

}  // namespace
}  // namespace dronefleet::rl
