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

// Runs the three heuristic baselines on a bundled scenario and prints one
// line per controller.
//
//   baseline_demo [config.json] [horizon]

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "dronefleet/config.hpp"
#include "dronefleet/experiment.hpp"

int main(int argc, char** argv) {
  const std::string path =
      argc > 1 ? argv[1] : DRONEFLEET_SOURCE_DIR "/configs/tvb.json";
  try {
    auto cfg = dronefleet::load_config(path);
    cfg.horizon = argc > 2 ? std::atoll(argv[2]) : 20000;
    std::cout << std::fixed << std::setprecision(3);
    for (const char* kind : {"static", "threshold", "ql"}) {
      auto ctrl = dronefleet::make_controller(cfg, kind);
      const auto r = dronefleet::evaluate(cfg, *ctrl, cfg.seeds.front());
      std::cout << std::setw(9) << kind << "  p_max " << r.p_max << "  q " << r.q_mean
                << "  w " << r.w_mean << "  n " << r.n_mean << "  violations";
      for (double v : r.violation) std::cout << ' ' << v;
      std::cout << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
