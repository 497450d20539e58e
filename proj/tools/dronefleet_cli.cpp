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

// Command-line driver: train, eval, compare and sweep.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dronefleet/config.hpp"
#include "dronefleet/experiment.hpp"
#include "dronefleet/rl/checkpoint.hpp"
#include "dronefleet/rl/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dronefleet {
namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCheckpoint = 3;
constexpr const char* kOutRootEnv = "DRONEFLEET_OUT_ROOT";

struct CommonOptions {
  std::vector<std::string> configs;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::optional<std::int64_t> horizon;
  std::optional<int> episodes;
  std::string checkpoints;
  std::vector<std::string> algorithms;
  std::vector<int> n_uavs;
  std::string trace;
  unsigned jobs = 0;
};

void check_algorithms(const std::vector<std::string>& algorithms) {
  for (const auto& a : algorithms) {
    if (a != "static" && a != "threshold" && a != "ql" && a != "rl") {
      throw ConfigError("unknown controller '" + a + "'");
    }
  }
}

ExperimentConfig load(const std::string& path, const CommonOptions& o) {
  check_algorithms(o.algorithms);
  auto cfg = load_config(path);
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.episodes) cfg.train.episodes = *o.episodes;
  if (!o.n_uavs.empty()) cfg.sweep_uavs = o.n_uavs;
  cfg.validate();
  return cfg;
}

fs::path output_root(const ExperimentConfig& cfg, const CommonOptions& o) {
  if (!o.out.empty()) return o.out;
  if (const char* root = std::getenv(kOutRootEnv); root && *root) {
    return fs::path(root) / cfg.output_dir;
  }
  return cfg.output_dir;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_resolved(const fs::path& dir, ExperimentConfig cfg,
                    std::optional<std::uint64_t> seed = std::nullopt) {
  if (seed) cfg.seeds = {*seed};
  write_text(dir / "config.json", resolved_json(cfg).dump(2) + "\n");
}

// Runs fn(0..n-1) on up to `jobs` worker threads; rethrows the first error.
template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------- train

std::string curve_csv(const std::vector<rl::EpisodeStats>& curve, std::size_t num) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "episode,steps,average_reward,violation_max";
  for (std::size_t d = 0; d < num; ++d) os << ",violation" << d;
  os << ",mean_owned,epsilon,saturated\n";
  for (const auto& s : curve) {
    os << s.episode << ',' << s.steps << ',' << s.average_reward << ','
       << s.violation_max;
    for (double v : s.violation) os << ',' << v;
    os << ',' << s.mean_owned << ',' << s.epsilon << ',' << (s.saturated ? 1 : 0)
       << '\n';
  }
  return os.str();
}

void mean_stderr(const std::vector<double>& xs, double& mean, double& se) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  se = 0.0;
  if (xs.size() < 2) return;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / static_cast<double>(xs.size() - 1)) /
       std::sqrt(static_cast<double>(xs.size()));
}

std::string curve_summary_csv(const std::vector<std::vector<rl::EpisodeStats>>& curves) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "episode,seeds,average_reward_mean,average_reward_stderr,"
        "violation_max_mean,violation_max_stderr,mean_owned_mean,mean_owned_stderr\n";
  std::size_t episodes = 0;
  for (const auto& c : curves) episodes = std::max(episodes, c.size());
  for (std::size_t e = 0; e < episodes; ++e) {
    std::vector<double> reward, violation, owned;
    for (const auto& c : curves) {
      if (e >= c.size()) continue;
      reward.push_back(c[e].average_reward);
      violation.push_back(c[e].violation_max);
      owned.push_back(c[e].mean_owned);
    }
    os << e << ',' << reward.size();
    for (const auto* xs : {&reward, &violation, &owned}) {
      double m, se;
      mean_stderr(*xs, m, se);
      os << ',' << m << ',' << se;
    }
    os << '\n';
  }
  return os.str();
}

int run_train(const CommonOptions& o) {
  const auto cfg = load(o.configs.front(), o);
  const fs::path root = output_root(cfg, o);
  const std::size_t num = cfg.district.num_pdcs();
  write_resolved(root, cfg);
  std::vector<std::vector<rl::EpisodeStats>> curves(cfg.seeds.size());
  std::mutex log_mu;
  parallel_for(cfg.seeds.size(), o.jobs, [&](std::size_t i) {
    const std::uint64_t seed = cfg.seeds[i];
    const fs::path dir = root / ("seed-" + std::to_string(seed));
    const auto result = rl::train(cfg, seed, [&](const rl::EpisodeStats& s) {
      if ((s.episode + 1) % 10 != 0) return;
      std::lock_guard<std::mutex> lock(log_mu);
      std::cerr << "seed " << seed << " episode " << s.episode + 1 << "/"
                << cfg.train.episodes << " reward " << s.average_reward
                << " violation " << s.violation_max << " owned " << s.mean_owned
                << "\n";
    });
    write_resolved(dir, cfg, seed);
    write_text(dir / "curve.csv", curve_csv(result.curve, num));
    json cfg_json = resolved_json(cfg);
    cfg_json["seeds"] = {seed};
    for (std::size_t d = 0; d < num; ++d) {
      rl::Checkpoint ck{result.agents[d].online(), result.agents[d].updates(), cfg_json};
      rl::save_checkpoint((dir / ("pdc-" + std::to_string(d) + ".json")).string(), ck);
    }
    curves[i] = result.curve;
  });
  write_text(root / "curve_summary.csv", curve_summary_csv(curves));
  std::cout << "trained " << cfg.seeds.size() << " seed(s) into " << root.string()
            << "\n";
  return 0;
}

// ----------------------------------------------------------------- eval

std::vector<rl::Mlp> load_policies(const fs::path& dir, std::size_t num) {
  std::vector<rl::Mlp> nets;
  for (std::size_t d = 0; d < num; ++d) {
    auto ck = rl::load_checkpoint((dir / ("pdc-" + std::to_string(d) + ".json")).string());
    const auto sizes = ck.network.sizes();
    if (sizes.front() != rl::kStateBits || sizes.back() != rl::kNumActions) {
      throw rl::CheckpointError("checkpoint for PDC " + std::to_string(d) +
                                " has the wrong input/output size");
    }
    nets.push_back(std::move(ck.network));
  }
  return nets;
}

fs::path checkpoint_dir(const ExperimentConfig& cfg, const CommonOptions& o,
                        const fs::path& root) {
  if (!o.checkpoints.empty()) return o.checkpoints;
  if (!cfg.checkpoint_dir.empty()) return cfg.checkpoint_dir;
  return root / ("seed-" + std::to_string(cfg.seeds.front()));
}

struct Row {
  std::string algorithm;
  std::string pattern;
  std::uint64_t seed = 0;
  int n_uavs = 0;
  MetricsReport report;
};

// Evaluates every (algorithm, seed) pair for one config.
std::vector<Row> evaluate_grid(const ExperimentConfig& cfg,
                               const std::vector<std::string>& algorithms,
                               const std::vector<rl::Mlp>& policies, unsigned jobs,
                               const std::string& trace_path = {}) {
  std::vector<Row> rows;
  for (const auto& a : algorithms) {
    for (auto s : cfg.seeds) rows.push_back({a, cfg.arrivals.type, s, cfg.district.total_uavs, {}});
  }
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    auto ctrl = make_controller(cfg, rows[i].algorithm, policies);
    if (i == 0 && !trace_path.empty()) {
      std::ofstream out(trace_path);
      if (!out) throw std::runtime_error("cannot write " + trace_path);
      write_trace_header(out, cfg.district.num_pdcs());
      rows[i].report = evaluate(cfg, *ctrl, rows[i].seed,
                                [&](const SlotRecord& r) { write_trace_row(out, r); });
    } else {
      rows[i].report = evaluate(cfg, *ctrl, rows[i].seed);
    }
  });
  return rows;
}

void write_reports(const fs::path& dir, const std::string& stem,
                   const std::vector<Row>& rows, bool with_n) {
  json j = json::array();
  std::ostringstream csv;
  csv << std::setprecision(10);
  const std::size_t num = rows.empty() ? 0 : rows.front().report.violation.size();
  if (with_n) csv << "n_uavs,";
  write_report_csv_header(csv, num);
  for (const auto& r : rows) {
    json e = r.report;
    e["algorithm"] = r.algorithm;
    e["pattern"] = r.pattern;
    e["seed"] = r.seed;
    e["n_uavs"] = r.n_uavs;
    j.push_back(std::move(e));
    if (with_n) csv << r.n_uavs << ',';
    write_report_csv_row(csv, r.algorithm, r.pattern, r.seed, r.report);
  }
  write_text(dir / (stem + ".json"), j.dump(2) + "\n");
  write_text(dir / (stem + ".csv"), csv.str());
}

void print_rows(const std::vector<Row>& rows) {
  std::cout << std::fixed << std::setprecision(3);
  for (const auto& r : rows) {
    std::cout << std::setw(9) << r.algorithm << ' ' << std::setw(9) << r.pattern
              << " N=" << r.n_uavs << " seed=" << r.seed << " p_max=" << r.report.p_max
              << " q=" << r.report.q_mean << " w=" << r.report.w_mean
              << " n=" << r.report.n_mean << "\n";
  }
}

int run_eval(const CommonOptions& o) {
  const auto cfg = load(o.configs.front(), o);
  const fs::path root = output_root(cfg, o);
  const std::string algo = o.algorithms.empty() ? cfg.controller : o.algorithms.front();
  std::vector<rl::Mlp> policies;
  if (algo == "rl") policies = load_policies(checkpoint_dir(cfg, o, root), cfg.district.num_pdcs());
  const auto rows = evaluate_grid(cfg, {algo}, policies, o.jobs, o.trace);
  write_resolved(root, cfg);
  write_reports(root, "report", rows, false);
  print_rows(rows);
  return 0;
}

int run_compare(const CommonOptions& o) {
  check_algorithms(o.algorithms);
  std::vector<std::string> algorithms = o.algorithms;
  if (algorithms.empty()) algorithms = {"static", "threshold", "ql", "rl"};
  std::vector<Row> all;
  std::optional<fs::path> root;
  for (const auto& path : o.configs) {
    const auto cfg = load(path, o);
    if (!root) root = output_root(cfg, o);
    std::vector<rl::Mlp> policies;
    if (std::find(algorithms.begin(), algorithms.end(), "rl") != algorithms.end()) {
      policies = load_policies(checkpoint_dir(cfg, o, output_root(cfg, o)),
                               cfg.district.num_pdcs());
    }
    const auto rows = evaluate_grid(cfg, algorithms, policies, o.jobs);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  write_reports(*root, "comparison", all, false);
  print_rows(all);
  return 0;
}

int run_sweep(const CommonOptions& o) {
  const auto cfg = load(o.configs.front(), o);
  const fs::path root = output_root(cfg, o);
  if (cfg.sweep_uavs.empty()) throw ConfigError("sweep needs sweep_uavs or --n-uavs");
  std::vector<std::string> algorithms = o.algorithms;
  if (algorithms.empty()) algorithms = {"static", "threshold", "ql"};
  std::vector<rl::Mlp> policies;
  if (std::find(algorithms.begin(), algorithms.end(), "rl") != algorithms.end()) {
    policies = load_policies(checkpoint_dir(cfg, o, root), cfg.district.num_pdcs());
  }
  std::vector<Row> all;
  for (int n : cfg.sweep_uavs) {
    auto c = cfg;
    c.district.total_uavs = n;
    c.initial_allocation.clear();
    c.validate();
    const auto rows = evaluate_grid(c, algorithms, policies, o.jobs);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  write_resolved(root, cfg);
  write_reports(root, "sweep", all, true);
  print_rows(all);
  return 0;
}

}  // namespace
}  // namespace dronefleet

int main(int argc, char** argv) {
  using namespace dronefleet;
  CLI::App app{"Dynamic UAV fleet allocation across parcel distribution centers"};
  app.require_subcommand(1);
  CommonOptions o;

  auto add_common = [&](CLI::App* sub, bool many_configs) {
    if (many_configs) {
      sub->add_option("--config", o.configs, "Experiment config(s), one per arrival pattern")
          ->required();
    } else {
      sub->add_option("--config", o.configs, "Experiment config")
          ->required()->expected(1);
    }
    sub->add_option("--seeds,--seed", o.seeds, "Seeds (overrides the config)")
        ->delimiter(',');
    sub->add_option("--out", o.out,
                    std::string("Output directory (default: $") + kOutRootEnv +
                        "/<output_dir> or <output_dir>)");
    sub->add_option("--horizon", o.horizon, "Evaluation horizon in slots");
    sub->add_option("--jobs", o.jobs, "Worker threads (default: hardware threads)");
  };

  auto* train = app.add_subcommand("train", "Train one DDQN agent per PDC");
  add_common(train, false);
  train->add_option("--episodes", o.episodes, "Training episodes (overrides the config)");

  auto* eval = app.add_subcommand("eval", "Evaluate one controller");
  add_common(eval, false);
  eval->add_option("--controller", o.algorithms, "static | threshold | ql | rl")
      ->expected(1);
  eval->add_option("--checkpoints", o.checkpoints, "Directory holding pdc-<d>.json");
  eval->add_option("--trace", o.trace, "Per-slot CSV trace of the first seed");

  auto* compare = app.add_subcommand("compare", "Evaluate several controllers");
  add_common(compare, true);
  compare->add_option("--algorithms", o.algorithms, "Controllers to compare")
      ->delimiter(',');
  compare->add_option("--checkpoints", o.checkpoints, "Directory holding pdc-<d>.json");

  auto* sweep = app.add_subcommand("sweep", "Evaluate controllers over fleet sizes");
  add_common(sweep, false);
  sweep->add_option("--n-uavs", o.n_uavs, "Fleet sizes (overrides sweep_uavs)")
      ->delimiter(',');
  sweep->add_option("--algorithms", o.algorithms, "Controllers to sweep")
      ->delimiter(',');
  sweep->add_option("--checkpoints", o.checkpoints, "Directory holding pdc-<d>.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train) return run_train(o);
    if (*eval) return run_eval(o);
    if (*compare) return run_compare(o);
    if (*sweep) return run_sweep(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rl::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return kExitCheckpoint;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
