// Copyright 2026 The snakegait Authors
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

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "csv_io.hpp"
#include "snakegait/analysis.hpp"
#include "snakegait/baseline.hpp"
#include "snakegait/mpc.hpp"
#include "snakegait/parallel.hpp"

namespace snakegait::cli {

enum ExitCode { kOk = 0, kConfigError = 1, kNumericalFailure = 2 };

struct CommonOptions {
  std::string config_path;
  std::string output_dir;
  std::string env;
  int threads = 0;
};

struct Context {
  ExperimentConfig config;
  std::filesystem::path out;
  int threads = 1;

  Json provenance() const { return to_json(config); }
};

inline Context resolve(const CommonOptions& o) {
  Context c;
  if (!o.config_path.empty()) c.config = load_config(o.config_path);
  if (!o.env.empty()) c.config.environment = env::from_name(o.env);
  if (!o.output_dir.empty()) c.config.output_dir = o.output_dir;
  c.threads = o.threads > 0 ? o.threads : default_thread_count();
  c.config.mpc.ilqr.threads = c.threads;
  c.config.validate();
  c.out = c.config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (ec) throw ConfigError("cannot create output directory '" + c.out.string() + "'");
  return c;
}

inline SnakeState start_state(const ExperimentConfig& c) {
  return SnakeState::at_rest(c.snake.n_links);
}

// Speed is measured toward the goal as seen from the start; a goal at the
// start falls back to the protocol's forward direction.
inline Vec2 goal_direction(const ExperimentConfig& c) {
  const Vec2 d = c.cost.goal - start_state(c).head_pos;
  return d.norm() > 0.0 ? Vec2(d.normalized()) : c.protocol.forward;
}

inline int cmd_simulate(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  Trajectory t;
  if (c.simulate.controller == "serpenoid") {
    auto r = rollout_serpenoid(c.simulate.serpenoid, c.environment, c.snake,
                               c.protocol.duration);
    if (!r) throw NumericalFailure("serpenoid rollout left the finite range");
    t = std::move(*r);
  } else {
    const auto steps = static_cast<std::size_t>(std::lround(c.protocol.duration / c.snake.dt));
    t = replay(start_state(c),
               std::vector<ControlVector>(steps, ControlVector::zero(c.snake.control_dim())),
               c.environment, c.snake, Integrator::RK4);
  }
  write_trajectory(ctx.out / "trajectory.csv", ctx.provenance(), t);
  std::cout << "wrote " << (ctx.out / "trajectory.csv").string() << " ("
            << t.states.size() << " states)\n";
  return kOk;
}

inline int cmd_mpc(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const MPCRun run = run_mpc(start_state(c), c.environment, c.environment, c.snake,
                             c.cost, c.mpc);
  const Trajectory& t = run.trajectory;
  const Json prov = ctx.provenance();
  write_trajectory(ctx.out / "trajectory.csv", prov, t);
  const std::string label = "mpc-" + std::string(env::name(c.environment));
  if (t.duration() > c.protocol.window_start) {
    const GaitMetrics m = gait_metrics(t, c.protocol.window_start, t.duration(),
                                       goal_direction(c), c.protocol.metrics, c.snake);
    write_metrics(ctx.out / "metrics.csv", prov, label, m);
    write_spectrum(ctx.out / "spectrum.csv", prov,
                   joint_spectrum(t, c.protocol.window_start, t.duration()));
    std::cout << label << ": speed " << fmt(m.mean_speed) << " m/s, power "
              << fmt(m.mean_power) << " W over [" << m.window_start << ", "
              << m.window_end << "] s\n";
  } else {
    std::cout << label << ": run shorter than the ramp-up window, no metrics\n";
  }
  return kOk;
}

inline int cmd_gridsearch(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const GridResult r = grid_search(c.grid, c.environment, c.snake, c.protocol, ctx.threads);
  const auto front = pareto_front(r.points);
  const Json prov = ctx.provenance();
  write_points(ctx.out / "points.csv", prov, r.points);
  write_points(ctx.out / "front.csv", prov, front);
  std::cout << c.grid.size() << " cells: " << r.points.size() << " points, "
            << r.backward << " backward, " << r.failures << " failed; front of "
            << front.size() << "\n";
  return kOk;
}

inline int cmd_analyze(const Context& ctx, const std::string& trajectory_path,
                       bool explicit_config) {
  LoadedTrajectory lt = read_trajectory(trajectory_path);
  ExperimentConfig c = ctx.config;
  if (!explicit_config && lt.config) {
    ExperimentConfig embedded = parse_config(*lt.config);
    c.protocol = embedded.protocol;
    c.cost = embedded.cost;
    c.snake = embedded.snake;
  }
  Json prov = to_json(c);
  prov["analyzed_file"] = std::filesystem::path(trajectory_path).filename().string();
  const Trajectory& t = lt.trajectory;
  const GaitMetrics m = gait_metrics(t, c.protocol.window_start, t.duration(),
                                     goal_direction(c), c.protocol.metrics, c.snake);
  write_metrics(ctx.out / "metrics.csv", prov, "analyzed", m);
  write_spectrum(ctx.out / "spectrum.csv", prov,
                 joint_spectrum(t, c.protocol.window_start, t.duration()));
  std::cout << "speed " << fmt(m.mean_speed) << " m/s, power " << fmt(m.mean_power)
            << " W\n";
  return kOk;
}

// Wall time of every horizon optimization over one full MPC run. Timing
// varies run to run, so this file is the one output that is not
// byte-reproducible.
inline int cmd_bench(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const MPCRun run = run_mpc(start_state(c), c.environment, c.environment, c.snake,
                             c.cost, c.mpc);
  const auto& s = run.solve_seconds;
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean);
  const double stddev = s.size() > 1 ? std::sqrt(var / (s.size() - 1)) : 0.0;
  CsvWriter w(ctx.out / "bench.csv", ctx.provenance(), {"solve", "seconds", "iterations"});
  for (std::size_t i = 0; i < s.size(); ++i) {
    w.row({std::to_string(i), fmt(s[i]), std::to_string(run.solve_iterations[i])});
  }
  std::cout << "environment " << env::name(c.environment) << ", horizon "
            << c.mpc.ilqr.horizon << ", " << s.size() << " optimizations, "
            << ctx.threads << " thread(s)\n"
            << "per-horizon wall time: mean " << mean << " s, std " << stddev << " s\n";
  return kOk;
}

inline void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "JSON experiment configuration");
  sub->add_option("--output", o.output_dir, "output directory (overrides config)");
  sub->add_option("--env", o.env, "environment (overrides config)")
      ->check(CLI::IsMember({"box", "dry", "viscous", "fluid"}));
  sub->add_option("--threads", o.threads,
                  std::string("worker threads (default: $") + kThreadsEnvVar +
                      " or hardware concurrency)")
      ->check(CLI::PositiveNumber);
}

inline int run(int argc, char** argv) {
  CLI::App app{"snakegait: snake gait synthesis with iLQR model predictive control"};
  app.require_subcommand(1);
  CommonOptions o;
  std::string trajectory_path;
  auto* simulate = app.add_subcommand("simulate", "roll out a serpenoid or zero-torque gait");
  auto* mpc = app.add_subcommand("mpc", "run receding-horizon gait synthesis");
  auto* grid = app.add_subcommand("gridsearch", "serpenoid grid search and Pareto front");
  auto* analyze = app.add_subcommand("analyze", "speed, power and joint spectrum of a trajectory");
  auto* bench = app.add_subcommand("bench", "time every horizon optimization of an MPC run");
  for (auto* s : {simulate, mpc, grid, analyze, bench}) add_common(s, o);
  analyze->add_option("trajectory", trajectory_path, "trajectory file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const Context ctx = resolve(o);
    if (simulate->parsed()) return cmd_simulate(ctx);
    if (mpc->parsed()) return cmd_mpc(ctx);
    if (grid->parsed()) return cmd_gridsearch(ctx);
    if (analyze->parsed()) return cmd_analyze(ctx, trajectory_path, !o.config_path.empty());
    return cmd_bench(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const SingularSystemError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace snakegait::cli
