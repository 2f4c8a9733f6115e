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

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "snakegait/core_types.hpp"
#include "snakegait/costs.hpp"
#include "snakegait/dynamics.hpp"
#include "snakegait/environments.hpp"
#include "snakegait/snake_ilqr.hpp"

namespace snakegait {

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MPCConfig {
  ILQRConfig ilqr;
  int apply_steps = 1;
  int total_steps = 600;
  Integrator eval_integrator = Integrator::RK4;
  // First-solve initial guess: a travelling torque wave
  // u_j(t) = torque sin(2 pi frequency t + phase j). Zero torque leaves the
  // straight pose at a stationary point of the planner.
  double cold_start_torque = 0.0;
  double cold_start_frequency = 6.0;
  double cold_start_phase = 1.0;

  void validate() const {
    ilqr.validate();
    if (apply_steps < 1 || apply_steps > ilqr.horizon) {
      throw std::invalid_argument("apply_steps must lie in [1, horizon]");
    }
    if (total_steps < 1) throw std::invalid_argument("total_steps must be >= 1");
    if (!(cold_start_torque >= 0.0) || !(cold_start_frequency >= 0.0) ||
        !std::isfinite(cold_start_phase)) {
      throw std::invalid_argument("cold start wave must be finite and nonnegative");
    }
  }
};

struct MPCRun {
  Trajectory trajectory;
  std::vector<double> solve_seconds;  // wall time of each horizon optimization
  std::vector<int> solve_iterations;
};

inline ControlVector cold_start_control(int step_index, const SnakeParams& params,
                                        const MPCConfig& config) {
  ControlVector u = ControlVector::zero(params.control_dim());
  const double t = step_index * params.dt;
  for (int j = 0; j < params.control_dim(); ++j) {
    u.torques[j] = config.cold_start_torque *
                   std::sin(2.0 * std::numbers::pi * config.cold_start_frequency * t +
                            config.cold_start_phase * j);
  }
  return u.clamped(params.torque_limit);
}

// Re-plans an N-step horizon from the current state with the planner model,
// executes the first apply_steps controls on the evaluation model, shifts the
// plan left as the next warm start (zero-padded) and repeats.
inline MPCRun run_mpc(const SnakeState& x0, const env::EnvironmentModel& env_plan,
                      const env::EnvironmentModel& env_eval,
                      const SnakeParams& params, const CostSpec& spec,
                      const MPCConfig& config) {
  config.validate();
  params.validate();
  spec.validate();
  env::validate(env_plan);
  env::validate(env_eval);

  const int horizon = config.ilqr.horizon;
  const int nu = params.control_dim();
  MPCRun run;
  run.trajectory.dt = params.dt;
  run.trajectory.states.reserve(static_cast<std::size_t>(config.total_steps) + 1);
  run.trajectory.controls.reserve(static_cast<std::size_t>(config.total_steps));
  run.trajectory.states.push_back(x0);

  std::vector<ControlVector> warm(static_cast<std::size_t>(horizon),
                                  ControlVector::zero(nu));
  for (int s = 0; s < horizon; ++s) {
    warm[static_cast<std::size_t>(s)] = cold_start_control(s, params, config);
  }
  SnakeState x = x0;
  int executed = 0;
  while (executed < config.total_steps) {
    const auto start = std::chrono::steady_clock::now();
    const ILQRResult plan = optimize(x, warm, env_plan, params, spec, config.ilqr);
    run.solve_seconds.push_back(std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - start)
                                    .count());
    run.solve_iterations.push_back(plan.iterations_used);

    const int m = std::min(config.apply_steps, config.total_steps - executed);
    for (int s = 0; s < m; ++s) {
      const ControlVector& u = plan.trajectory.controls[s];
      x = step(x, u, params.dt, env_eval, params, config.eval_integrator);
      if (!x.is_finite()) {
        std::ostringstream msg;
        msg << "non-finite state after step " << executed + 1 << " (t="
            << params.dt * (executed + 1) << " s)";
        throw NumericalFailure(msg.str());
      }
      run.trajectory.controls.push_back(u);
      run.trajectory.states.push_back(x);
      ++executed;
    }
    for (int s = 0; s < horizon; ++s) {
      warm[s] = s + m < horizon ? plan.trajectory.controls[s + m]
                                : ControlVector::zero(nu);
    }
  }
  return run;
}

// Integrates a fixed control sequence; used to replay executed trajectories.
inline Trajectory replay(const SnakeState& x0,
                         const std::vector<ControlVector>& controls,
                         const env::EnvironmentModel& model,
                         const SnakeParams& params, Integrator integrator) {
  Trajectory t;
  t.dt = params.dt;
  t.states.push_back(x0);
  for (const ControlVector& u : controls) {
    t.states.push_back(step(t.states.back(), u, params.dt, model, params,
                            integrator));
    t.controls.push_back(u);
  }
  return t;
}

}  // namespace snakegait
