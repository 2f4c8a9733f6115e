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

#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

#include "snakegait/analysis.hpp"
#include "snakegait/baseline.hpp"
#include "snakegait/costs.hpp"
#include "snakegait/environments.hpp"
#include "snakegait/mpc.hpp"
#include "snakegait/parallel.hpp"

namespace snakegait {

// Scales the transverse coefficient of a model (c_t for viscous, mu_t for the
// dry laws). The fluid model has no single transverse coefficient.
inline env::EnvironmentModel scale_transverse(const env::EnvironmentModel& model,
                                              double factor) {
  return std::visit(
      [factor](auto m) -> env::EnvironmentModel {
        using M = decltype(m);
        if constexpr (std::is_same_v<M, env::Viscous>) {
          m.c_t *= factor;
        } else if constexpr (std::is_same_v<M, env::BoxDry> ||
                             std::is_same_v<M, env::SmoothDry>) {
          m.mu_t *= factor;
        } else {
          throw std::invalid_argument(
              "transverse perturbation is undefined for the fluid model");
        }
        return m;
      },
      model);
}

struct RobustnessRow {
  double delta = 0.0;            // relative planner error in the coefficient
  double speed = 0.0;            // m/s, evaluated on the nominal model
  double speed_reduction = 0.0;  // (nominal - perturbed) / nominal
};

// Plans with the coefficient scaled by (1 + delta) and executes on the nominal
// model. Speed uses the protocol window up to the end of the run. The nominal
// (delta = 0) run is shared by all rows; a still nominal run gives a
// non-finite reduction.
inline std::vector<RobustnessRow> robustness_experiment(
    const env::EnvironmentModel& base_env, const std::vector<double>& deltas,
    const CostSpec& spec, const MPCConfig& config, const SnakeParams& params,
    const EvaluationProtocol& protocol = {}, int threads = 1) {
  for (double d : deltas) {
    if (!(d > -1.0)) throw std::invalid_argument("delta must exceed -1");
  }
  const SnakeState x0 = SnakeState::at_rest(params.n_links);
  auto speed_of = [&](const env::EnvironmentModel& plan) {
    const MPCRun run = run_mpc(x0, plan, base_env, params, spec, config);
    return gait_metrics(run.trajectory, protocol.window_start,
                        run.trajectory.duration(), protocol.forward,
                        protocol.metrics, params)
        .mean_speed;
  };

  std::vector<double> speeds(deltas.size() + 1);
  parallel_for(static_cast<int>(speeds.size()), threads, [&](int i) {
    speeds[i] = i == 0 ? speed_of(base_env)
                       : speed_of(scale_transverse(base_env, 1.0 + deltas[i - 1]));
  });

  std::vector<RobustnessRow> rows;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    RobustnessRow r;
    r.delta = deltas[i];
    r.speed = speeds[i + 1];
    r.speed_reduction = (speeds[0] - r.speed) / speeds[0];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace snakegait
