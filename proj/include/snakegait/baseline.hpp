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
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "snakegait/analysis.hpp"
#include "snakegait/core_types.hpp"
#include "snakegait/dynamics.hpp"
#include "snakegait/environments.hpp"
#include "snakegait/parallel.hpp"

namespace snakegait {

struct SerpenoidParams {
  double amplitude = 0.5 * std::numbers::pi;  // rad
  double frequency = 1.0;                     // Hz
  double phase_offset = std::numbers::pi;     // rad between neighbouring joints
  double bias = 0.0;                          // rad
  double kp = 1.0;                            // N*m/rad
  double kd = 0.1;                            // N*m*s/rad

  void validate() const {
    if (!(frequency > 0.0)) throw std::invalid_argument("frequency must be > 0");
    if (!(kp >= 0.0) || !(kd >= 0.0)) {
      throw std::invalid_argument("kp and kd must be >= 0");
    }
  }
};

// Cost parameters identifying an MPC-generated gait.
struct MpcCostParams {
  double alpha = 1.0;
  double beta = 0.01;
  Vec2 goal{-20.0, 0.0};
};

struct ParetoPoint {
  double speed = 0.0;
  double power = 0.0;
  std::variant<SerpenoidParams, MpcCostParams> params;
  std::string label;
};

// Desired angle of joint i (1-based).
inline double serpenoid_reference(double t, int joint, const SerpenoidParams& g) {
  return g.amplitude * std::sin(2.0 * std::numbers::pi * g.frequency * t +
                                (joint - 1) * g.phase_offset) +
         g.bias;
}

// PD tracking of the serpenoid reference with joint-rate damping.
inline ControlVector pd_torque(const SnakeState& state, double t,
                               const SerpenoidParams& g, double torque_limit) {
  const int joints = state.n_links() - 1;
  ControlVector u = ControlVector::zero(joints);
  for (int j = 1; j <= joints; ++j) {
    const double err = serpenoid_reference(t, j, g) - state.angles[j];
    u.torques[j - 1] = std::clamp(g.kp * err - g.kd * state.angle_rates[j],
                                  -torque_limit, torque_limit);
  }
  return u;
}

// RK4 rollout from the straight pose at rest with PD torques sampled every
// control period. Returns nullopt if the state leaves the finite range.
inline std::optional<Trajectory> rollout_serpenoid(
    const SerpenoidParams& g, const env::EnvironmentModel& model,
    const SnakeParams& p, double duration) {
  const auto steps = static_cast<std::size_t>(std::lround(duration / p.dt));
  Trajectory t;
  t.dt = p.dt;
  t.states.reserve(steps + 1);
  t.controls.reserve(steps);
  t.states.push_back(SnakeState::at_rest(p.n_links));
  try {
    for (std::size_t k = 0; k < steps; ++k) {
      const ControlVector u =
          pd_torque(t.states.back(), t.time_at(k), g, p.torque_limit);
      SnakeState next = step_rk4(t.states.back(), u, p.dt, model, p);
      if (!next.is_finite()) return std::nullopt;
      t.controls.push_back(u);
      t.states.push_back(std::move(next));
    }
  } catch (const SingularSystemError&) {
    return std::nullopt;
  }
  return t;
}

struct GridRange {
  double min = 0.0;
  double max = 0.0;
  double interval = 1.0;

  int count() const {
    return static_cast<int>(std::floor((max - min) / interval + 1e-9)) + 1;
  }
  double value(int i) const { return min + i * interval; }
  static GridRange fixed(double v) { return {v, v, 1.0}; }

  void validate(const char* what) const {
    if (!(min <= max) || !(interval > 0.0)) {
      throw std::invalid_argument(std::string("grid range '") + what +
                                  "' needs min <= max and interval > 0");
    }
  }
};

struct GridSpec {
  GridRange frequency{0.5, 10.0, 0.25};
  GridRange amplitude{0.1 * std::numbers::pi, 1.0 * std::numbers::pi,
                      0.1 * std::numbers::pi};
  GridRange phase_offset{0.5 * std::numbers::pi, 4.0 * std::numbers::pi,
                         0.1 * std::numbers::pi};
  GridRange kp{0.1, 3.0, 0.1};
  GridRange kd{0.05, 0.2, 0.01};
  double bias = 0.0;

  void validate() const {
    frequency.validate("frequency");
    amplitude.validate("amplitude");
    phase_offset.validate("phase_offset");
    kp.validate("kp");
    kd.validate("kd");
  }

  long long size() const {
    return 1LL * frequency.count() * amplitude.count() * phase_offset.count() *
           kp.count() * kd.count();
  }

  // Row-major over (frequency, amplitude, phase_offset, kp, kd).
  SerpenoidParams cell(long long index) const {
    SerpenoidParams g;
    g.bias = bias;
    g.kd = kd.value(static_cast<int>(index % kd.count()));
    index /= kd.count();
    g.kp = kp.value(static_cast<int>(index % kp.count()));
    index /= kp.count();
    g.phase_offset = phase_offset.value(static_cast<int>(index % phase_offset.count()));
    index /= phase_offset.count();
    g.amplitude = amplitude.value(static_cast<int>(index % amplitude.count()));
    index /= amplitude.count();
    g.frequency = frequency.value(static_cast<int>(index));
    return g;
  }
};

struct EvaluationProtocol {
  double duration = 6.0;      // s
  double window_start = 2.0;  // s, ramp-up excluded before this
  Vec2 forward{-1.0, 0.0};    // initial heading of the straight pose
  MetricOptions metrics;
};

struct GridResult {
  std::vector<ParetoPoint> points;  // in grid order
  int failures = 0;                 // blown-up rollouts
  int backward = 0;                 // finite rollouts with negative speed
};

// Evaluates every grid cell. Cells are independent and scheduled on a shared
// counter; results keep grid order regardless of scheduling.
inline GridResult grid_search(const GridSpec& grid,
                              const env::EnvironmentModel& model,
                              const SnakeParams& p,
                              const EvaluationProtocol& protocol = {},
                              int threads = 1) {
  grid.validate();
  const long long n = grid.size();
  std::vector<std::optional<GaitMetrics>> metrics(static_cast<std::size_t>(n));
  parallel_for(static_cast<int>(n), threads, [&](int i) {
    const SerpenoidParams g = grid.cell(i);
    if (auto traj = rollout_serpenoid(g, model, p, protocol.duration)) {
      metrics[i] = gait_metrics(*traj, protocol.window_start,
                                protocol.duration, protocol.forward,
                                protocol.metrics, p);
    }
  });
  GridResult out;
  for (long long i = 0; i < n; ++i) {
    const auto& m = metrics[static_cast<std::size_t>(i)];
    if (!m || !std::isfinite(m->mean_speed) || !std::isfinite(m->mean_power)) {
      ++out.failures;
    } else if (m->mean_speed < 0.0) {
      ++out.backward;
    } else {
      out.points.push_back({m->mean_speed, std::abs(m->mean_power),
                            grid.cell(i), "serpenoid"});
    }
  }
  return out;
}

inline bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.speed >= b.speed && a.power <= b.power &&
         (a.speed > b.speed || a.power < b.power);
}

// Points not dominated under (maximize speed, minimize power), sorted by
// speed. Exact (speed, power) duplicates keep the first in input order.
inline std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Fastest first; among equal speeds lowest power first, then input order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].speed != points[b].speed) return points[a].speed > points[b].speed;
    return points[a].power < points[b].power;
  });
  std::vector<ParetoPoint> front;
  double best_power = std::numeric_limits<double>::infinity();
  for (std::size_t idx : order) {
    const ParetoPoint& pt = points[idx];
    if (pt.power < best_power) {
      front.push_back(pt);
      best_power = pt.power;
    }
  }
  std::reverse(front.begin(), front.end());
  return front;
}

// Front power at `speed` by linear interpolation along the sorted front.
// Below the slowest member the slowest member's power applies; above the
// fastest member the front has no gait and nullopt is returned.
inline std::optional<double> front_power_at(const std::vector<ParetoPoint>& front,
                                            double speed) {
  if (front.empty() || speed > front.back().speed) return std::nullopt;
  if (speed <= front.front().speed) return front.front().power;
  for (std::size_t i = 1; i < front.size(); ++i) {
    if (speed <= front[i].speed) {
      const ParetoPoint& a = front[i - 1];
      const ParetoPoint& b = front[i];
      const double t = (speed - a.speed) / (b.speed - a.speed);
      return a.power + t * (b.power - a.power);
    }
  }
  return front.back().power;
}

}  // namespace snakegait
