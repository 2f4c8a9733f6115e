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

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "snakegait/core_types.hpp"

namespace snakegait {

enum class PowerMode {
  Absolute,  // mean of sum_j |tau_j * qdot_j|, no credit for regeneration
  Signed,    // mean of sum_j tau_j * qdot_j
};

enum class SpeedMode { Head, CenterOfMass };

struct MetricOptions {
  PowerMode power = PowerMode::Absolute;
  SpeedMode speed = SpeedMode::Head;
};

struct GaitMetrics {
  double mean_speed = 0.0;  // m/s along the goal direction
  double mean_power = 0.0;  // W
  double window_start = 0.0;
  double window_end = 0.0;
};

struct JointSpectrum {
  std::vector<double> dominant_frequency;  // Hz, per joint
  std::vector<double> dominant_amplitude;  // rad, per joint
};

struct SampleWindow {
  std::size_t first = 0;  // state index at window_start
  std::size_t last = 0;   // state index at window_end
};

inline SampleWindow sample_window(const Trajectory& traj, double window_start,
                                  double window_end) {
  traj.validate();
  if (!(window_end > window_start) || window_start < 0.0) {
    throw std::invalid_argument("measurement window must satisfy 0 <= start < end");
  }
  const auto first = static_cast<long>(std::lround(window_start / traj.dt));
  const auto last = static_cast<long>(std::lround(window_end / traj.dt));
  if (last > static_cast<long>(traj.steps()) || first >= last) {
    throw std::invalid_argument("measurement window lies outside the trajectory");
  }
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

inline Vec2 center_of_mass(const SnakeState& s, const SnakeParams& p) {
  Vec2 c = Vec2::Zero();
  const auto frames = forward_kinematics(s, p);
  for (const LinkFrame& f : frames) c += f.com;
  return c / static_cast<double>(frames.size());
}

// Speed is the displacement over the window projected on goal_direction and
// divided by the window length. Power uses the joint-angle increment over
// each control interval, which is the interval-average joint rate.
inline GaitMetrics gait_metrics(const Trajectory& traj, double window_start,
                                double window_end, const Vec2& goal_direction,
                                const MetricOptions& options = {},
                                const SnakeParams& params = {}) {
  const SampleWindow w = sample_window(traj, window_start, window_end);
  const Vec2 dir = goal_direction.normalized();
  const double span = traj.dt * static_cast<double>(w.last - w.first);

  auto position = [&](std::size_t k) {
    return options.speed == SpeedMode::Head
               ? Vec2(traj.states[k].head_pos)
               : center_of_mass(traj.states[k], params);
  };
  GaitMetrics m;
  m.window_start = traj.time_at(w.first);
  m.window_end = traj.time_at(w.last);
  m.mean_speed = (position(w.last) - position(w.first)).dot(dir) / span;

  double energy = 0.0;
  for (std::size_t k = w.first; k < w.last; ++k) {
    const Eigen::VectorXd& tau = traj.controls[k].torques;
    const Eigen::VectorXd dq = traj.states[k + 1].angles.tail(tau.size()) -
                               traj.states[k].angles.tail(tau.size());
    const Eigen::ArrayXd work = tau.array() * dq.array();
    energy += options.power == PowerMode::Absolute ? work.abs().sum()
                                                   : work.sum();
  }
  m.mean_power = energy / span;
  return m;
}

// Rectangular-window DFT of each mean-removed joint angle. The dominant bin
// is the largest magnitude among the nonzero-frequency bins; its amplitude is
// reported as the equivalent single-sided sinusoid amplitude.
inline JointSpectrum joint_spectrum(const Trajectory& traj,
                                    double window_start, double window_end) {
  const SampleWindow w = sample_window(traj, window_start, window_end);
  const std::size_t m = w.last - w.first;
  const int joints = traj.states.front().n_links() - 1;
  JointSpectrum out;
  std::vector<double> signal(m);
  for (int j = 1; j <= joints; ++j) {
    double mean = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      signal[k] = traj.states[w.first + k].angles[j];
      mean += signal[k];
    }
    mean /= static_cast<double>(m);
    for (double& v : signal) v -= mean;

    double best_mag = 0.0;
    std::size_t best_bin = 1;
    for (std::size_t bin = 1; bin <= m / 2; ++bin) {
      std::complex<double> acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double phase = -2.0 * std::numbers::pi *
                             static_cast<double>((bin * k) % m) /
                             static_cast<double>(m);
        acc += signal[k] * std::polar(1.0, phase);
      }
      const double mag = std::abs(acc);
      if (mag > best_mag) {
        best_mag = mag;
        best_bin = bin;
      }
    }
    const double scale = (2 * best_bin == m) ? 1.0 : 2.0;
    out.dominant_frequency.push_back(static_cast<double>(best_bin) /
                                     (static_cast<double>(m) * traj.dt));
    out.dominant_amplitude.push_back(scale * best_mag / static_cast<double>(m));
  }
  return out;
}

}  // namespace snakegait
