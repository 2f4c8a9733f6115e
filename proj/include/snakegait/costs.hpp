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
#include <limits>
#include <stdexcept>
#include <vector>

#include "snakegait/core_types.hpp"

namespace snakegait {

struct Obstacle {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

struct CostSpec {
  Vec2 goal{-20.0, 0.0};
  double alpha = 1.0;
  double beta = 0.01;
  std::vector<Obstacle> obstacles;
  double obstacle_amplitude = 1.0;
  double obstacle_steepness = 50.0;  // 1/m
  double goal_smoothing_eps = 1e-6;  // m

  void validate() const {
    if (!goal.allFinite()) throw std::invalid_argument("goal must be finite");
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !(obstacle_amplitude >= 0.0)) {
      throw std::invalid_argument(
          "alpha, beta and obstacle_amplitude must be >= 0");
    }
    if (!(obstacle_steepness > 0.0) || !(goal_smoothing_eps > 0.0)) {
      throw std::invalid_argument(
          "obstacle_steepness and goal_smoothing_eps must be > 0");
    }
    for (const Obstacle& o : obstacles) {
      if (!(o.radius >= 0.0) || !o.center.allFinite()) {
        throw std::invalid_argument("obstacle radius must be >= 0");
      }
    }
  }
};

// Distance from the obstacle's center to the link segment minus the radius;
// negative when the segment cuts into the disc.
inline double segment_obstacle_distance(const LinkFrame& link,
                                        const SnakeParams& params,
                                        const Obstacle& obs) {
  const Vec2 a = link.proximal;
  const Vec2 ab = link.distal(params.link_length) - a;
  const double t =
      std::clamp((obs.center - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - obs.center).norm() - obs.radius;
}

// Logistic barrier summed over every (obstacle, link) pair.
inline double obstacle_cost(const SnakeState& state, const SnakeParams& params,
                            const CostSpec& spec) {
  if (spec.obstacles.empty()) return 0.0;
  double total = 0.0;
  for (const LinkFrame& link : forward_kinematics(state, params)) {
    for (const Obstacle& obs : spec.obstacles) {
      const double d = segment_obstacle_distance(link, params, obs);
      total += spec.obstacle_amplitude /
               (1.0 + std::exp(2.0 * spec.obstacle_steepness * d));
    }
  }
  return total;
}

// Smallest signed link/obstacle distance; +inf without obstacles.
inline double min_obstacle_distance(const SnakeState& state,
                                    const SnakeParams& params,
                                    const std::vector<Obstacle>& obstacles) {
  double best = std::numeric_limits<double>::infinity();
  for (const LinkFrame& link : forward_kinematics(state, params)) {
    for (const Obstacle& obs : obstacles) {
      best = std::min(best, segment_obstacle_distance(link, params, obs));
    }
  }
  return best;
}

inline double goal_cost(const Vec2& head, const CostSpec& spec) {
  const double eps = spec.goal_smoothing_eps;
  return spec.alpha * std::sqrt((spec.goal - head).squaredNorm() + eps * eps);
}

inline double effort_cost(const ControlVector& u, const CostSpec& spec) {
  return spec.beta * u.torques.squaredNorm();
}

inline double final_cost(const SnakeState& state, const SnakeParams& params,
                         const CostSpec& spec) {
  return goal_cost(state.head_pos, spec) + obstacle_cost(state, params, spec);
}

inline double running_cost(const SnakeState& state, const ControlVector& u,
                           const SnakeParams& params, const CostSpec& spec) {
  return final_cost(state, params, spec) + effort_cost(u, spec);
}

}  // namespace snakegait
