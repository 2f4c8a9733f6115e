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

#include <vector>

#include <Eigen/Dense>

#include "snakegait/ilqr.hpp"

// Linear dynamics with quadratic costs, expanded exactly. Satisfies the
// iLQR problem concept.
struct LinearQuadratic {
  Eigen::MatrixXd a, b, q, r, qf;
  double limit = 1e300;

  int state_dim() const { return static_cast<int>(a.rows()); }
  int control_dim() const { return static_cast<int>(b.cols()); }
  Eigen::VectorXd dynamics(const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u) const {
    return a * x + b * u;
  }
  double running_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return x.dot(q * x) + u.dot(r * u);
  }
  double final_cost(const Eigen::VectorXd& x) const { return x.dot(qf * x); }
  Eigen::VectorXd clamp_control(const Eigen::VectorXd& u) const {
    return u.cwiseMax(-limit).cwiseMin(limit);
  }
  snakegait::ilqr::CostExpansion running_cost_expansion(
      const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return {2.0 * q * x, 2.0 * r * u, 2.0 * q, 2.0 * r,
            Eigen::MatrixXd::Zero(control_dim(), state_dim())};
  }
  snakegait::ilqr::CostExpansion final_cost_expansion(
      const Eigen::VectorXd& x) const {
    auto c = snakegait::ilqr::CostExpansion::zero(state_dim(), control_dim());
    c.lx = 2.0 * qf * x;
    c.lxx = 2.0 * qf;
    return c;
  }
};

// Double integrator with step dt: position/velocity state, force control.
inline LinearQuadratic double_integrator(double dt = 0.1) {
  LinearQuadratic p;
  p.a = Eigen::MatrixXd{{1.0, dt}, {0.0, 1.0}};
  p.b = Eigen::MatrixXd{{0.5 * dt * dt}, {dt}};
  p.q = Eigen::MatrixXd{{1.0, 0.0}, {0.0, 0.1}};
  p.r = Eigen::MatrixXd{{0.01}};
  p.qf = Eigen::MatrixXd{{10.0, 0.0}, {0.0, 1.0}};
  return p;
}
