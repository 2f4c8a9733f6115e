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

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "snakegait/core_types.hpp"
#include "snakegait/costs.hpp"
#include "snakegait/dynamics.hpp"
#include "snakegait/environments.hpp"
#include "snakegait/ilqr.hpp"

namespace snakegait {

using ILQRConfig = ilqr::Config;

struct ILQRResult {
  Trajectory trajectory;
  std::vector<double> cost_history;
  bool converged = false;
  int iterations_used = 0;

  double cost() const { return cost_history.back(); }
};

// Central-difference gradient and Hessian of f over the leading `dims`
// coordinates of x; the remaining coordinates get zero derivatives.
template <class F>
void fd_gradient_hessian(F&& f, const Eigen::VectorXd& x, int dims, double h,
                         Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
  grad.setZero(x.size());
  hess.setZero(x.size(), x.size());
  const double f0 = f(x);
  Eigen::VectorXd y = x;
  std::vector<double> fp(dims), fm(dims);
  for (int i = 0; i < dims; ++i) {
    y[i] = x[i] + h;
    fp[i] = f(y);
    y[i] = x[i] - h;
    fm[i] = f(y);
    y[i] = x[i];
    grad[i] = (fp[i] - fm[i]) / (2.0 * h);
    hess(i, i) = (fp[i] - 2.0 * f0 + fm[i]) / (h * h);
  }
  for (int i = 0; i < dims; ++i) {
    for (int j = i + 1; j < dims; ++j) {
      auto eval = [&](double si, double sj) {
        y[i] = x[i] + si * h;
        y[j] = x[j] + sj * h;
        const double v = f(y);
        y[i] = x[i];
        y[j] = x[j];
        return v;
      };
      const double hij =
          (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) /
          (4.0 * h * h);
      hess(i, j) = hij;
      hess(j, i) = hij;
    }
  }
}

// The snake as an iLQR problem over flat state vectors. Goal and obstacle
// terms depend on the configuration only, so their derivatives are taken by
// finite differences over the head position (and the joint angles when
// obstacles are present); the effort term is differentiated exactly.
class SnakeProblem {
 public:
  SnakeProblem(SnakeParams params, env::EnvironmentModel model, CostSpec spec,
               Integrator integrator, double cost_fd_epsilon = 1e-4)
      : params_(std::move(params)),
        model_(std::move(model)),
        spec_(std::move(spec)),
        integrator_(integrator),
        cost_fd_epsilon_(cost_fd_epsilon) {}

  int state_dim() const { return params_.state_dim(); }
  int control_dim() const { return params_.control_dim(); }

  Eigen::VectorXd dynamics(const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u) const {
    return step_vector(x, ControlVector{u}, params_.dt, model_, params_,
                       integrator_);
  }

  double running_cost(const Eigen::VectorXd& x,
                      const Eigen::VectorXd& u) const {
    return state_cost(x) + spec_.beta * u.squaredNorm();
  }

  double final_cost(const Eigen::VectorXd& x) const { return state_cost(x); }

  Eigen::VectorXd clamp_control(const Eigen::VectorXd& u) const {
    const double lim = params_.torque_limit;
    return u.cwiseMax(-lim).cwiseMin(lim);
  }

  ilqr::CostExpansion running_cost_expansion(const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& u) const {
    ilqr::CostExpansion c = final_cost_expansion(x);
    c.lu = 2.0 * spec_.beta * u;
    c.luu = 2.0 * spec_.beta *
            Eigen::MatrixXd::Identity(control_dim(), control_dim());
    return c;
  }

  ilqr::CostExpansion final_cost_expansion(const Eigen::VectorXd& x) const {
    ilqr::CostExpansion c =
        ilqr::CostExpansion::zero(state_dim(), control_dim());
    const int dims =
        spec_.obstacles.empty() ? 2 : params_.n_links + 2;
    fd_gradient_hessian([this](const Eigen::VectorXd& y) { return state_cost(y); },
                        x, dims, cost_fd_epsilon_, c.lx, c.lxx);
    return c;
  }

  const SnakeParams& params() const { return params_; }
  const CostSpec& spec() const { return spec_; }

 private:
  double state_cost(const Eigen::VectorXd& x) const {
    const Vec2 head = x.head<2>();
    double c = goal_cost(head, spec_);
    if (!spec_.obstacles.empty()) {
      c += obstacle_cost(SnakeState::from_vector(x), params_, spec_);
    }
    return c;
  }

  SnakeParams params_;
  env::EnvironmentModel model_;
  CostSpec spec_;
  Integrator integrator_;
  double cost_fd_epsilon_;
};

inline ilqr::Linearization linearize_dynamics(const SnakeState& state,
                                              const ControlVector& u,
                                              const env::EnvironmentModel& model,
                                              const SnakeParams& params,
                                              double fd_epsilon,
                                              Integrator integrator) {
  const SnakeProblem problem(params, model, CostSpec{}, integrator);
  return ilqr::finite_difference_jacobians(
      [&problem](const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
        return problem.dynamics(x, v);
      },
      state.to_vector(), u.torques, fd_epsilon);
}

inline Trajectory to_trajectory(const ilqr::Rollout& r, double dt) {
  Trajectory t;
  t.dt = dt;
  t.states.reserve(r.states.size());
  for (const Eigen::VectorXd& x : r.states) {
    t.states.push_back(SnakeState::from_vector(x));
  }
  t.controls.reserve(r.controls.size());
  for (const Eigen::VectorXd& u : r.controls) t.controls.push_back({u});
  return t;
}

inline ILQRResult optimize(const SnakeState& x0,
                           const std::vector<ControlVector>& u_init,
                           const env::EnvironmentModel& model,
                           const SnakeParams& params, const CostSpec& spec,
                           const ILQRConfig& config) {
  const SnakeProblem problem(params, model, spec, config.integrator);
  std::vector<Eigen::VectorXd> u;
  u.reserve(u_init.size());
  for (const ControlVector& c : u_init) u.push_back(c.torques);
  ilqr::Result r = ilqr::optimize(problem, x0.to_vector(), u, config);
  ILQRResult out;
  out.trajectory = to_trajectory(r.best, params.dt);
  out.cost_history = std::move(r.cost_history);
  out.converged = r.converged;
  out.iterations_used = r.iterations_used;
  return out;
}

}  // namespace snakegait
