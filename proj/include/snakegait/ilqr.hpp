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
#include <concepts>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "snakegait/dynamics.hpp"
#include "snakegait/parallel.hpp"

// Iterative LQR over a generic discrete-time problem x' = f(x, u) with
// running cost l(x, u) and final cost l_f(x).
namespace snakegait::ilqr {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Config {
  int horizon = 25;
  int max_iterations = 30;
  double fd_epsilon = 1e-5;
  double reg_init = 1e-6;
  double reg_min = 1e-8;
  double reg_max = 1e10;
  double reg_scale = 10.0;
  std::vector<double> line_search_alphas = {1.0, 0.5, 0.25, 0.125, 0.0625,
                                            0.03125, 0.015625};
  double cost_tolerance = 1e-4;
  Integrator integrator = Integrator::Euler;
  int threads = 1;

  void validate() const {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (max_iterations < 1) {
      throw std::invalid_argument("max_iterations must be >= 1");
    }
    if (!(fd_epsilon > 0.0)) throw std::invalid_argument("fd_epsilon must be > 0");
    if (!(reg_min >= 0.0 && reg_min <= reg_init && reg_init <= reg_max)) {
      throw std::invalid_argument("need 0 <= reg_min <= reg_init <= reg_max");
    }
    if (!(reg_scale > 1.0)) throw std::invalid_argument("reg_scale must be > 1");
    if (line_search_alphas.empty()) {
      throw std::invalid_argument("line_search_alphas must not be empty");
    }
    for (double a : line_search_alphas) {
      if (!(a > 0.0 && a <= 1.0)) {
        throw std::invalid_argument("line search alphas must lie in (0, 1]");
      }
    }
    if (!(cost_tolerance >= 0.0)) {
      throw std::invalid_argument("cost_tolerance must be >= 0");
    }
  }
};

struct Linearization {
  MatrixXd a;  // d x'/d x
  MatrixXd b;  // d x'/d u
};

struct CostExpansion {
  VectorXd lx, lu;
  MatrixXd lxx, luu, lux;

  static CostExpansion zero(int nx, int nu) {
    return {VectorXd::Zero(nx), VectorXd::Zero(nu), MatrixXd::Zero(nx, nx),
            MatrixXd::Zero(nu, nu), MatrixXd::Zero(nu, nx)};
  }
};

template <class P>
concept Problem = requires(const P& p, const VectorXd& x, const VectorXd& u) {
  { p.state_dim() } -> std::convertible_to<int>;
  { p.control_dim() } -> std::convertible_to<int>;
  { p.dynamics(x, u) } -> std::convertible_to<VectorXd>;
  { p.running_cost(x, u) } -> std::convertible_to<double>;
  { p.final_cost(x) } -> std::convertible_to<double>;
  { p.clamp_control(u) } -> std::convertible_to<VectorXd>;
  { p.running_cost_expansion(x, u) } -> std::same_as<CostExpansion>;
  { p.final_cost_expansion(x) } -> std::same_as<CostExpansion>;
};

// Central-difference Jacobians of a one-step transition.
template <class Step>
Linearization finite_difference_jacobians(Step&& f, const VectorXd& x,
                                          const VectorXd& u, double eps) {
  const VectorXd fx = f(x, u);
  Linearization lin{MatrixXd(fx.size(), x.size()),
                    MatrixXd(fx.size(), u.size())};
  VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + eps;
    const VectorXd plus = f(xp, u);
    xp[i] = x[i] - eps;
    const VectorXd minus = f(xp, u);
    xp[i] = x[i];
    lin.a.col(i) = (plus - minus) / (2.0 * eps);
  }
  VectorXd up = u;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    up[j] = u[j] + eps;
    const VectorXd plus = f(x, up);
    up[j] = u[j] - eps;
    const VectorXd minus = f(x, up);
    up[j] = u[j];
    lin.b.col(j) = (plus - minus) / (2.0 * eps);
  }
  return lin;
}

// Affine control law du = k + K dx per step, with the predicted cost change
// dV(alpha) = alpha * dv_linear + alpha^2 / 2 * dv_quadratic.
struct Policy {
  std::vector<VectorXd> k;
  std::vector<MatrixXd> gain;
  double dv_linear = 0.0;
  double dv_quadratic = 0.0;

  double expected_decrease(double alpha) const {
    return -(alpha * dv_linear + 0.5 * alpha * alpha * dv_quadratic);
  }
};

// Riccati-style recursion. `cost` holds one expansion per step followed by
// the final-cost expansion. Returns nullopt when a regularized control
// Hessian is not positive definite.
inline std::optional<Policy> backward_pass(
    const std::vector<Linearization>& dyn,
    const std::vector<CostExpansion>& cost, double reg) {
  const std::size_t horizon = dyn.size();
  if (cost.size() != horizon + 1) {
    throw std::invalid_argument("backward_pass needs horizon+1 cost terms");
  }
  Policy policy;
  policy.k.resize(horizon);
  policy.gain.resize(horizon);
  VectorXd vx = cost.back().lx;
  MatrixXd vxx = cost.back().lxx;
  for (std::size_t s = horizon; s-- > 0;) {
    const Linearization& d = dyn[s];
    const CostExpansion& c = cost[s];
    const VectorXd qx = c.lx + d.a.transpose() * vx;
    const VectorXd qu = c.lu + d.b.transpose() * vx;
    const MatrixXd vxx_a = vxx * d.a;
    const MatrixXd qxx = c.lxx + d.a.transpose() * vxx_a;
    const MatrixXd quu = c.luu + d.b.transpose() * vxx * d.b;
    const MatrixXd qux = c.lux + d.b.transpose() * vxx_a;

    MatrixXd quu_reg = quu;
    quu_reg.diagonal().array() += reg;
    const Eigen::LLT<MatrixXd> llt(quu_reg);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const VectorXd k = -llt.solve(qu);
    const MatrixXd gain = -llt.solve(qux);

    policy.dv_linear += k.dot(qu);
    policy.dv_quadratic += k.dot(quu * k);

    vx = qx + gain.transpose() * quu * k + gain.transpose() * qu +
         qux.transpose() * k;
    vxx = qxx + gain.transpose() * quu * gain + gain.transpose() * qux +
          qux.transpose() * gain;
    vxx = 0.5 * (vxx + vxx.transpose()).eval();
    policy.k[s] = k;
    policy.gain[s] = gain;
  }
  return policy;
}

struct Rollout {
  std::vector<VectorXd> states;
  std::vector<VectorXd> controls;
  double cost = std::numeric_limits<double>::infinity();
};

// Rolls out clamped controls. A rollout that leaves the finite range keeps
// its full length, repeats the last state, and has cost +inf.
template <Problem P>
Rollout rollout(const P& problem, const VectorXd& x0,
                const std::vector<VectorXd>& controls) {
  Rollout r;
  r.states.reserve(controls.size() + 1);
  r.controls.reserve(controls.size());
  r.states.push_back(x0);
  double total = 0.0;
  bool finite = true;
  for (const VectorXd& u : controls) {
    const VectorXd uc = problem.clamp_control(u);
    r.controls.push_back(uc);
    if (!finite) {
      r.states.push_back(r.states.back());
      continue;
    }
    total += problem.running_cost(r.states.back(), uc);
    r.states.push_back(problem.dynamics(r.states.back(), uc));
    finite = r.states.back().allFinite();
  }
  if (finite) r.cost = total + problem.final_cost(r.states.back());
  return r;
}

// Rolls the nonlinear problem forward under u = u_bar + alpha k + K (x - x_bar)
// with clamped controls. A rollout that leaves the finite range has cost +inf.
template <Problem P>
Rollout forward_pass(const P& problem, const Rollout& nominal,
                     const Policy& policy, double alpha) {
  const std::size_t horizon = nominal.controls.size();
  Rollout r;
  r.states.reserve(horizon + 1);
  r.controls.reserve(horizon);
  r.states.push_back(nominal.states.front());
  double total = 0.0;
  for (std::size_t s = 0; s < horizon; ++s) {
    const VectorXd& x = r.states.back();
    const VectorXd u = problem.clamp_control(
        nominal.controls[s] + alpha * policy.k[s] +
        policy.gain[s] * (x - nominal.states[s]));
    total += problem.running_cost(x, u);
    r.controls.push_back(u);
    r.states.push_back(problem.dynamics(x, u));
    if (!r.states.back().allFinite()) return r;  // cost stays +inf
  }
  r.cost = total + problem.final_cost(r.states.back());
  return r;
}

template <Problem P>
std::vector<Linearization> linearize_trajectory(const P& problem,
                                                const Rollout& nominal,
                                                double eps, int threads) {
  std::vector<Linearization> out(nominal.controls.size());
  auto step = [&problem](const VectorXd& x, const VectorXd& u) {
    return VectorXd(problem.dynamics(x, u));
  };
  parallel_for(static_cast<int>(out.size()), threads, [&](int s) {
    out[s] = finite_difference_jacobians(step, nominal.states[s],
                                         nominal.controls[s], eps);
  });
  return out;
}

template <Problem P>
std::vector<CostExpansion> expand_costs(const P& problem,
                                        const Rollout& nominal, int threads) {
  const int horizon = static_cast<int>(nominal.controls.size());
  std::vector<CostExpansion> out(static_cast<std::size_t>(horizon) + 1);
  parallel_for(horizon + 1, threads, [&](int s) {
    out[s] = s < horizon ? problem.running_cost_expansion(nominal.states[s],
                                                          nominal.controls[s])
                         : problem.final_cost_expansion(nominal.states[s]);
  });
  return out;
}

struct Result {
  Rollout best;
  std::vector<double> cost_history;  // initial rollout, then each accepted step
  bool converged = false;
  int iterations_used = 0;
};

template <Problem P>
Result optimize(const P& problem, const VectorXd& x0,
                const std::vector<VectorXd>& u_init, const Config& config) {
  config.validate();
  if (static_cast<int>(u_init.size()) != config.horizon) {
    throw std::invalid_argument("u_init length must equal the horizon");
  }
  Result result;
  result.best = rollout(problem, x0, u_init);
  result.cost_history.push_back(result.best.cost);
  if (!std::isfinite(result.best.cost)) return result;

  double reg = config.reg_init;
  std::vector<Linearization> dyn;
  std::vector<CostExpansion> cost;
  bool stale = true;
  while (result.iterations_used < config.max_iterations) {
    ++result.iterations_used;
    if (stale) {
      dyn = linearize_trajectory(problem, result.best, config.fd_epsilon,
                                 config.threads);
      cost = expand_costs(problem, result.best, config.threads);
      stale = false;
    }
    std::optional<Policy> policy = backward_pass(dyn, cost, reg);
    while (!policy) {
      reg *= config.reg_scale;
      if (reg > config.reg_max) return result;
      policy = backward_pass(dyn, cost, reg);
    }
    const double current = result.best.cost;
    if (policy->expected_decrease(1.0) <=
        config.cost_tolerance * std::abs(current)) {
      result.converged = true;
      return result;
    }
    bool accepted = false;
    for (double alpha : config.line_search_alphas) {
      Rollout candidate = forward_pass(problem, result.best, *policy, alpha);
      if (candidate.cost < current) {
        result.best = std::move(candidate);
        result.cost_history.push_back(result.best.cost);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      reg *= config.reg_scale;
      if (reg > config.reg_max) return result;
      continue;
    }
    stale = true;
    reg = std::max(config.reg_min, reg / config.reg_scale);
    const double improvement = (current - result.best.cost) /
                               std::max(std::abs(current), 1e-300);
    if (improvement < config.cost_tolerance) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace snakegait::ilqr
