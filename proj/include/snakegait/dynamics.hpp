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
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "snakegait/core_types.hpp"
#include "snakegait/environments.hpp"

namespace snakegait {

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Integrator { Euler, RK4 };

struct DynamicsSolution {
  // Acceleration of each link's proximal joint, in that link's axes.
  std::vector<AxialVector> joint_linear_acc;
  // World angular acceleration of each link.
  Eigen::VectorXd angular_acc;
  // Relative angular acceleration of joints 1..n-1.
  Eigen::VectorXd rel_angular_acc;
  // Force exerted by link j-1 on link j at joint j, in link j's axes. The
  // head and tail ends are free and carry no entry.
  std::vector<AxialVector> internal_forces;
  Vec2 head_acc_world = Vec2::Zero();
};

namespace detail {

// Frame components are stored as (transverse, longitudinal) = (local x,
// local y) inside the assembly.
inline Vec2 xy(const AxialVector& v) { return {v.transverse, v.longitudinal}; }
inline AxialVector axial(const Vec2& v) { return {v.y(), v.x()}; }

inline Eigen::Matrix2d rot(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

// Forces that do not depend on the unknowns: reaction forces evaluated from
// the current velocities plus optional in-plane gravity, in link axes.
inline std::vector<Vec2> applied_forces(const std::vector<LinkFrame>& frames,
                                        const env::EnvironmentModel& model,
                                        const SnakeParams& p,
                                        const AxialVector& mass) {
  std::vector<Vec2> out(frames.size());
  const bool gravity = env::in_plane_gravity(model);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    Vec2 f = xy(env::reaction_force(model, frames[i].com_vel_local, p));
    if (gravity) {
      const AxialVector g =
          world_to_local(Vec2(0.0, -p.gravity), frames[i].angle);
      f += Vec2(mass.transverse * g.transverse,
                mass.longitudinal * g.longitudinal);
    }
    out[i] = f;
  }
  return out;
}

inline double joint_torque(const ControlVector& u, int link) {
  return (link >= 1 && link - 1 < u.torques.size()) ? u.torques[link - 1]
                                                    : 0.0;
}

inline double joint_rate(const SnakeState& s, int link) {
  return (link >= 1 && link < s.n_links()) ? s.angle_rates[link] : 0.0;
}

}  // namespace detail

// Solves the per-link force balance, per-link moment balance, and the joint
// acceleration constraints for the accelerations and joint forces. Unknowns
// are ordered [a_0..a_{n-1} | wdot_0..wdot_{n-1} | qdd_1..qdd_{n-1} |
// h_1..h_{n-1}], giving a square system of size 6n-3.
inline DynamicsSolution solve_accelerations(const SnakeState& state,
                                            const ControlVector& u,
                                            const env::EnvironmentModel& model,
                                            const SnakeParams& p) {
  const int n = state.n_links();
  if (u.torques.size() != n - 1) {
    throw std::invalid_argument("control dimension does not match n_links-1");
  }
  const double l = p.link_length;
  const double half = 0.5 * l;
  const double inertia = p.link_inertia();
  const double mu_v = p.joint_viscous_coeff;

  const std::vector<LinkFrame> frames = forward_kinematics(state, p);
  const AxialVector mass = env::link_mass_diagonal(model, p);
  const Vec2 m_xy = detail::xy(mass);
  const std::vector<Vec2> forces =
      detail::applied_forces(frames, model, p, mass);

  const int dim = 6 * n - 3;
  auto ia = [](int i) { return 2 * i; };
  auto iw = [n](int i) { return 2 * n + i; };
  auto iq = [n](int j) { return 3 * n + j - 1; };
  auto ih = [n](int j) { return 4 * n - 1 + 2 * (j - 1); };

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);

  int row = 0;
  // Force balance: M a_c = h_i - R(q_{i+1}) h_{i+1} + f_i.
  for (int i = 0; i < n; ++i, row += 2) {
    const double w = frames[i].angular_rate;
    for (int c = 0; c < 2; ++c) {
      a(row + c, ia(i) + c) += m_xy[c];
      if (i >= 1) a(row + c, ih(i) + c) -= 1.0;
    }
    a(row, iw(i)) -= m_xy.x() * half;
    if (i + 1 < n) {
      const Eigen::Matrix2d r = detail::rot(state.angles[i + 1]);
      a.block<2, 2>(row, ih(i + 1)) += r;
    }
    b.segment<2>(row) = forces[i];
    b(row + 1) += half * w * w * m_xy.y();
  }
  // Moment balance about each center of mass.
  for (int i = 0; i < n; ++i, ++row) {
    a(row, iw(i)) = inertia;
    if (i >= 1) a(row, ih(i)) -= half;
    if (i + 1 < n) {
      const Eigen::Matrix2d r = detail::rot(state.angles[i + 1]);
      a(row, ih(i + 1)) -= half * r(0, 0);
      a(row, ih(i + 1) + 1) -= half * r(0, 1);
    }
    b(row) = detail::joint_torque(u, i) - detail::joint_torque(u, i + 1) -
             mu_v * detail::joint_rate(state, i) +
             mu_v * detail::joint_rate(state, i + 1);
  }
  // Angular acceleration chaining.
  for (int j = 1; j < n; ++j, ++row) {
    a(row, iw(j)) = 1.0;
    a(row, iw(j - 1)) = -1.0;
    a(row, iq(j)) = -1.0;
  }
  // Linear acceleration chaining: the proximal joint of link j is the distal
  // end of link j-1.
  for (int j = 1; j < n; ++j, row += 2) {
    const Eigen::Matrix2d r = detail::rot(-state.angles[j]);
    const double w = frames[j - 1].angular_rate;
    a(row, ia(j)) = 1.0;
    a(row + 1, ia(j) + 1) = 1.0;
    a.block<2, 2>(row, ia(j - 1)) -= r;
    a(row, iw(j - 1)) += l * r(0, 0);
    a(row + 1, iw(j - 1)) += l * r(1, 0);
    b.segment<2>(row) = -l * w * w * r.col(1);
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > 1e-12)) {
    throw SingularSystemError("dynamics system is singular (min pivot " +
                              std::to_string(min_pivot) + ")");
  }
  const Eigen::VectorXd z = lu.solve(b);

  DynamicsSolution sol;
  sol.joint_linear_acc.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    sol.joint_linear_acc[i] = detail::axial(z.segment<2>(ia(i)));
  }
  sol.angular_acc = z.segment(iw(0), n);
  sol.rel_angular_acc = z.segment(3 * n, n - 1);
  sol.internal_forces.resize(static_cast<std::size_t>(n - 1));
  for (int j = 1; j < n; ++j) {
    sol.internal_forces[j - 1] = detail::axial(z.segment<2>(ih(j)));
  }
  sol.head_acc_world = local_to_world(sol.joint_linear_acc[0], frames[0].angle);
  return sol;
}

// World-frame center-of-mass accelerations implied by a solution.
inline std::vector<Vec2> com_accelerations(const SnakeState& state,
                                           const DynamicsSolution& sol,
                                           const SnakeParams& p) {
  const std::vector<LinkFrame> frames = forward_kinematics(state, p);
  const double half = 0.5 * p.link_length;
  std::vector<Vec2> out(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double th = frames[i].angle;
    const double w = frames[i].angular_rate;
    const Vec2 axis = longitudinal_axis(th);
    const Vec2 normal(-axis.y(), axis.x());
    out[i] = local_to_world(sol.joint_linear_acc[i], th) +
             half * sol.angular_acc[static_cast<Eigen::Index>(i)] * normal -
             half * w * w * axis;
  }
  return out;
}

// Largest absolute residual of the balance and chaining equations, evaluated
// link by link in world coordinates.
inline double equation_residual(const SnakeState& state, const ControlVector& u,
                                const env::EnvironmentModel& model,
                                const SnakeParams& p,
                                const DynamicsSolution& sol) {
  const int n = state.n_links();
  const std::vector<LinkFrame> frames = forward_kinematics(state, p);
  const AxialVector mass = env::link_mass_diagonal(model, p);
  const std::vector<Vec2> acc = com_accelerations(state, sol, p);
  const double l = p.link_length;
  double worst = 0.0;
  auto track = [&worst](double r) { worst = std::max(worst, std::abs(r)); };

  auto joint_force_world = [&](int j) -> Vec2 {
    if (j < 1 || j >= n) return Vec2::Zero();
    return local_to_world(sol.internal_forces[j - 1], frames[j].angle);
  };
  for (int i = 0; i < n; ++i) {
    const double th = frames[i].angle;
    const AxialVector acc_local = world_to_local(acc[i], th);
    AxialVector applied = env::reaction_force(model, frames[i].com_vel_local, p);
    if (env::in_plane_gravity(model)) {
      const AxialVector g = world_to_local(Vec2(0.0, -p.gravity), th);
      applied = applied + AxialVector{mass.longitudinal * g.longitudinal,
                                      mass.transverse * g.transverse};
    }
    const Vec2 prox = joint_force_world(i);
    const Vec2 dist = -joint_force_world(i + 1);
    const AxialVector net =
        world_to_local(prox + dist, th) + applied;
    track(mass.longitudinal * acc_local.longitudinal - net.longitudinal);
    track(mass.transverse * acc_local.transverse - net.transverse);

    const Vec2 r_prox = frames[i].proximal - frames[i].com;
    const Vec2 r_dist = frames[i].distal(l) - frames[i].com;
    auto cross = [](const Vec2& r, const Vec2& f) {
      return r.x() * f.y() - r.y() * f.x();
    };
    const double moment =
        cross(r_prox, prox) + cross(r_dist, dist) +
        detail::joint_torque(u, i) - detail::joint_torque(u, i + 1) -
        p.joint_viscous_coeff * detail::joint_rate(state, i) +
        p.joint_viscous_coeff * detail::joint_rate(state, i + 1);
    track(p.link_inertia() * sol.angular_acc[i] - moment);
  }
  for (int j = 1; j < n; ++j) {
    track(sol.angular_acc[j - 1] + sol.rel_angular_acc[j - 1] -
          sol.angular_acc[j]);
    const double th = frames[j - 1].angle;
    const double w = frames[j - 1].angular_rate;
    const Vec2 axis = longitudinal_axis(th);
    const Vec2 normal(-axis.y(), axis.x());
    const Vec2 distal_acc = local_to_world(sol.joint_linear_acc[j - 1], th) +
                            l * sol.angular_acc[j - 1] * normal -
                            l * w * w * axis;
    const Vec2 prox_acc =
        local_to_world(sol.joint_linear_acc[j], frames[j].angle);
    track((distal_acc - prox_acc).cwiseAbs().maxCoeff());
  }
  return worst;
}

inline Eigen::VectorXd state_derivative(const SnakeState& state,
                                        const ControlVector& u,
                                        const env::EnvironmentModel& model,
                                        const SnakeParams& p) {
  const int n = state.n_links();
  const DynamicsSolution sol = solve_accelerations(state, u, model, p);
  Eigen::VectorXd d(2 * n + 4);
  d.segment<2>(0) = state.head_vel;
  d.segment(2, n) = state.angle_rates;
  d.segment<2>(n + 2) = sol.head_acc_world;
  d(n + 4) = sol.angular_acc[0];
  d.segment(n + 5, n - 1) = sol.rel_angular_acc;
  return d;
}

inline Eigen::VectorXd state_derivative(const Eigen::VectorXd& x,
                                        const ControlVector& u,
                                        const env::EnvironmentModel& model,
                                        const SnakeParams& p) {
  return state_derivative(SnakeState::from_vector(x), u, model, p);
}

inline Eigen::VectorXd step_vector(const Eigen::VectorXd& x,
                                   const ControlVector& u, double dt,
                                   const env::EnvironmentModel& model,
                                   const SnakeParams& p,
                                   Integrator integrator) {
  if (integrator == Integrator::Euler) {
    return x + dt * state_derivative(x, u, model, p);
  }
  // Classical RK4 with the control held over the step.
  const Eigen::VectorXd k1 = state_derivative(x, u, model, p);
  const Eigen::VectorXd k2 = state_derivative(x + 0.5 * dt * k1, u, model, p);
  const Eigen::VectorXd k3 = state_derivative(x + 0.5 * dt * k2, u, model, p);
  const Eigen::VectorXd k4 = state_derivative(x + dt * k3, u, model, p);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline SnakeState step_euler(const SnakeState& state, const ControlVector& u,
                             double dt, const env::EnvironmentModel& model,
                             const SnakeParams& p) {
  return SnakeState::from_vector(
      step_vector(state.to_vector(), u, dt, model, p, Integrator::Euler));
}

inline SnakeState step_rk4(const SnakeState& state, const ControlVector& u,
                           double dt, const env::EnvironmentModel& model,
                           const SnakeParams& p) {
  return SnakeState::from_vector(
      step_vector(state.to_vector(), u, dt, model, p, Integrator::RK4));
}

inline SnakeState step(const SnakeState& state, const ControlVector& u,
                       double dt, const env::EnvironmentModel& model,
                       const SnakeParams& p, Integrator integrator) {
  return SnakeState::from_vector(
      step_vector(state.to_vector(), u, dt, model, p, integrator));
}

inline double kinetic_energy(const SnakeState& state, const SnakeParams& p,
                             const env::EnvironmentModel& model = env::Viscous{
                                 0.0, 0.0}) {
  const AxialVector mass = env::link_mass_diagonal(model, p);
  double e = 0.0;
  for (const LinkFrame& f : forward_kinematics(state, p)) {
    e += 0.5 * (mass.longitudinal * f.com_vel_local.longitudinal *
                    f.com_vel_local.longitudinal +
                mass.transverse * f.com_vel_local.transverse *
                    f.com_vel_local.transverse);
    e += 0.5 * p.link_inertia() * f.angular_rate * f.angular_rate;
  }
  return e;
}

inline Vec2 linear_momentum(const SnakeState& state, const SnakeParams& p) {
  Vec2 total = Vec2::Zero();
  for (const LinkFrame& f : forward_kinematics(state, p)) {
    total += p.link_mass * f.com_vel_world;
  }
  return total;
}

// About the world origin, including each link's spin.
inline double angular_momentum(const SnakeState& state, const SnakeParams& p) {
  double total = 0.0;
  for (const LinkFrame& f : forward_kinematics(state, p)) {
    total += p.link_mass * (f.com.x() * f.com_vel_world.y() -
                            f.com.y() * f.com_vel_world.x());
    total += p.link_inertia() * f.angular_rate;
  }
  return total;
}

}  // namespace snakegait
