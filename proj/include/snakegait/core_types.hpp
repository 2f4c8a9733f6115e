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
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace snakegait {

using Vec2 = Eigen::Vector2d;

// Geometric, inertial and actuation constants of a planar n-link snake.
// Links are uniform: every link shares one length and one mass. Per-link
// arrays would replace link_length/link_mass and link_inertia() below.
struct SnakeParams {
  int n_links = 5;
  double link_length = 0.2;          // m
  double link_mass = 0.2;            // kg
  double cross_height = 0.15;        // m, a
  double cross_width = 0.05;         // m, b
  double joint_viscous_coeff = 0.0;  // N*m*s/rad
  double torque_limit = 1.0;         // N*m
  double gravity = 9.81;             // m/s^2, normal-force magnitude
  double dt = 0.01;                  // s, control period

  int num_joints() const { return n_links - 1; }
  int state_dim() const { return 2 * n_links + 4; }
  int control_dim() const { return n_links - 1; }

  // Uniform slender rod about its center of mass.
  double link_inertia() const {
    return link_mass * link_length * link_length / 12.0;
  }

  void validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (n_links < 2) throw std::invalid_argument("n_links must be >= 2");
    if (!positive(link_length) || !positive(link_mass) ||
        !positive(cross_height) || !positive(cross_width) ||
        !positive(gravity) || !positive(dt)) {
      throw std::invalid_argument(
          "lengths, masses, gravity and dt must be strictly positive");
    }
    if (!positive(torque_limit)) {
      throw std::invalid_argument("torque_limit must be > 0");
    }
    if (!std::isfinite(joint_viscous_coeff) || joint_viscous_coeff < 0.0) {
      throw std::invalid_argument("joint_viscous_coeff must be >= 0");
    }
  }
};

// Full robot state. angles[0] is the world angle of link 0 measured from the
// world x-axis to the link's longitudinal axis (counterclockwise); angles[i]
// for i >= 1 is the relative angle of link i with respect to link i-1.
// Link longitudinal axes point from the head toward the tail.
struct SnakeState {
  Vec2 head_pos = Vec2::Zero();
  Eigen::VectorXd angles;
  Vec2 head_vel = Vec2::Zero();
  Eigen::VectorXd angle_rates;

  int n_links() const { return static_cast<int>(angles.size()); }

  // Straight snake at rest with the head at `head` and the body extending
  // along `heading` (world angle of the head-to-tail axis).
  static SnakeState at_rest(int n_links, const Vec2& head = Vec2::Zero(),
                            double heading = 0.0) {
    SnakeState s;
    s.head_pos = head;
    s.angles = Eigen::VectorXd::Zero(n_links);
    s.angles[0] = heading;
    s.head_vel.setZero();
    s.angle_rates = Eigen::VectorXd::Zero(n_links);
    return s;
  }

  // Layout: [x0, y0, q0..q_{n-1}, vx0, vy0, qd0..qd_{n-1}].
  Eigen::VectorXd to_vector() const {
    const int n = n_links();
    Eigen::VectorXd x(2 * n + 4);
    x.segment<2>(0) = head_pos;
    x.segment(2, n) = angles;
    x.segment<2>(n + 2) = head_vel;
    x.segment(n + 4, n) = angle_rates;
    return x;
  }

  static SnakeState from_vector(const Eigen::VectorXd& x) {
    if (x.size() < 8 || x.size() % 2 != 0) {
      throw std::invalid_argument("state vector has invalid length");
    }
    const int n = static_cast<int>(x.size() - 4) / 2;
    SnakeState s;
    s.head_pos = x.segment<2>(0);
    s.angles = x.segment(2, n);
    s.head_vel = x.segment<2>(n + 2);
    s.angle_rates = x.segment(n + 4, n);
    return s;
  }

  bool is_finite() const {
    return head_pos.allFinite() && angles.allFinite() &&
           head_vel.allFinite() && angle_rates.allFinite();
  }
};

// Joint torques; torques[j-1] acts at joint j, between link j-1 and link j,
// positive counterclockwise on link j.
struct ControlVector {
  Eigen::VectorXd torques;

  static ControlVector zero(int n_joints) {
    return {Eigen::VectorXd::Zero(n_joints)};
  }

  ControlVector clamped(double limit) const {
    return {torques.cwiseMax(-limit).cwiseMin(limit)};
  }
};

struct Trajectory {
  double dt = 0.01;
  std::vector<SnakeState> states;
  std::vector<ControlVector> controls;

  std::size_t steps() const { return controls.size(); }
  double duration() const { return dt * static_cast<double>(steps()); }
  double time_at(std::size_t k) const { return dt * static_cast<double>(k); }

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("trajectory dt must be > 0");
    if (states.size() != controls.size() + 1) {
      throw std::invalid_argument(
          "trajectory must hold exactly one more state than controls");
    }
  }
};

// A vector in a link's own axes, split into the component along the body
// (longitudinal, local y) and across it (transverse, local x).
struct AxialVector {
  double longitudinal = 0.0;
  double transverse = 0.0;

  friend AxialVector operator*(double s, const AxialVector& v) {
    return {s * v.longitudinal, s * v.transverse};
  }
  friend AxialVector operator+(const AxialVector& a, const AxialVector& b) {
    return {a.longitudinal + b.longitudinal, a.transverse + b.transverse};
  }
  friend AxialVector operator-(const AxialVector& v) {
    return {-v.longitudinal, -v.transverse};
  }
  double dot(const AxialVector& o) const {
    return longitudinal * o.longitudinal + transverse * o.transverse;
  }
  double norm() const { return std::hypot(longitudinal, transverse); }
};

// Unit longitudinal axis of a link with world angle `theta`.
inline Vec2 longitudinal_axis(double theta) {
  return {std::cos(theta), std::sin(theta)};
}

// Unit transverse axis; (transverse, longitudinal) is right-handed.
inline Vec2 transverse_axis(double theta) {
  return {std::sin(theta), -std::cos(theta)};
}

inline AxialVector world_to_local(const Vec2& v, double theta) {
  return {v.dot(longitudinal_axis(theta)), v.dot(transverse_axis(theta))};
}

inline Vec2 local_to_world(const AxialVector& v, double theta) {
  return v.longitudinal * longitudinal_axis(theta) +
         v.transverse * transverse_axis(theta);
}

struct LinkFrame {
  Vec2 proximal = Vec2::Zero();  // joint position at the head-side end
  double angle = 0.0;            // world angle of the longitudinal axis
  double angular_rate = 0.0;
  Vec2 com = Vec2::Zero();
  Vec2 com_vel_world = Vec2::Zero();
  AxialVector com_vel_local;

  Vec2 distal(double link_length) const {
    return proximal + link_length * longitudinal_axis(angle);
  }
};

inline std::vector<LinkFrame> forward_kinematics(const SnakeState& state,
                                                 const SnakeParams& params) {
  const int n = state.n_links();
  const double l = params.link_length;
  std::vector<LinkFrame> frames(static_cast<std::size_t>(n));
  Vec2 joint_pos = state.head_pos;
  Vec2 joint_vel = state.head_vel;
  double theta = 0.0;
  double omega = 0.0;
  for (int i = 0; i < n; ++i) {
    theta += state.angles[i];
    omega += state.angle_rates[i];
    const Vec2 axis = longitudinal_axis(theta);
    const Vec2 axis_rate = omega * Vec2(-axis.y(), axis.x());
    LinkFrame& f = frames[static_cast<std::size_t>(i)];
    f.proximal = joint_pos;
    f.angle = theta;
    f.angular_rate = omega;
    f.com = joint_pos + 0.5 * l * axis;
    f.com_vel_world = joint_vel + 0.5 * l * axis_rate;
    f.com_vel_local = world_to_local(f.com_vel_world, theta);
    joint_pos += l * axis;
    joint_vel += l * axis_rate;
  }
  return frames;
}

}  // namespace snakegait
