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

#include "snakegait/core_types.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace snakegait {
namespace {

SnakeState RandomState(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SnakeState s = SnakeState::at_rest(n);
  s.head_pos = Vec2(u(rng), u(rng));
  for (int i = 0; i < n; ++i) {
    s.angles[i] = u(rng);
    s.angle_rates[i] = 2.0 * u(rng);
  }
  s.head_vel = Vec2(u(rng), u(rng));
  return s;
}

TEST(SnakeParamsTest, DefaultsValidate) {
  SnakeParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.state_dim(), 14);
  EXPECT_EQ(p.control_dim(), 4);
}

TEST(SnakeParamsTest, RejectsInvalid) {
  SnakeParams p;
  p.n_links = 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SnakeParams{};
  p.dt = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SnakeParams{};
  p.joint_viscous_coeff = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SnakeParams{};
  p.torque_limit = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(SnakeStateTest, VectorLayout) {
  std::mt19937 rng(7);
  const SnakeState s = RandomState(rng, 5);
  const Eigen::VectorXd x = s.to_vector();
  ASSERT_EQ(x.size(), 14);
  EXPECT_EQ(x[0], s.head_pos.x());
  EXPECT_EQ(x[2], s.angles[0]);
  EXPECT_EQ(x[7], s.head_vel.x());
  EXPECT_EQ(x[13], s.angle_rates[4]);
  EXPECT_EQ(SnakeState::from_vector(x).to_vector(), x);
}

TEST(TrajectoryTest, LengthInvariant) {
  Trajectory t;
  t.states.resize(3);
  t.controls.resize(2);
  EXPECT_NO_THROW(t.validate());
  t.controls.resize(3);
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

TEST(ForwardKinematicsTest, StraightAlongWorldY) {
  SnakeParams p;
  p.n_links = 2;
  const SnakeState s = SnakeState::at_rest(2, Vec2::Zero(), std::numbers::pi / 2);
  const auto frames = forward_kinematics(s, p);
  EXPECT_NEAR(frames[1].proximal.x(), 0.0, 1e-15);
  EXPECT_NEAR(frames[1].proximal.y(), 0.2, 1e-15);
  EXPECT_NEAR(frames[1].com.x(), 0.0, 1e-15);
  EXPECT_NEAR(frames[1].com.y(), 0.3, 1e-15);
  for (const auto& f : frames) {
    EXPECT_EQ(f.com_vel_local.longitudinal, 0.0);
    EXPECT_EQ(f.com_vel_local.transverse, 0.0);
  }
}

TEST(ForwardKinematicsTest, ZeroHeadingPointsAlongWorldX) {
  SnakeParams p;
  const auto frames = forward_kinematics(SnakeState::at_rest(5), p);
  EXPECT_NEAR(frames[4].com.x(), 0.9, 1e-15);
  EXPECT_NEAR(frames[4].com.y(), 0.0, 1e-15);
}

TEST(ForwardKinematicsTest, RigidTranslation) {
  SnakeParams p;
  std::mt19937 rng(3);
  SnakeState s = RandomState(rng, 5);
  s.angle_rates.setZero();
  s.head_vel = Vec2(1.0, 0.0);
  for (const auto& f : forward_kinematics(s, p)) {
    EXPECT_DOUBLE_EQ(f.com_vel_world.x(), 1.0);
    EXPECT_DOUBLE_EQ(f.com_vel_world.y(), 0.0);
  }
}

TEST(ForwardKinematicsTest, LocalVelocityAxes) {
  SnakeParams p;
  SnakeState s = SnakeState::at_rest(2);  // longitudinal axis = +x
  s.head_vel = Vec2(2.0, -3.0);
  const auto f = forward_kinematics(s, p)[0];
  EXPECT_DOUBLE_EQ(f.com_vel_local.longitudinal, 2.0);
  EXPECT_DOUBLE_EQ(f.com_vel_local.transverse, 3.0);
}

TEST(ForwardKinematicsTest, FrameRoundTrip) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 1000; ++k) {
    const Vec2 v(u(rng), u(rng));
    const double th = u(rng);
    const Vec2 back = local_to_world(world_to_local(v, th), th);
    EXPECT_NEAR((back - v).norm(), 0.0, 1e-14);
  }
}

// Central differences of center-of-mass positions along a smooth path match
// the reported velocities to O(h^2).
TEST(ForwardKinematicsTest, VelocitiesMatchPositionDerivatives) {
  SnakeParams p;
  std::mt19937 rng(5);
  const SnakeState s0 = RandomState(rng, 5);
  auto at = [&](double t) {
    SnakeState s = s0;
    s.head_pos += t * s0.head_vel;
    s.angles += t * s0.angle_rates;
    return s;
  };
  double prev_err = 0.0;
  for (double h : {1e-2, 5e-3}) {
    const auto fp = forward_kinematics(at(h), p);
    const auto fm = forward_kinematics(at(-h), p);
    const auto f0 = forward_kinematics(s0, p);
    double err = 0.0;
    for (std::size_t i = 0; i < f0.size(); ++i) {
      const Vec2 fd = (fp[i].com - fm[i].com) / (2.0 * h);
      err = std::max(err, (fd - f0[i].com_vel_world).norm());
    }
    if (prev_err > 0.0) {
      EXPECT_NEAR(prev_err / err, 4.0, 0.2);
    }
    prev_err = err;
  }
}

TEST(ControlVectorTest, Clamp) {
  ControlVector u{Eigen::Vector4d(-3.0, 0.5, 1.0, 2.0)};
  const ControlVector c = u.clamped(1.0);
  EXPECT_EQ(c.torques, Eigen::Vector4d(-1.0, 0.5, 1.0, 1.0));
}

}  // namespace
}  // namespace snakegait
