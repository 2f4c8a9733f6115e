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

// Independent reference for the chain dynamics: every link is a free rigid
// body with coordinates (x_c, y_c, theta), joints are bilateral pin
// constraints, and the accelerations come from one KKT solve with Baumgarte
// stabilization terms. Nothing here reuses the library's assembly.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "snakegait/core_types.hpp"
#include "snakegait/environments.hpp"

namespace snakegait::oracle {

struct BodyAccelerations {
  std::vector<Eigen::Vector2d> com_acc;
  std::vector<double> theta_acc;
  Eigen::Vector2d head_acc;
};

inline BodyAccelerations maximal_coordinates(const SnakeState& s,
                                             const ControlVector& u,
                                             const env::EnvironmentModel& model,
                                             const SnakeParams& p,
                                             double baumgarte_k = 10.0) {
  const int n = s.n_links();
  const double l = p.link_length;
  const double inertia = p.link_mass * l * l / 12.0;

  std::vector<double> th(n), om(n);
  std::vector<Eigen::Vector2d> pos(n), vel(n);
  {
    double a = 0.0, w = 0.0;
    Eigen::Vector2d jp = s.head_pos, jv = s.head_vel;
    for (int i = 0; i < n; ++i) {
      a += s.angles[i];
      w += s.angle_rates[i];
      th[i] = a;
      om[i] = w;
      const Eigen::Vector2d e(std::cos(a), std::sin(a));
      const Eigen::Vector2d ed(-std::sin(a) * w, std::cos(a) * w);
      pos[i] = jp + 0.5 * l * e;
      vel[i] = jv + 0.5 * l * ed;
      jp += l * e;
      jv += l * ed;
    }
  }

  const int nq = 3 * n;
  const int nc = 2 * (n - 1);
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nq + nc, nq + nc);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nq + nc);

  double m_long = p.link_mass, m_trans = p.link_mass;
  if (const auto* f = std::get_if<env::Fluid>(&model)) {
    m_trans += f->density * M_PI * f->c_a * p.cross_height *
               p.cross_height / 4.0 * l;
  }

  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d e(std::cos(th[i]), std::sin(th[i]));
    const Eigen::Vector2d t(std::sin(th[i]), -std::cos(th[i]));
    const Eigen::Matrix2d mw = m_long * e * e.transpose() +
                               m_trans * t * t.transpose();
    kkt.block<2, 2>(3 * i, 3 * i) = mw;
    kkt(3 * i + 2, 3 * i + 2) = inertia;

    const AxialVector vl{vel[i].dot(e), vel[i].dot(t)};
    const AxialVector f = env::reaction_force(model, vl, p);
    Eigen::Vector2d fw = f.longitudinal * e + f.transverse * t;
    if (env::in_plane_gravity(model)) {
      fw += mw * Eigen::Vector2d(0.0, -p.gravity);
    }
    rhs.segment<2>(3 * i) = fw;

    double torque = 0.0;
    if (i >= 1) {
      torque += u.torques[i - 1] - p.joint_viscous_coeff * (om[i] - om[i - 1]);
    }
    if (i + 1 < n) {
      torque -= u.torques[i] - p.joint_viscous_coeff * (om[i + 1] - om[i]);
    }
    rhs(3 * i + 2) = torque;
  }

  // Pin j joins the distal end of body j-1 to the proximal end of body j:
  // c = x_{j-1} + l/2 e_{j-1} - x_j + l/2 e_j.
  for (int j = 1; j < n; ++j) {
    const int r = nq + 2 * (j - 1);
    const int a = j - 1, b = j;
    const Eigen::Vector2d ea(std::cos(th[a]), std::sin(th[a]));
    const Eigen::Vector2d eb(std::cos(th[b]), std::sin(th[b]));
    const Eigen::Vector2d na(-ea.y(), ea.x()), nb(-eb.y(), eb.x());

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, nq);
    jac.block<2, 2>(0, 3 * a) = Eigen::Matrix2d::Identity();
    jac.col(3 * a + 2) = 0.5 * l * na;
    jac.block<2, 2>(0, 3 * b) = -Eigen::Matrix2d::Identity();
    jac.col(3 * b + 2) = 0.5 * l * nb;
    kkt.block(r, 0, 2, nq) = jac;
    kkt.block(0, r, nq, 2) = jac.transpose();

    const Eigen::Vector2d c = pos[a] + 0.5 * l * ea - pos[b] + 0.5 * l * eb;
    const Eigen::Vector2d cdot =
        vel[a] + 0.5 * l * om[a] * na - vel[b] + 0.5 * l * om[b] * nb;
    const Eigen::Vector2d bias =
        0.5 * l * om[a] * om[a] * ea + 0.5 * l * om[b] * om[b] * eb;
    rhs.segment<2>(r) =
        bias - 2.0 * baumgarte_k * cdot - baumgarte_k * baumgarte_k * c;
  }

  const Eigen::VectorXd z = kkt.fullPivLu().solve(rhs);
  BodyAccelerations out;
  for (int i = 0; i < n; ++i) {
    out.com_acc.push_back(z.segment<2>(3 * i));
    out.theta_acc.push_back(z(3 * i + 2));
  }
  const Eigen::Vector2d e0(std::cos(th[0]), std::sin(th[0]));
  const Eigen::Vector2d n0(-e0.y(), e0.x());
  out.head_acc = out.com_acc[0] - 0.5 * l * (out.theta_acc[0] * n0 -
                                             om[0] * om[0] * e0);
  return out;
}

}  // namespace snakegait::oracle
