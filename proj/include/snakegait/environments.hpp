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
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "snakegait/core_types.hpp"

// Reaction-force laws for a link moving through its surroundings. Every law
// takes the link's center-of-mass velocity in its own axes and returns the
// resultant force applied at the center of mass, in the same axes.
namespace snakegait::env {

// Default velocity scale for smoothing sgn() in the box and drag laws.
inline constexpr double kSignSmoothing = 1e-3;  // m/s
// Default regularization of the dry-friction ellipse norm, relative to m*g.
inline constexpr double kDryRegularization = 1e-4;

inline double smooth_sign(double x, double eps) { return std::tanh(x / eps); }

// Anisotropic Coulomb friction applied independently per axis.
struct BoxDry {
  double mu_l = 0.1;
  double mu_t = 0.9;
  double sign_smoothing = kSignSmoothing;
};

// Anisotropic dry friction selected by maximum dissipation on the friction
// ellipse.
struct SmoothDry {
  double mu_l = 0.1;
  double mu_t = 0.9;
  double regularization = kDryRegularization;
};

struct Viscous {
  double c_l = 10.0;  // N*s/m
  double c_t = 1.0;   // N*s/m
};

// Quadratic drag plus transverse added mass.
struct Fluid {
  double density = 1000.0;  // kg/m^3
  double c_d = 1.0;         // transverse (bluff-body) drag
  double c_f = 0.01;        // longitudinal (skin-friction) drag
  double c_a = 1.0;         // added-mass coefficient
  bool in_plane_gravity = false;
  double sign_smoothing = kSignSmoothing;
};

using EnvironmentModel = std::variant<BoxDry, SmoothDry, Viscous, Fluid>;

inline AxialVector box_friction(const AxialVector& v, double m, double g,
                                double mu_l, double mu_t,
                                double eps = kSignSmoothing) {
  return {-m * g * mu_l * smooth_sign(v.longitudinal, eps),
          -m * g * mu_t * smooth_sign(v.transverse, eps)};
}

// The maximizer of -f.v over the ellipse (f_l/(m g mu_l))^2 + (f_t/(m g
// mu_t))^2 = 1 is f = -m g (mu_l^2 v_l, mu_t^2 v_t) / |(mu_l v_l, mu_t v_t)|.
// The norm carries an additive (m g regularization)^2 so the force goes to
// zero continuously at rest.
inline AxialVector smooth_dry_friction(const AxialVector& v, double m,
                                       double g, double mu_l, double mu_t,
                                       double regularization =
                                           kDryRegularization) {
  const double eps = m * g * regularization;
  const double wl = mu_l * v.longitudinal;
  const double wt = mu_t * v.transverse;
  const double norm = std::sqrt(wl * wl + wt * wt + eps * eps);
  const double scale = -m * g / norm;
  return {scale * mu_l * wl, scale * mu_t * wt};
}

inline AxialVector viscous_friction(const AxialVector& v, double c_l,
                                    double c_t) {
  return {-c_l * v.longitudinal, -c_t * v.transverse};
}

// a: cross-section height, b: cross-section width, l: link length.
inline AxialVector drag_force(const AxialVector& v, double density, double c_d,
                              double c_f, double a, double b, double l,
                              double eps = kSignSmoothing) {
  const double k_l = 0.5 * density * std::numbers::pi * c_f * (a + b) / 4.0 * l;
  const double k_t = 0.5 * density * c_d * a * l;
  return {-k_l * smooth_sign(v.longitudinal, eps) * v.longitudinal *
              v.longitudinal,
          -k_t * smooth_sign(v.transverse, eps) * v.transverse * v.transverse};
}

inline double added_mass(double density, double c_a, double a, double l) {
  return density * std::numbers::pi * c_a * (a * a / 4.0) * l;
}

// Link mass matrix in (longitudinal, transverse) order; the displaced fluid
// only loads transverse motion.
inline Eigen::Matrix2d added_mass_matrix(double density, double c_a, double a,
                                         double l, double m) {
  Eigen::Matrix2d mm = Eigen::Matrix2d::Zero();
  mm(0, 0) = m;
  mm(1, 1) = m + added_mass(density, c_a, a, l);
  return mm;
}

inline AxialVector reaction_force(const EnvironmentModel& model,
                                  const AxialVector& v,
                                  const SnakeParams& p) {
  const double m = p.link_mass;
  const double g = p.gravity;
  return std::visit(
      [&](const auto& e) -> AxialVector {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BoxDry>) {
          return box_friction(v, m, g, e.mu_l, e.mu_t, e.sign_smoothing);
        } else if constexpr (std::is_same_v<T, SmoothDry>) {
          return smooth_dry_friction(v, m, g, e.mu_l, e.mu_t,
                                     e.regularization);
        } else if constexpr (std::is_same_v<T, Viscous>) {
          return viscous_friction(v, e.c_l, e.c_t);
        } else {
          return drag_force(v, e.density, e.c_d, e.c_f, p.cross_height,
                            p.cross_width, p.link_length, e.sign_smoothing);
        }
      },
      model);
}

// (longitudinal, transverse) diagonal of the per-link mass matrix.
inline AxialVector link_mass_diagonal(const EnvironmentModel& model,
                                      const SnakeParams& p) {
  if (const auto* f = std::get_if<Fluid>(&model)) {
    const Eigen::Matrix2d mm = added_mass_matrix(
        f->density, f->c_a, p.cross_height, p.link_length, p.link_mass);
    return {mm(0, 0), mm(1, 1)};
  }
  return {p.link_mass, p.link_mass};
}

inline bool in_plane_gravity(const EnvironmentModel& model) {
  const auto* f = std::get_if<Fluid>(&model);
  return f != nullptr && f->in_plane_gravity;
}

inline std::string_view name(const EnvironmentModel& model) {
  constexpr std::string_view kNames[] = {"box", "dry", "viscous", "fluid"};
  return kNames[model.index()];
}

inline void validate(const EnvironmentModel& model) {
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  const bool ok = std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BoxDry>) {
          return nonneg(e.mu_l) && nonneg(e.mu_t) && pos(e.sign_smoothing);
        } else if constexpr (std::is_same_v<T, SmoothDry>) {
          return nonneg(e.mu_l) && nonneg(e.mu_t) && pos(e.regularization);
        } else if constexpr (std::is_same_v<T, Viscous>) {
          return nonneg(e.c_l) && nonneg(e.c_t);
        } else {
          return pos(e.density) && nonneg(e.c_d) && nonneg(e.c_f) &&
                 nonneg(e.c_a) && pos(e.sign_smoothing);
        }
      },
      model);
  if (!ok) {
    throw std::invalid_argument("invalid coefficients for environment '" +
                                std::string(name(model)) + "'");
  }
}

// Default coefficients for the named environment.
inline EnvironmentModel from_name(std::string_view which) {
  if (which == "box") return BoxDry{};
  if (which == "dry") return SmoothDry{};
  if (which == "viscous") return Viscous{};
  if (which == "fluid") return Fluid{};
  throw std::invalid_argument("unknown environment '" + std::string(which) +
                              "' (expected box|dry|viscous|fluid)");
}

}  // namespace snakegait::env
