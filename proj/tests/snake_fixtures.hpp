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
#include <vector>

#include "snakegait/core_types.hpp"

// A curved, moving 5-link configuration away from the straight pose's
// mirror symmetry.
inline snakegait::SnakeState bent_state() {
  snakegait::SnakeState s = snakegait::SnakeState::at_rest(5);
  s.angles << 0.1, 0.4, -0.3, 0.3, -0.2;
  s.head_vel << -0.1, 0.02;
  s.angle_rates << 0.2, -0.5, 0.4, 0.1, -0.3;
  return s;
}

inline std::vector<snakegait::ControlVector> torque_wave(int steps, double amp,
                                                         double freq = 6.0,
                                                         double dt = 0.01) {
  std::vector<snakegait::ControlVector> u(steps, snakegait::ControlVector::zero(4));
  for (int s = 0; s < steps; ++s) {
    for (int j = 0; j < 4; ++j) {
      u[s].torques[j] = amp * std::sin(2.0 * std::numbers::pi * freq * s * dt + j);
    }
  }
  return u;
}
