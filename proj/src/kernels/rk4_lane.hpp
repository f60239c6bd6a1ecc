// Copyright 2026 The memcap-rc Authors.
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

// Single-lane RK4 step shared by the scalar kernel and the device model.
// The AVX2 kernel mirrors these expressions operation for operation; keep
// the two in sync.

#include <cstdint>

namespace memcap::kernels::lane {

inline constexpr double kPi = 3.14159265358979323846;

struct Coefficients {
  double drive;  // a*eps*eps0*v^2
  double R0;
  double W0;
  double zeta_ew;
  double k_ew;
  double zeta_ec;
  double k_ec;
};

inline void derivatives(const Coefficients& c, double R, double W, double& dR,
                        double& dW) {
  dR = (c.drive / (2.0 * W) - c.k_ew * (R - c.R0)) / c.zeta_ew;
  dW = (-(c.drive * kPi * R * R) / (2.0 * W * W) + c.k_ec * (c.W0 - W)) /
       c.zeta_ec;
}

/// One RK4 step. Returns true if the thickness was clamped to `W_min`.
inline bool rk4_step(const Coefficients& c, double W_min, double dt,
                     double& R, double& W) {
  const double half = 0.5 * dt;
  const double sixth = dt / 6.0;
  double k1R, k1W, k2R, k2W, k3R, k3W, k4R, k4W;
  derivatives(c, R, W, k1R, k1W);
  derivatives(c, R + half * k1R, W + half * k1W, k2R, k2W);
  derivatives(c, R + half * k2R, W + half * k2W, k3R, k3W);
  derivatives(c, R + dt * k3R, W + dt * k3W, k4R, k4W);
  R = R + sixth * (k1R + 2.0 * k2R + 2.0 * k3R + k4R);
  W = W + sixth * (k1W + 2.0 * k2W + 2.0 * k3W + k4W);
  if (W_min > W) {
    W = W_min;
    return true;
  }
  return false;
}

}  // namespace memcap::kernels::lane
