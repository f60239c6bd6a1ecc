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

#include <cassert>

#include "kernels/rk4_lane.hpp"
#include "memcap/kernels.hpp"

namespace memcap::kernels::detail {

void advance_scalar(const LaneBlock& lanes, double dt, std::size_t steps) {
  const std::size_t n = lanes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = lanes.volts[i];
    const lane::Coefficients c{lanes.drive_coef[i] * (v * v), lanes.R0[i],
                               lanes.W0[i],        lanes.zeta_ew[i],
                               lanes.k_ew[i],      lanes.zeta_ec[i],
                               lanes.k_ec[i]};
    double R = lanes.R[i];
    double W = lanes.W[i];
    std::uint32_t hits = 0;
    for (std::size_t s = 0; s < steps; ++s) {
      hits += lane::rk4_step(c, lanes.W_min[i], dt, R, W) ? 1u : 0u;
    }
    lanes.R[i] = R;
    lanes.W[i] = W;
    lanes.floor_hits[i] += hits;
  }
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = s0 + a[i] * b[i];
    s1 = s1 + a[i + 1] * b[i + 1];
    s2 = s2 + a[i + 2] * b[i + 2];
    s3 = s3 + a[i + 3] * b[i + 3];
  }
  double total = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) total = total + a[i] * b[i];
  return total;
}

void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = y[i] + alpha * x[i];
}

}  // namespace memcap::kernels::detail
