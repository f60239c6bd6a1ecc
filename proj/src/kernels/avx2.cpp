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

#include <immintrin.h>

#include <cassert>

#include "kernels/rk4_lane.hpp"
#include "memcap/kernels.hpp"

namespace memcap::kernels::detail {

namespace {

struct Pack {
  __m256d drive, R0, W0, zeta_ew, k_ew, zeta_ec, k_ec;
};

inline void derivatives(const Pack& c, __m256d R, __m256d W, __m256d& dR,
                        __m256d& dW) {
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d pi = _mm256_set1_pd(lane::kPi);
  const __m256d sign = _mm256_set1_pd(-0.0);

  // (drive / (2 W) - k_ew (R - R0)) / zeta_ew
  dR = _mm256_div_pd(
      _mm256_sub_pd(_mm256_div_pd(c.drive, _mm256_mul_pd(two, W)),
                    _mm256_mul_pd(c.k_ew, _mm256_sub_pd(R, c.R0))),
      c.zeta_ew);

  // (-(drive pi R R) / (2 W W) + k_ec (W0 - W)) / zeta_ec
  const __m256d num = _mm256_xor_pd(
      _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(c.drive, pi), R), R), sign);
  const __m256d den = _mm256_mul_pd(_mm256_mul_pd(two, W), W);
  dW = _mm256_div_pd(_mm256_add_pd(_mm256_div_pd(num, den),
                                   _mm256_mul_pd(c.k_ec, _mm256_sub_pd(c.W0, W))),
                     c.zeta_ec);
}

inline __m256d combine(__m256d k1, __m256d k2, __m256d k3, __m256d k4) {
  const __m256d two = _mm256_set1_pd(2.0);
  return _mm256_add_pd(
      _mm256_add_pd(_mm256_add_pd(k1, _mm256_mul_pd(two, k2)),
                    _mm256_mul_pd(two, k3)),
      k4);
}

}  // namespace

void advance_avx2(const LaneBlock& lanes, double dt, std::size_t steps) {
  const std::size_t n = lanes.size();
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d half = _mm256_set1_pd(0.5 * dt);
  const __m256d sixth = _mm256_set1_pd(dt / 6.0);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(&lanes.volts[i]);
    Pack c;
    c.drive = _mm256_mul_pd(_mm256_loadu_pd(&lanes.drive_coef[i]),
                            _mm256_mul_pd(v, v));
    c.R0 = _mm256_loadu_pd(&lanes.R0[i]);
    c.W0 = _mm256_loadu_pd(&lanes.W0[i]);
    c.zeta_ew = _mm256_loadu_pd(&lanes.zeta_ew[i]);
    c.k_ew = _mm256_loadu_pd(&lanes.k_ew[i]);
    c.zeta_ec = _mm256_loadu_pd(&lanes.zeta_ec[i]);
    c.k_ec = _mm256_loadu_pd(&lanes.k_ec[i]);
    const __m256d w_min = _mm256_loadu_pd(&lanes.W_min[i]);

    __m256d R = _mm256_loadu_pd(&lanes.R[i]);
    __m256d W = _mm256_loadu_pd(&lanes.W[i]);
    std::uint32_t hits[4] = {0, 0, 0, 0};

    for (std::size_t s = 0; s < steps; ++s) {
      __m256d k1R, k1W, k2R, k2W, k3R, k3W, k4R, k4W;
      derivatives(c, R, W, k1R, k1W);
      derivatives(c, _mm256_add_pd(R, _mm256_mul_pd(half, k1R)),
                  _mm256_add_pd(W, _mm256_mul_pd(half, k1W)), k2R, k2W);
      derivatives(c, _mm256_add_pd(R, _mm256_mul_pd(half, k2R)),
                  _mm256_add_pd(W, _mm256_mul_pd(half, k2W)), k3R, k3W);
      derivatives(c, _mm256_add_pd(R, _mm256_mul_pd(vdt, k3R)),
                  _mm256_add_pd(W, _mm256_mul_pd(vdt, k3W)), k4R, k4W);
      R = _mm256_add_pd(R, _mm256_mul_pd(sixth, combine(k1R, k2R, k3R, k4R)));
      W = _mm256_add_pd(W, _mm256_mul_pd(sixth, combine(k1W, k2W, k3W, k4W)));

      const __m256d below = _mm256_cmp_pd(w_min, W, _CMP_GT_OQ);
      const int mask = _mm256_movemask_pd(below);
      if (mask != 0) {
        W = _mm256_blendv_pd(W, w_min, below);
        for (int l = 0; l < 4; ++l) hits[l] += (mask >> l) & 1;
      }
    }

    _mm256_storeu_pd(&lanes.R[i], R);
    _mm256_storeu_pd(&lanes.W[i], W);
    for (int l = 0; l < 4; ++l) lanes.floor_hits[i + l] += hits[l];
  }

  if (i < n) {
    LaneBlock tail{lanes.R.subspan(i),          lanes.W.subspan(i),
                   lanes.drive_coef.subspan(i), lanes.R0.subspan(i),
                   lanes.W0.subspan(i),         lanes.zeta_ew.subspan(i),
                   lanes.k_ew.subspan(i),       lanes.zeta_ec.subspan(i),
                   lanes.k_ec.subspan(i),       lanes.W_min.subspan(i),
                   lanes.volts.subspan(i),      lanes.floor_hits.subspan(i)};
    advance_scalar(tail, dt, steps);
  }
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i])));
  }
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  double total = (s[0] + s[1]) + (s[2] + s[3]);
  for (; i < n; ++i) total = total + a[i] * b[i];
  return total;
}

void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yi = _mm256_loadu_pd(&y[i]);
    _mm256_storeu_pd(&y[i],
                     _mm256_add_pd(yi, _mm256_mul_pd(va, _mm256_loadu_pd(&x[i]))));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

}  // namespace memcap::kernels::detail
