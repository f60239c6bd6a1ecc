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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "helpers.hpp"
#include "memcap/kernels.hpp"
#include "memcap/random.hpp"
#include "memcap/reservoir.hpp"

using namespace memcap;
using kernels::Isa;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

struct Lanes {
  std::vector<double> R, W, drive, R0, W0, zeta_ew, k_ew, zeta_ec, k_ec, W_min, volts;
  std::vector<std::uint32_t> hits;

  Lanes(std::size_t n, std::uint64_t seed, double v_max) {
    Rng rng(seed);
    const auto& base = testutil::default_params();
    for (std::size_t i = 0; i < n; ++i) {
      MemcapacitorParams p = base;
      p.R0 *= uniform(rng, 0.9, 1.1);
      p.W0 *= uniform(rng, 0.9, 1.1);
      R.push_back(p.R0 * uniform(rng, 1.0, 1.3));
      W.push_back(p.W0 * uniform(rng, 0.9, 1.0));
      drive.push_back(p.drive_coefficient());
      R0.push_back(p.R0);
      W0.push_back(p.W0);
      zeta_ew.push_back(p.zeta_ew);
      k_ew.push_back(p.k_ew);
      zeta_ec.push_back(p.zeta_ec);
      k_ec.push_back(p.k_ec);
      W_min.push_back(0.2 * p.W0);
      volts.push_back(uniform(rng, -v_max, v_max));
    }
    hits.assign(n, 0);
  }

  kernels::LaneBlock block() {
    return {R, W, drive, R0, W0, zeta_ew, k_ew, zeta_ec, k_ec, W_min, volts, hits};
  }
};

}  // namespace

TEST_CASE("scalar kernel is always available") {
  CHECK(kernels::isa_available(Isa::kScalar));
  CHECK(kernels::isa_name(Isa::kScalar) == "scalar");
}

TEST_CASE("AVX2 and scalar integrators agree bit for bit") {
  if (!kernels::isa_available(Isa::kAvx2)) {
    MESSAGE("AVX2 not available on this machine; equivalence not exercised");
    return;
  }
  for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 13u, 64u}) {
    for (double v_max : {0.2, 2.0}) {
      Lanes a(n, 100 + n, v_max);
      Lanes b = a;
      kernels::advance(Isa::kScalar, a.block(), 1e-3, 500);
      kernels::advance(Isa::kAvx2, b.block(), 1e-3, 500);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(same_bits(a.R[i], b.R[i]));
        CHECK(same_bits(a.W[i], b.W[i]));
        CHECK(a.hits[i] == b.hits[i]);
      }
    }
  }
}

TEST_CASE("large voltages drive the thickness to its floor and count it") {
  Lanes a(6, 7, 0.0);
  for (auto& v : a.volts) v = 3.0;
  kernels::advance(Isa::kScalar, a.block(), 1e-3, 2000);
  for (std::size_t i = 0; i < a.R.size(); ++i) {
    CHECK(a.hits[i] > 0);
    CHECK(a.W[i] >= a.W_min[i]);
  }
  if (kernels::isa_available(Isa::kAvx2)) {
    Lanes b(6, 7, 0.0);
    for (auto& v : b.volts) v = 3.0;
    kernels::advance(Isa::kAvx2, b.block(), 1e-3, 2000);
    CHECK(b.hits == a.hits);
  }
}

TEST_CASE("dot and axpy variants agree bit for bit and match a long double oracle") {
  Rng rng(3);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 101u}) {
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = uniform(rng, -1, 1);
    for (auto& v : y) v = uniform(rng, -1, 1);
    long double ref = 0.0L;
    for (std::size_t i = 0; i < n; ++i) ref += static_cast<long double>(x[i]) * y[i];
    const double s = kernels::dot(Isa::kScalar, x, y);
    CHECK(std::abs(s - static_cast<double>(ref)) <= 1e-14 * (1.0 + n));
    std::vector<double> ya = y, yb = y;
    kernels::axpy(Isa::kScalar, 0.37, x, ya);
    if (kernels::isa_available(Isa::kAvx2)) {
      CHECK(same_bits(s, kernels::dot(Isa::kAvx2, x, y)));
      kernels::axpy(Isa::kAvx2, 0.37, x, yb);
      for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(ya[i], yb[i]));
    }
    for (std::size_t i = 0; i < n; ++i) CHECK(ya[i] == y[i] + 0.37 * x[i]);
  }
}

TEST_CASE("lockstep results do not depend on the worker count or kernel variant") {
  const auto bank = make_device_bank(testutil::default_params(), 11, 0.05, 9);
  const std::vector<double> durations = {0.1, 0.25, 0.05, 0.3};
  std::vector<double> amps;
  Rng rng(4);
  for (std::size_t i = 0; i < durations.size() * bank.devices.size(); ++i) {
    amps.push_back(uniform(rng, 0.0, 0.2));
  }
  ReservoirOptions one;
  ReservoirOptions many;
  many.jobs = 3;
  const auto a = run_lockstep(bank.devices, durations, amps, one);
  const auto b = run_lockstep(bank.devices, durations, amps, many);
  CHECK(a.ratio == b.ratio);
  const Isa saved = kernels::active_isa();
  kernels::set_active_isa(Isa::kScalar);
  const auto c = run_lockstep(bank.devices, durations, amps, one);
  kernels::set_active_isa(saved);
  CHECK(a.ratio == c.ratio);
}
