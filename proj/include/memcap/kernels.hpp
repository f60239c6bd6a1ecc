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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Batched integrator and reduction kernels.
//
// Every kernel has a scalar reference implementation and, where the build
// and the CPU support it, an AVX2 implementation. The variants evaluate the
// same expressions in the same order without fused multiply-add, so they
// agree bit for bit; the choice of variant never changes a result.

namespace memcap::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

/// True if the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// Variant used by the dispatching entry points. Defaults to the best
/// available one; the MEMCAP_ISA environment variable (`scalar`, `avx2`)
/// overrides the default at first use.
Isa active_isa();

/// Throws InvalidInput if `isa` is not available.
void set_active_isa(Isa isa);

/// Structure-of-arrays view over a group of independent devices ("lanes").
/// All spans have the same length. `drive_coef` is a*eps*eps0 per lane and
/// `volts` is the voltage held on each lane for the whole call.
struct LaneBlock {
  std::span<double> R;
  std::span<double> W;
  std::span<const double> drive_coef;
  std::span<const double> R0;
  std::span<const double> W0;
  std::span<const double> zeta_ew;
  std::span<const double> k_ew;
  std::span<const double> zeta_ec;
  std::span<const double> k_ec;
  std::span<const double> W_min;
  std::span<const double> volts;
  /// Incremented once per step in which a lane's thickness hit its floor.
  std::span<std::uint32_t> floor_hits;

  std::size_t size() const noexcept { return R.size(); }
};

/// Advance every lane by `steps` classical RK4 steps of size `dt`.
void advance(const LaneBlock& lanes, double dt, std::size_t steps);
void advance(Isa isa, const LaneBlock& lanes, double dt, std::size_t steps);

/// Inner product accumulated in four interleaved partial sums.
double dot(std::span<const double> a, std::span<const double> b);
double dot(Isa isa, std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpy(Isa isa, double alpha, std::span<const double> x,
          std::span<double> y);

namespace detail {

void advance_scalar(const LaneBlock& lanes, double dt, std::size_t steps);
double dot_scalar(std::span<const double> a, std::span<const double> b);
void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y);

#if defined(MEMCAP_BUILD_AVX2)
void advance_avx2(const LaneBlock& lanes, double dt, std::size_t steps);
double dot_avx2(std::span<const double> a, std::span<const double> b);
void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y);
#endif

}  // namespace detail

}  // namespace memcap::kernels
