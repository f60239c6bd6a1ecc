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

#include <atomic>
#include <cstdlib>
#include <string>

#include "memcap/errors.hpp"
#include "memcap/kernels.hpp"

namespace memcap::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(MEMCAP_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa default_isa() {
  if (const char* env = std::getenv("MEMCAP_ISA")) {
    const std::string choice(env);
    if (choice == "scalar") return Isa::kScalar;
    if (choice == "avx2" && isa_available(Isa::kAvx2)) return Isa::kAvx2;
  }
  return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{default_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw InvalidInput("kernel variant '" + std::string(isa_name(isa)) +
                       "' is not available on this machine");
  }
  selected().store(isa, std::memory_order_relaxed);
}

void advance(Isa isa, const LaneBlock& lanes, double dt, std::size_t steps) {
#if defined(MEMCAP_BUILD_AVX2)
  if (isa == Isa::kAvx2) return detail::advance_avx2(lanes, dt, steps);
#endif
  (void)isa;
  detail::advance_scalar(lanes, dt, steps);
}

void advance(const LaneBlock& lanes, double dt, std::size_t steps) {
  advance(active_isa(), lanes, dt, steps);
}

double dot(Isa isa, std::span<const double> a, std::span<const double> b) {
#if defined(MEMCAP_BUILD_AVX2)
  if (isa == Isa::kAvx2) return detail::dot_avx2(a, b);
#endif
  (void)isa;
  return detail::dot_scalar(a, b);
}

double dot(std::span<const double> a, std::span<const double> b) {
  return dot(active_isa(), a, b);
}

void axpy(Isa isa, double alpha, std::span<const double> x,
          std::span<double> y) {
#if defined(MEMCAP_BUILD_AVX2)
  if (isa == Isa::kAvx2) return detail::axpy_avx2(alpha, x, y);
#endif
  (void)isa;
  detail::axpy_scalar(alpha, x, y);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  axpy(active_isa(), alpha, x, y);
}

}  // namespace memcap::kernels
