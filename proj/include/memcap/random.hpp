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

#include <cstdint>
#include <random>
#include <string_view>

namespace memcap {

using Rng = std::mt19937_64;

/// Seed for the named sub-stream of a run. Every random component (device
/// bank, data splits, baseline vector, noise hook, ...) draws from its own
/// stream so that changing one leaves the others untouched.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);

inline Rng make_rng(std::uint64_t root, std::string_view stream) {
  return Rng(derive_seed(root, stream));
}

double uniform(Rng& rng, double lo, double hi);
double standard_normal(Rng& rng);

/// Standard normal conditioned on |g| <= limit (rejection sampling).
double truncated_normal(Rng& rng, double limit);

}  // namespace memcap
