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

#include "memcap/pulse_train.hpp"

#include <cmath>
#include <numeric>

#include "memcap/errors.hpp"

namespace memcap {

PulseTrain::PulseTrain(std::vector<Segment> segments) {
  segments_.reserve(segments.size());
  for (const auto& s : segments) add(s.amplitude, s.duration, s.sampled);
}

void PulseTrain::add(double amplitude, double duration, bool sampled) {
  if (!std::isfinite(amplitude)) {
    throw InvalidInput("pulse amplitude must be finite");
  }
  if (!std::isfinite(duration) || duration <= 0.0) {
    throw InvalidInput("pulse duration must be positive");
  }
  segments_.push_back({amplitude, duration, sampled});
}

double PulseTrain::total_duration() const noexcept {
  return std::accumulate(
      segments_.begin(), segments_.end(), 0.0,
      [](double acc, const Segment& s) { return acc + s.duration; });
}

void PulseTrain::append(const PulseTrain& other) {
  segments_.insert(segments_.end(), other.segments_.begin(),
                   other.segments_.end());
}

}  // namespace memcap
