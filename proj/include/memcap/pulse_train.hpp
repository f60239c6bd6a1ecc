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
#include <span>
#include <vector>

namespace memcap {

/// One piecewise-constant stretch of a voltage waveform.
struct Segment {
  double amplitude;  // V
  double duration;   // s
  /// Whether readers of a reservoir run record the state at the end of
  /// this segment. Encoders clear it on rest segments between frames.
  bool sampled = true;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Piecewise-constant voltage waveform applied to a device.
class PulseTrain {
 public:
  PulseTrain() = default;
  explicit PulseTrain(std::vector<Segment> segments);

  /// Appends a segment; throws InvalidInput for a non-finite amplitude or a
  /// non-positive duration.
  void add(double amplitude, double duration, bool sampled = true);

  std::span<const Segment> segments() const noexcept { return segments_; }
  std::size_t size() const noexcept { return segments_.size(); }
  bool empty() const noexcept { return segments_.empty(); }
  double total_duration() const noexcept;

  /// Concatenation; the second train starts where the first ends.
  void append(const PulseTrain& other);

  friend bool operator==(const PulseTrain&, const PulseTrain&) = default;

 private:
  std::vector<Segment> segments_;
};

}  // namespace memcap
