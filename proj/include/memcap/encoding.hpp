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
#include <variant>
#include <vector>

#include "memcap/pulse_train.hpp"

namespace memcap {

/// Sampling rate of the Bonn EEG recordings, Hz.
inline constexpr double kEegSampleRate = 173.67;

/// Bits as square pulses: 1 -> high_V, 0 -> low_V.
struct BinaryLevels {
  double low_V = 0.010;
  double high_V = 0.200;
  double width_s = 0.5;
};

/// Scalars in [in_min, in_max] mapped linearly onto [v_min_V, v_max_V],
/// each held for duty*frame_s and followed by 0 V for the rest of the frame.
struct AmplitudeMap {
  double in_min = 0.0;
  double in_max = 0.5;
  double v_min_V = 0.050;
  double v_max_V = 0.200;
  double frame_s = 0.2;
  double duty = 0.5;
};

/// EEG samples (uV): |x| clipped at clip_uV, mapped onto [v_min_V, v_max_V].
struct ClipAbsMap {
  double clip_uV = 300.0;
  double v_min_V = 0.100;
  double v_max_V = 0.200;
  double width_s = 1.0 / kEegSampleRate;
};

/// Static features: one pulse per feature, linear over the training range.
struct StaticLevels {
  double v_min_V = 0.100;
  double v_max_V = 0.200;
  double width_s = 2.5;
};

using EncoderSpec =
    std::variant<BinaryLevels, AmplitudeMap, ClipAbsMap, StaticLevels>;

/// Throws InvalidInput if the spec violates its invariants
/// (v_min < v_max, 0 < duty <= 1, clip > 0, positive widths).
void validate(const EncoderSpec& spec);

PulseTrain encode_binary(std::span<const std::uint8_t> bits,
                         const BinaryLevels& spec = {});
PulseTrain encode_amplitude(std::span<const double> u,
                            const AmplitudeMap& spec = {});
PulseTrain encode_eeg(std::span<const double> samples_uV,
                      const ClipAbsMap& spec = {});

struct FeatureRange {
  double min;
  double max;
};

struct StaticEncoding {
  std::vector<PulseTrain> trains;
  /// Features that fell outside their range and were clamped.
  std::size_t clamped = 0;
};

/// One single-segment train per feature. Values outside their range are
/// clamped to it and counted.
StaticEncoding encode_static(std::span<const double> features,
                             std::span<const FeatureRange> ranges,
                             const StaticLevels& spec = {});

/// Voltage an AmplitudeMap assigns to `u`, without range checks.
double amplitude_for(double u, const AmplitudeMap& spec);
/// Voltage a ClipAbsMap assigns to a sample.
double amplitude_for(double sample_uV, const ClipAbsMap& spec);

/// `count` AmplitudeMaps identical to `base` except for frame_s, which runs
/// in equal steps from `shortest_s` to `longest_s` inclusive.
std::vector<AmplitudeMap> frame_width_ladder(const AmplitudeMap& base,
                                             std::size_t count,
                                             double shortest_s,
                                             double longest_s);

}  // namespace memcap
