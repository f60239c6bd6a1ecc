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

#include "memcap/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memcap/errors.hpp"
#include "memcap/io.hpp"

namespace memcap {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(what);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

void check_levels(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "encoder: v_min must be below v_max");
}

double lerp(double lo, double hi, double fraction) {
  return lo + (hi - lo) * fraction;
}

}  // namespace

void validate(const EncoderSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BinaryLevels>) {
          require(std::isfinite(s.low_V) && std::isfinite(s.high_V) &&
                      s.low_V < s.high_V,
                  "encoder: low level must be below high level");
          require(positive(s.width_s), "encoder: width must be positive");
        } else if constexpr (std::is_same_v<T, AmplitudeMap>) {
          check_levels(s.v_min_V, s.v_max_V);
          require(std::isfinite(s.in_min) && std::isfinite(s.in_max) &&
                      s.in_min < s.in_max,
                  "encoder: in_min must be below in_max");
          require(positive(s.frame_s), "encoder: frame must be positive");
          require(s.duty > 0.0 && s.duty <= 1.0,
                  "encoder: duty must be in (0, 1]");
        } else if constexpr (std::is_same_v<T, ClipAbsMap>) {
          check_levels(s.v_min_V, s.v_max_V);
          require(positive(s.clip_uV), "encoder: clip must be positive");
          require(positive(s.width_s), "encoder: width must be positive");
        } else {
          check_levels(s.v_min_V, s.v_max_V);
          require(positive(s.width_s), "encoder: width must be positive");
        }
      },
      spec);
}

PulseTrain encode_binary(std::span<const std::uint8_t> bits,
                         const BinaryLevels& spec) {
  validate(spec);
  if (bits.empty()) throw InvalidInput("encode_binary: no bits");
  PulseTrain train;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) {
      throw InvalidInput("encode_binary: symbol " + std::to_string(bits[i]) +
                         " at position " + std::to_string(i) +
                         " is not a bit");
    }
    train.add(bits[i] ? spec.high_V : spec.low_V, spec.width_s);
  }
  return train;
}

double amplitude_for(double u, const AmplitudeMap& spec) {
  return lerp(spec.v_min_V, spec.v_max_V,
              (u - spec.in_min) / (spec.in_max - spec.in_min));
}

PulseTrain encode_amplitude(std::span<const double> u,
                            const AmplitudeMap& spec) {
  validate(spec);
  if (u.empty()) throw InvalidInput("encode_amplitude: no input");
  const double on = spec.duty * spec.frame_s;
  const double off = spec.frame_s - on;
  PulseTrain train;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] >= spec.in_min && u[i] <= spec.in_max)) {
      throw InvalidInput("encode_amplitude: input " + io::format_double(u[i]) +
                         " at position " + std::to_string(i) +
                         " is outside [" + io::format_double(spec.in_min) +
                         ", " + io::format_double(spec.in_max) + "]");
    }
    train.add(amplitude_for(u[i], spec), on);
    if (off > 0.0) train.add(0.0, off, /*sampled=*/false);
  }
  return train;
}

double amplitude_for(double sample_uV, const ClipAbsMap& spec) {
  const double clipped = std::min(std::abs(sample_uV), spec.clip_uV);
  return lerp(spec.v_min_V, spec.v_max_V, clipped / spec.clip_uV);
}

PulseTrain encode_eeg(std::span<const double> samples_uV,
                      const ClipAbsMap& spec) {
  validate(spec);
  if (samples_uV.empty()) throw InvalidInput("encode_eeg: no samples");
  PulseTrain train;
  for (double x : samples_uV) {
    if (std::isnan(x)) throw InvalidInput("encode_eeg: NaN sample");
    train.add(amplitude_for(x, spec), spec.width_s);
  }
  return train;
}

StaticEncoding encode_static(std::span<const double> features,
                             std::span<const FeatureRange> ranges,
                             const StaticLevels& spec) {
  validate(spec);
  if (features.size() != ranges.size()) {
    throw DimensionMismatch("encode_static: one range per feature required");
  }
  StaticEncoding out;
  out.trains.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto [lo, hi] = ranges[i];
    if (!(hi > lo) || !std::isfinite(features[i])) {
      throw InvalidInput("encode_static: degenerate range or non-finite "
                         "feature at index " + std::to_string(i));
    }
    double x = features[i];
    if (x < lo || x > hi) {
      x = std::clamp(x, lo, hi);
      ++out.clamped;
    }
    PulseTrain train;
    train.add(lerp(spec.v_min_V, spec.v_max_V, (x - lo) / (hi - lo)),
              spec.width_s);
    out.trains.push_back(std::move(train));
  }
  return out;
}

std::vector<AmplitudeMap> frame_width_ladder(const AmplitudeMap& base,
                                             std::size_t count,
                                             double shortest_s,
                                             double longest_s) {
  if (count == 0) throw InvalidInput("frame_width_ladder: count must be >= 1");
  std::vector<AmplitudeMap> out(count, base);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].frame_s =
        count == 1 ? shortest_s
                   : shortest_s + (longest_s - shortest_s) *
                                      static_cast<double>(i) /
                                      static_cast<double>(count - 1);
    validate(out[i]);
  }
  return out;
}

}  // namespace memcap
