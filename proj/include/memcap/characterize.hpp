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
#include <vector>

#include "memcap/device.hpp"

namespace memcap {

/// Equal-amplitude pulses separated by 0 V gaps.
struct PpfOptions {
  double amplitude_V = 0.200;
  double pulse_s = 0.5;
  double gap_s = 0.25;
  std::size_t pulses = 4;
};

struct PpfResult {
  CapacitanceTrace trace;
  std::vector<double> peak_ratio;  // C/C0 at the end of each pulse
  std::vector<double> facilitation;  // peak_ratio[k] / peak_ratio[0]
  bool monotone = false;           // peaks non-decreasing
};

/// Sinusoid held piecewise constant over each integration step, sampled at
/// the step midpoint.
struct HysteresisOptions {
  double amplitude_V = 0.150;
  double frequency_Hz = 0.05;
  std::size_t cycles = 2;
  double pinch_tolerance = 0.02;  // allowed |C/C0 - 1| where v crosses 0
};

struct HysteresisResult {
  CapacitanceTrace trace;
  /// Sum of the absolute areas of the lobes of the final cycle in the
  /// (v, C/C0) plane, V.
  double loop_area = 0.0;
  /// Largest |C/C0 - 1| where the drive changes sign.
  double max_zero_crossing_deviation = 0.0;
  bool pinched = false;
};

struct DecayOptions {
  double amplitude_V = 0.150;
  double hold_s = 10.0;
  double max_wait_s = 30.0;
  double band = 0.01;  // "back at rest" means |C/C0 - 1| <= band
};

struct DecayResult {
  CapacitanceTrace trace;       // relaxation phase only, time from release
  double ratio_at_release = 0.0;
  double decay_time_s = 0.0;    // first time after release inside the band
  bool settled = false;
};

struct SweepOptions {
  double max_V = 0.200;
  double increment_V = 0.005;
};

struct SweepPoint {
  double v;
  double ratio;  // C_ss / C0
  double R;
  double W;
};

struct CharacterizeOptions {
  SimulationOptions sim;
  PpfOptions ppf;
  HysteresisOptions hysteresis;
  DecayOptions decay;
  SweepOptions sweep;
};

PpfResult run_ppf(const MemcapacitorParams& params, const PpfOptions& opts,
                  const SimulationOptions& sim = {});
HysteresisResult run_hysteresis(const MemcapacitorParams& params,
                                const HysteresisOptions& opts,
                                const SimulationOptions& sim = {});
DecayResult run_decay(const MemcapacitorParams& params, const DecayOptions& opts,
                      const SimulationOptions& sim = {});
/// Steady-state C/C0 from -max_V to +max_V in `increment_V` steps.
std::vector<SweepPoint> run_sweep(const MemcapacitorParams& params,
                                  const SweepOptions& opts);

/// Sum of the absolute signed areas enclosed by each excursion of a closed
/// (v, y) curve between successive returns of v to zero.
double lobe_area(std::span<const double> v, std::span<const double> y);

}  // namespace memcap
