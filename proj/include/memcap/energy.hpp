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

#include "memcap/device.hpp"
#include "memcap/pulse_train.hpp"

namespace memcap {

/// Charging energy of a memcapacitor run. Only rising voltage edges cost
/// energy; discharging edges are free.
struct EnergyReport {
  double energy_per_spike = 0.0;  // J, total / spike_count
  double total_energy = 0.0;      // J
  double mean_power = 0.0;        // W, total / duration
  std::size_t spike_count = 0;    // rising edges
  double pulse_width_s = 0.0;     // mean segment duration
  double duration_s = 0.0;
  double charge_factor = 1.0;     // 1.0 (C dV^2) or 0.5 (C dV^2 / 2)
};

/// Core accounting. Segment k has amplitude `amplitudes[k]` and the device
/// capacitance just before its leading edge is `C_before[k]`; the level
/// before the first segment is `previous_amplitude`. Every edge with
/// dV > 0 adds charge_factor * C_before * dV^2.
EnergyReport edge_energy(std::span<const double> amplitudes,
                         std::span<const double> durations,
                         std::span<const double> C_before,
                         double charge_factor = 1.0,
                         double previous_amplitude = 0.0);

/// Energy of a simulated run using only the trace. Edges are read from the
/// voltage column: where it rises between samples i-1 and i, the
/// capacitance at sample i-1 is used. Needs SegmentEnds or EveryStep
/// sampling.
EnergyReport energy_from_trace(const CapacitanceTrace& trace,
                               double charge_factor = 1.0);

/// As energy_from_trace, after checking that the trace was produced by
/// `train` (same amplitude sequence, same total duration within rounding).
/// Throws InvalidInput if they are misaligned.
EnergyReport memcap_energy(const CapacitanceTrace& trace,
                           const PulseTrain& train, double charge_factor = 1.0);

/// Sum of several runs: totals, spikes and durations add.
EnergyReport combine(std::span<const EnergyReport> runs);

/// Total energy, J, of a set of reservoir runs (a task's test set).
double reservoir_energy(std::span<const EnergyReport> runs);

}  // namespace memcap
