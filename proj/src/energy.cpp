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

#include "memcap/energy.hpp"

#include <cmath>

#include "memcap/errors.hpp"

namespace memcap {

namespace {

void check_factor(double f) {
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw InvalidInput("charge factor must be positive");
  }
}

void finish(EnergyReport& r) {
  r.energy_per_spike =
      r.spike_count ? r.total_energy / static_cast<double>(r.spike_count) : 0.0;
  r.mean_power = r.duration_s > 0.0 ? r.total_energy / r.duration_s : 0.0;
}

}  // namespace

EnergyReport edge_energy(std::span<const double> amplitudes,
                         std::span<const double> durations,
                         std::span<const double> C_before,
                         double charge_factor, double previous_amplitude) {
  check_factor(charge_factor);
  if (amplitudes.size() != durations.size() ||
      amplitudes.size() != C_before.size()) {
    throw DimensionMismatch("edge_energy: amplitudes, durations and "
                            "capacitances must have equal length");
  }
  EnergyReport r;
  r.charge_factor = charge_factor;
  double prev = previous_amplitude;
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    const double dv = amplitudes[k] - prev;
    if (dv > 0.0) {
      r.total_energy += charge_factor * C_before[k] * dv * dv;
      ++r.spike_count;
    }
    r.duration_s += durations[k];
    prev = amplitudes[k];
  }
  r.pulse_width_s = amplitudes.empty()
                        ? 0.0
                        : r.duration_s / static_cast<double>(amplitudes.size());
  finish(r);
  return r;
}

EnergyReport energy_from_trace(const CapacitanceTrace& trace,
                               double charge_factor) {
  check_factor(charge_factor);
  if (trace.size() < 2) {
    throw InvalidInput("energy: trace needs at least two samples");
  }
  EnergyReport r;
  r.charge_factor = charge_factor;
  std::size_t runs = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double dv = trace.voltage[i] - trace.voltage[i - 1];
    if (i == 1 || dv != 0.0) ++runs;
    if (dv > 0.0) {
      r.total_energy += charge_factor * trace.capacitance[i - 1] * dv * dv;
      ++r.spike_count;
    }
  }
  r.duration_s = trace.times.back() - trace.times.front();
  r.pulse_width_s = r.duration_s / static_cast<double>(runs);
  finish(r);
  return r;
}

EnergyReport memcap_energy(const CapacitanceTrace& trace,
                           const PulseTrain& train, double charge_factor) {
  if (train.empty() || trace.size() < 2) {
    throw InvalidInput("energy: empty trace or train");
  }
  // The amplitude runs seen in the trace must be the train's, in order.
  std::vector<double> train_levels;
  for (const auto& s : train.segments()) {
    if (train_levels.empty() || train_levels.back() != s.amplitude) {
      train_levels.push_back(s.amplitude);
    }
  }
  std::vector<double> trace_levels;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace_levels.empty() || trace_levels.back() != trace.voltage[i]) {
      trace_levels.push_back(trace.voltage[i]);
    }
  }
  const double span_s = trace.times.back() - trace.times.front();
  const double slack = 0.5 * static_cast<double>(train.size()) *
                           (span_s / static_cast<double>(trace.size() - 1)) +
                       1e-12;
  if (trace_levels != train_levels ||
      std::abs(span_s - train.total_duration()) > slack) {
    throw InvalidInput("energy: trace and pulse train are misaligned");
  }
  EnergyReport r = energy_from_trace(trace, charge_factor);
  r.duration_s = train.total_duration();
  r.pulse_width_s = r.duration_s / static_cast<double>(train.size());
  finish(r);
  return r;
}

EnergyReport combine(std::span<const EnergyReport> runs) {
  EnergyReport r;
  double widths = 0.0;
  for (const auto& run : runs) {
    r.total_energy += run.total_energy;
    r.spike_count += run.spike_count;
    r.duration_s += run.duration_s;
    r.charge_factor = run.charge_factor;
    widths += run.pulse_width_s;
  }
  r.pulse_width_s = runs.empty() ? 0.0 : widths / static_cast<double>(runs.size());
  finish(r);
  return r;
}

double reservoir_energy(std::span<const EnergyReport> runs) {
  double total = 0.0;
  for (const auto& run : runs) total += run.total_energy;
  return total;
}

}  // namespace memcap
