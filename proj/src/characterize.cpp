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

#include "memcap/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "memcap/errors.hpp"

namespace memcap {

PpfResult run_ppf(const MemcapacitorParams& params, const PpfOptions& opts,
                  const SimulationOptions& sim) {
  if (opts.pulses == 0) throw InvalidInput("PPF needs at least one pulse");
  PulseTrain train;
  for (std::size_t k = 0; k < opts.pulses; ++k) {
    train.add(opts.amplitude_V, opts.pulse_s);
    if (k + 1 < opts.pulses) train.add(0.0, opts.gap_s, false);
  }
  SimulationOptions so = sim;
  so.sampling = sample::SegmentEnds{};
  PpfResult out;
  const auto ends = simulate(train, params, so);
  // Sample 0 is the initial state; segment k ends at sample k + 1.
  for (std::size_t k = 0; k < train.size(); ++k) {
    if (train.segments()[k].sampled) {
      out.peak_ratio.push_back(ends.capacitance[k + 1] / ends.C0);
    }
  }
  for (double p : out.peak_ratio) out.facilitation.push_back(p / out.peak_ratio[0]);
  out.monotone = std::is_sorted(out.peak_ratio.begin(), out.peak_ratio.end());
  so.sampling = sample::EveryStep{};
  out.trace = simulate(train, params, so);
  return out;
}

double lobe_area(std::span<const double> v, std::span<const double> y) {
  if (v.size() != y.size()) throw DimensionMismatch("lobe_area: length mismatch");
  double total = 0.0;
  double lobe = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    lobe += 0.5 * (y[i] + y[i - 1]) * (v[i] - v[i - 1]);
    const bool returned = v[i] == 0.0 || (v[i] > 0.0) != (v[i - 1] > 0.0);
    if (returned) {
      total += std::abs(lobe);
      lobe = 0.0;
    }
  }
  return total + std::abs(lobe);
}

HysteresisResult run_hysteresis(const MemcapacitorParams& params,
                                const HysteresisOptions& opts,
                                const SimulationOptions& sim) {
  if (!(opts.frequency_Hz > 0.0) || opts.cycles == 0) {
    throw InvalidInput("hysteresis needs a positive frequency and >= 1 cycle");
  }
  const double period = 1.0 / opts.frequency_Hz;
  const auto per_cycle = static_cast<std::size_t>(std::llround(period / sim.dt));
  const std::size_t n = per_cycle * opts.cycles;
  PulseTrain train;
  for (std::size_t i = 0; i < n; ++i) {
    const double t_mid = (static_cast<double>(i) + 0.5) * sim.dt;
    train.add(opts.amplitude_V *
                  std::sin(2.0 * std::numbers::pi * opts.frequency_Hz * t_mid),
              sim.dt);
  }
  SimulationOptions so = sim;
  so.sampling = sample::SegmentEnds{};
  HysteresisResult out;
  out.trace = simulate(train, params, so);
  const auto ratio = out.trace.normalized();

  // Final cycle in the (v, C/C0) plane; samples 1..n carry the drive.
  const std::size_t first = 1 + n - per_cycle;
  out.loop_area = lobe_area(std::span(out.trace.voltage).subspan(first),
                            std::span(ratio).subspan(first));

  for (std::size_t i = 1; i + 1 < out.trace.size(); ++i) {
    const double a = out.trace.voltage[i];
    const double b = out.trace.voltage[i + 1];
    if ((a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)) {
      out.max_zero_crossing_deviation =
          std::max(out.max_zero_crossing_deviation, std::abs(ratio[i] - 1.0));
    }
  }
  out.pinched = out.max_zero_crossing_deviation < opts.pinch_tolerance;
  return out;
}

DecayResult run_decay(const MemcapacitorParams& params, const DecayOptions& opts,
                      const SimulationOptions& sim) {
  SimulationOptions so = sim;
  so.sampling = sample::SegmentEnds{};
  const auto hold = simulate(PulseTrain({{opts.amplitude_V, opts.hold_s}}), params, so);

  so.initial = hold.final_state;
  so.initial->t = 0.0;
  so.sampling = sample::EveryStep{};
  DecayResult out;
  out.trace = simulate(PulseTrain({{0.0, opts.max_wait_s}}), params, so);
  const auto ratio = out.trace.normalized();
  out.ratio_at_release = ratio.front();
  // First sample after which the response never leaves the band again.
  std::size_t last_out = 0;
  bool any_out = false;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (std::abs(ratio[i] - 1.0) > opts.band) {
      last_out = i;
      any_out = true;
    }
  }
  if (!any_out) {
    out.settled = true;
    out.decay_time_s = 0.0;
  } else if (last_out + 1 < ratio.size()) {
    out.settled = true;
    out.decay_time_s = out.trace.times[last_out + 1];
  }
  return out;
}

std::vector<SweepPoint> run_sweep(const MemcapacitorParams& params,
                                  const SweepOptions& opts) {
  if (!(opts.increment_V > 0.0) || !(opts.max_V >= 0.0)) {
    throw InvalidInput("sweep needs a positive increment and non-negative range");
  }
  const auto half = static_cast<long long>(std::llround(opts.max_V / opts.increment_V));
  const double C0 = params.rest_capacitance();
  std::vector<SweepPoint> out;
  for (long long k = -half; k <= half; ++k) {
    const double v = static_cast<double>(k) * opts.increment_V;
    const auto ss = steady_state(v, params);
    out.push_back({v, capacitance({ss.R, ss.W, 0.0}, params) / C0, ss.R, ss.W});
  }
  return out;
}

}  // namespace memcap
