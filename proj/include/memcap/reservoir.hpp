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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "memcap/device.hpp"
#include "memcap/encoding.hpp"
#include "memcap/energy.hpp"
#include "memcap/random.hpp"

namespace memcap {

/// Several devices sharing a base design with small fabrication spread.
struct DeviceBank {
  std::vector<MemcapacitorParams> devices;
  std::uint64_t seed = 0;
  double rel_sigma = 0.0;
};

/// `n` copies of `base` whose R0 and W0 are scaled by independent factors
/// (1 + rel_sigma * g), g standard normal truncated to +-3.
DeviceBank make_device_bank(const MemcapacitorParams& base, std::size_t n,
                            double rel_sigma, std::uint64_t seed);

struct ReservoirOptions {
  double dt = 1e-3;
  double w_min_fraction = kDefaultWMinFraction;
  /// Standard deviation of the zero-mean Gaussian added to every sampled
  /// C/C0 value. 0 disables the hook.
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  double charge_factor = 1.0;
  /// Worker threads for independent lanes.
  unsigned jobs = 1;
};

/// Result of integrating many devices through one shared segment schedule.
struct LockstepResult {
  std::size_t segments = 0;
  std::size_t lanes = 0;
  /// C/C0 at the end of every segment, segment-major.
  std::vector<double> ratio;
  std::vector<double> C0;
  /// C/C0 before the first segment.
  std::vector<double> initial_ratio;
  std::vector<MemcapacitorState> final_state;
  std::vector<std::uint32_t> floor_hits;

  double at(std::size_t segment, std::size_t lane) const {
    return ratio[segment * lanes + lane];
  }
};

/// Integrates every lane through the same segment durations. Amplitudes are
/// segment-major (`amplitudes[segment * lanes + lane]`). Lanes start at
/// rest unless `initial` supplies one state per lane. Runs on the active
/// kernel variant; results do not depend on `options.jobs`.
LockstepResult run_lockstep(std::span<const MemcapacitorParams> lanes,
                            std::span<const double> durations,
                            std::span<const double> amplitudes,
                            const ReservoirOptions& options,
                            std::span<const MemcapacitorState> initial = {});

struct ReservoirRun {
  /// C/C0 at the end of every sampled segment.
  std::vector<double> samples;
  EnergyReport energy;
  MemcapacitorState final_state;
  std::size_t floor_hits = 0;
};

/// Drives one device with `train` and samples the normalized capacitance at
/// the end of each sampled segment. Noise (if enabled) is drawn from `rng`.
ReservoirRun run_reservoir(const PulseTrain& train,
                           const MemcapacitorParams& params,
                           const ReservoirOptions& options,
                           std::optional<MemcapacitorState> initial = {},
                           Rng* rng = nullptr);

/// Elements every_k-1, 2*every_k-1, ... Throws InvalidInput unless the
/// length is a multiple of every_k.
std::vector<double> select_virtual_nodes(std::span<const double> seq,
                                         std::size_t every_k);

struct IntegratedFeatures {
  std::vector<double> features;
  std::size_t dropped = 0;  // trailing samples that did not fill a window
};

/// Rectangular integral of each full window: sum of the window * period.
IntegratedFeatures integrate_features(std::span<const double> seq,
                                      std::size_t window, double period);

/// Row-major examples x features matrix of reservoir responses.
class StateMatrix {
 public:
  StateMatrix() = default;
  StateMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  /// Rows `indices` in the given order, names and labels carried along.
  StateMatrix select_rows(std::span<const std::size_t> indices) const;

  /// Throws InvalidInput on any non-finite entry.
  void check_finite() const;

  std::vector<std::string> column_names;
  /// Class or target per row; empty when unlabeled.
  std::vector<double> row_labels;

  friend bool operator==(const StateMatrix&, const StateMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// `d<device>_e<encoding>_n<node>`
std::string column_name(std::size_t device, std::size_t encoding,
                        std::size_t node);

/// CSV with a header of column names; labels, when present, go in a final
/// `label` column.
std::string format_state_matrix_csv(const StateMatrix& m);
StateMatrix parse_state_matrix_csv(const std::string& text,
                                   const std::string& origin = "<string>");

namespace nodes {
/// Every sampled segment end is a node.
struct EachSample {};
/// Every k-th sample (select_virtual_nodes). With `truncate`, a trailing
/// partial interval is dropped instead of being an error.
struct EveryK {
  std::size_t k = 1;
  bool truncate = false;
};
/// Window integrals (integrate_features) with the given sample period.
struct Integrate {
  std::size_t window = 1;
  double period = 1.0;
};
}  // namespace nodes

using NodeSpec = std::variant<nodes::EachSample, nodes::EveryK, nodes::Integrate>;

/// Applies a node spec to one run's samples.
std::vector<double> extract_nodes(std::span<const double> samples,
                                  const NodeSpec& spec,
                                  std::size_t* dropped = nullptr);

struct BuiltStates {
  StateMatrix matrix;
  /// Reservoir energy per row (all devices and encodings), J.
  std::vector<EnergyReport> energy;
  std::size_t floor_hits = 0;
  std::size_t dropped_samples = 0;
};

/// Non-streaming state matrix: every (example, device, encoder) run starts
/// from rest. Columns are device-major, encoder-minor, then node.
BuiltStates build_state_matrix(const std::vector<std::vector<double>>& examples,
                               const DeviceBank& bank,
                               std::span<const EncoderSpec> encoders,
                               const NodeSpec& nodes,
                               const ReservoirOptions& options);

/// Streaming state matrix for a frame sequence: each (device, encoder) pair
/// runs once over the whole sequence and keeps its state between frames.
/// Row t holds the end-of-on-pulse C/C0 of frame t for every pair, in the
/// same column order as build_state_matrix.
BuiltStates build_streaming_state_matrix(std::span<const double> sequence,
                                         const DeviceBank& bank,
                                         std::span<const AmplitudeMap> encoders,
                                         const ReservoirOptions& options);

/// Adds N(0, sigma^2) to every value. No-op for sigma == 0.
void apply_noise(std::span<double> values, double sigma, Rng& rng);

}  // namespace memcap
