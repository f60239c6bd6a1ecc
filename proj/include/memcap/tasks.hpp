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
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memcap/config.hpp"
#include "memcap/readout.hpp"
#include "memcap/reservoir.hpp"

namespace memcap {

// ---------------------------------------------------------------- datasets

/// Input u in [0, 0.5] and the response of the time-lag-two system
/// y(t) = 0.4 y(t-1) + 0.4 y(t-1) y(t-2) + 0.6 u(t)^3 + 0.1.
struct SecondOrderSeries {
  std::vector<double> u;
  std::vector<double> y;
  std::uint64_t seed = 0;
};

/// Response of the second-order system to `u`, zero history.
std::vector<double> second_order_response(std::span<const double> u);
SecondOrderSeries gen_second_order(std::size_t n, std::uint64_t seed);

inline constexpr std::size_t kCochleogramChannels = 50;
inline constexpr std::size_t kCochleogramSteps = 40;

/// Binary channels x timesteps firing pattern of one utterance.
struct Cochleogram {
  std::vector<std::uint8_t> bits;  // row-major, channels x steps
  int label = 0;
  std::string id;

  std::span<const std::uint8_t> channel(std::size_t c) const {
    return std::span(bits).subspan(c * kCochleogramSteps, kCochleogramSteps);
  }
};

/// Reads every `digit_<label>_<idx>.csv` in `dir` (50 lines of 40 comma
/// separated 0/1 values), sorted by file name.
std::vector<Cochleogram> load_cochleograms(const std::filesystem::path& dir);
Cochleogram parse_cochleogram_csv(const std::string& text, int label,
                                  const std::string& id,
                                  const std::string& origin);
std::string format_cochleogram_csv(const Cochleogram& c);

struct ChannelDedup {
  /// Distinct channel bitstreams in first-occurrence order.
  std::vector<std::vector<std::uint8_t>> uniques;
  /// back_map[example][channel] indexes `uniques`.
  std::vector<std::vector<std::size_t>> back_map;
};

ChannelDedup dedup_channels(std::span<const Cochleogram> set);

/// Class-conditional synthetic cochleograms. Each class has a prototype
/// built from blocks of `block_steps` steps during which a channel is
/// either silent or firing. Onset blocks are shared by groups of
/// `onset_group` classes, so short prefixes are ambiguous. Each example
/// flips every (channel, block) cell of its prototype with probability
/// `block_flip`.
struct SyntheticCochleogramOptions {
  std::size_t classes = 10;
  std::size_t per_class = 50;
  std::size_t block_steps = 5;
  std::size_t onset_blocks = 2;
  std::size_t onset_group = 2;
  double active_fraction = 0.3;
  double block_flip = 0.04;
  std::uint64_t seed = 1;
};

std::vector<Cochleogram> gen_synthetic_cochleograms(
    const SyntheticCochleogramOptions& opts);

inline constexpr std::size_t kEegRecordLength = 4097;

struct EegRecord {
  std::vector<double> samples;  // uV
  int label = 0;                // 0 healthy (Z), 1 seizure (S)
  std::string id;
};

/// Reads `<dir>/Z/*.txt` and `<dir>/S/*.txt`, one integer per line.
std::vector<EegRecord> load_eeg_bonn(const std::filesystem::path& dir);
EegRecord parse_eeg_record(const std::string& text, int label,
                           const std::string& id, const std::string& origin);

struct IrisData {
  StateMatrix features;  // 150 x 4
  std::vector<int> labels;
  std::vector<std::string> class_names;
};

/// UCI layout: four numbers and a class name per line.
IrisData load_iris(const std::filesystem::path& path);
IrisData parse_iris_csv(const std::string& text, const std::string& origin);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class, a shuffled round(test_fraction * count) examples go to the
/// test side. Both index lists are returned sorted.
Split stratified_split(std::span<const int> labels, double test_fraction,
                       Rng& rng);

// ----------------------------------------------------------------- reports

struct TaskReport {
  std::string task;
  std::uint64_t seed = 0;
  /// Every key the run read, with the value actually used.
  std::map<std::string, std::string> config;
  nlohmann::ordered_json results;
  double wall_time_s = 0.0;
  /// Extra output files (name -> content), e.g. CSV matrices.
  std::map<std::string, std::string> artifacts;

  nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json to_json(const Metrics& m);
nlohmann::ordered_json to_json(const EnergyReport& e);

/// Records every value read so reports embed the resolved configuration.
class Settings {
 public:
  explicit Settings(const Config& cfg) : cfg_(cfg) {}

  double real(const std::string& key, double fallback);
  long long integer(const std::string& key, long long fallback);
  std::size_t count(const std::string& key, std::size_t fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::vector<double> reals(const std::string& key, std::vector<double> fallback);
  std::optional<std::filesystem::path> path(const std::string& key);
  std::uint64_t seed();

  const std::map<std::string, std::string>& used() const noexcept { return used_; }

 private:
  const Config& cfg_;
  std::map<std::string, std::string> used_;
};

/// Shared pieces of every task configuration.
struct CommonSettings {
  std::uint64_t seed = 0;
  MemcapacitorParams params;
  ReservoirOptions reservoir;
};

/// Reads run.seed, device.params, sim.* and energy.charge_factor.
CommonSettings read_common(Settings& s, double default_dt = 1e-3);
LinearConfig read_linear(Settings& s);
LogisticConfig read_logistic(Settings& s);

// ------------------------------------------------------------------- tasks

TaskReport run_second_order_task(const Config& cfg);
TaskReport run_linear_baseline(const Config& cfg);
TaskReport run_spoken_digit_task(const Config& cfg);
TaskReport run_eeg_task(const Config& cfg);
TaskReport run_iris_task(const Config& cfg);

/// Per-example features for the spoken-digit pipeline: one run per unique
/// channel, nodes every `node_every` steps over the first `steps` steps,
/// channels concatenated. Energy per example covers those steps only.
struct SpokenDigitFeatures {
  StateMatrix matrix;
  std::vector<EnergyReport> energy;
};

SpokenDigitFeatures spoken_digit_features(std::span<const Cochleogram> set,
                                          const ChannelDedup& dedup,
                                          const MemcapacitorParams& params,
                                          const BinaryLevels& levels,
                                          const ReservoirOptions& options,
                                          std::size_t steps,
                                          std::size_t node_every);

/// The same features computed without dedup: one run_reservoir per
/// (example, channel).
StateMatrix spoken_digit_features_direct(std::span<const Cochleogram> set,
                                         const MemcapacitorParams& params,
                                         const BinaryLevels& levels,
                                         const ReservoirOptions& options,
                                         std::size_t steps,
                                         std::size_t node_every);

}  // namespace memcap
