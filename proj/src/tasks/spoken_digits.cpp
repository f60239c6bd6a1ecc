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

#include <chrono>

#include "memcap/errors.hpp"
#include "memcap/io.hpp"
#include "memcap/tasks.hpp"

namespace memcap {

namespace {

void check_steps(std::size_t steps, std::size_t node_every) {
  if (node_every == 0 || steps == 0 || steps > kCochleogramSteps ||
      steps % node_every != 0) {
    throw InvalidInput("utterance length " + std::to_string(steps) +
                       " must be a positive multiple of " +
                       std::to_string(node_every) + " and at most " +
                       std::to_string(kCochleogramSteps));
  }
}

double level(std::uint8_t bit, const BinaryLevels& levels) {
  return bit ? levels.high_V : levels.low_V;
}

void add_noise_by_row(StateMatrix& m, const ReservoirOptions& options) {
  if (options.noise_sigma <= 0.0) return;
  Rng rng(options.noise_seed);
  for (std::size_t r = 0; r < m.rows(); ++r) apply_noise(m.row(r), options.noise_sigma, rng);
}

StateMatrix empty_features(std::size_t examples, std::size_t per_channel) {
  StateMatrix m(examples, kCochleogramChannels * per_channel);
  for (std::size_t ch = 0; ch < kCochleogramChannels; ++ch) {
    for (std::size_t n = 0; n < per_channel; ++n) {
      m.column_names.push_back(column_name(0, ch, n));
    }
  }
  return m;
}

}  // namespace

SpokenDigitFeatures spoken_digit_features(std::span<const Cochleogram> set,
                                          const ChannelDedup& dedup,
                                          const MemcapacitorParams& params,
                                          const BinaryLevels& levels,
                                          const ReservoirOptions& options,
                                          std::size_t steps,
                                          std::size_t node_every) {
  check_steps(steps, node_every);
  validate(EncoderSpec(levels));
  if (dedup.back_map.size() != set.size()) {
    throw DimensionMismatch("dedup map does not match the cochleogram set");
  }
  const std::size_t U = dedup.uniques.size();
  const std::size_t per_channel = steps / node_every;
  std::vector<double> durations(steps, levels.width_s);
  std::vector<double> amps(steps * U);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t u = 0; u < U; ++u) amps[t * U + u] = level(dedup.uniques[u][t], levels);
  }
  const std::vector<MemcapacitorParams> lanes(U, params);
  const auto res = run_lockstep(lanes, durations, amps, options);

  std::vector<std::vector<double>> nodes(U);
  std::vector<EnergyReport> energy(U);
  std::vector<double> seq(steps), lane_amps(steps), C_before(steps);
  for (std::size_t u = 0; u < U; ++u) {
    for (std::size_t t = 0; t < steps; ++t) {
      seq[t] = res.at(t, u);
      lane_amps[t] = amps[t * U + u];
      C_before[t] = res.C0[u] * (t == 0 ? res.initial_ratio[u] : res.at(t - 1, u));
    }
    nodes[u] = select_virtual_nodes(seq, node_every);
    energy[u] = edge_energy(lane_amps, durations, C_before, options.charge_factor);
  }

  SpokenDigitFeatures out;
  out.matrix = empty_features(set.size(), per_channel);
  out.energy.reserve(set.size());
  std::vector<EnergyReport> parts(kCochleogramChannels);
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto row = out.matrix.row(i);
    for (std::size_t ch = 0; ch < kCochleogramChannels; ++ch) {
      const std::size_t u = dedup.back_map[i][ch];
      std::copy(nodes[u].begin(), nodes[u].end(),
                row.begin() + static_cast<std::ptrdiff_t>(ch * per_channel));
      parts[ch] = energy[u];
    }
    out.energy.push_back(combine(parts));
    out.matrix.row_labels.push_back(set[i].label);
  }
  add_noise_by_row(out.matrix, options);
  return out;
}

StateMatrix spoken_digit_features_direct(std::span<const Cochleogram> set,
                                         const MemcapacitorParams& params,
                                         const BinaryLevels& levels,
                                         const ReservoirOptions& options,
                                         std::size_t steps,
                                         std::size_t node_every) {
  check_steps(steps, node_every);
  const std::size_t per_channel = steps / node_every;
  StateMatrix m = empty_features(set.size(), per_channel);
  ReservoirOptions quiet = options;
  quiet.noise_sigma = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t ch = 0; ch < kCochleogramChannels; ++ch) {
      const auto bits = set[i].channel(ch).first(steps);
      const auto run = run_reservoir(encode_binary(bits, levels), params, quiet);
      const auto n = select_virtual_nodes(run.samples, node_every);
      std::copy(n.begin(), n.end(),
                m.row(i).begin() + static_cast<std::ptrdiff_t>(ch * per_channel));
    }
    m.row_labels.push_back(set[i].label);
  }
  add_noise_by_row(m, options);
  return m;
}

TaskReport run_spoken_digit_task(const Config& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Settings s(cfg);
  const CommonSettings common = read_common(s);

  std::vector<Cochleogram> set;
  std::string source;
  if (const auto dir = s.path("spoken.data_dir")) {
    set = load_cochleograms(*dir);
    source = "directory";
  } else {
    SyntheticCochleogramOptions o;
    o.classes = s.count("synthetic.classes", o.classes);
    o.per_class = s.count("synthetic.per_class", o.per_class);
    o.block_steps = s.count("synthetic.block_steps", o.block_steps);
    o.onset_blocks = s.count("synthetic.onset_blocks", o.onset_blocks);
    o.onset_group = s.count("synthetic.onset_group", o.onset_group);
    o.active_fraction = s.real("synthetic.active_fraction", o.active_fraction);
    o.block_flip = s.real("synthetic.block_flip", o.block_flip);
    o.seed = derive_seed(common.seed, "synthetic");
    set = gen_synthetic_cochleograms(o);
    source = "synthetic";
  }

  BinaryLevels levels;
  levels.low_V = s.real("encoding.low_V", levels.low_V);
  levels.high_V = s.real("encoding.high_V", levels.high_V);
  levels.width_s = s.real("encoding.width_s", levels.width_s);
  const std::size_t node_every = s.count("spoken.node_every", 5);
  const auto steps_list = s.reals("spoken.steps", {10, 20, 25, 30, 40});
  const double test_fraction = s.real("spoken.test_fraction", 0.1);
  LogisticConfig lc = read_logistic(s);
  lc.jobs = common.reservoir.jobs;

  std::vector<int> labels;
  for (const auto& c : set) labels.push_back(c.label);
  Rng split_rng = make_rng(common.seed, "split");
  const Split split = stratified_split(labels, test_fraction, split_rng);
  std::vector<int> ytr, yte;
  for (auto i : split.train) ytr.push_back(labels[i]);
  for (auto i : split.test) yte.push_back(labels[i]);

  const ChannelDedup dedup = dedup_channels(set);
  TaskReport report;
  report.task = "spoken-digits";
  report.seed = common.seed;
  report.results["source"] = source;
  report.results["examples"] = set.size();
  report.results["train_examples"] = split.train.size();
  report.results["test_examples"] = split.test.size();
  report.results["total_channels"] = set.size() * kCochleogramChannels;
  report.results["unique_channels"] = dedup.uniques.size();

  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (double st : steps_list) {
    if (!(st > 0.0) || st != std::floor(st)) {
      throw UsageError("spoken.steps entries must be positive integers");
    }
    const auto steps = static_cast<std::size_t>(st);
    const auto feats = spoken_digit_features(set, dedup, common.params, levels,
                                             common.reservoir, steps, node_every);
    const StateMatrix Xtr = feats.matrix.select_rows(split.train);
    const StateMatrix Xte = feats.matrix.select_rows(split.test);
    const LinearReadout readout = train_logistic_ovr(Xtr, ytr, lc);
    std::vector<EnergyReport> test_energy;
    for (auto i : split.test) test_energy.push_back(feats.energy[i]);

    nlohmann::ordered_json r;
    r["steps"] = steps;
    r["features"] = feats.matrix.cols();
    r["readout"] = {readout.features, readout.outputs};
    r["train_accuracy"] = *evaluate_classification(readout, Xtr, ytr).accuracy;
    r["test"] = to_json(evaluate_classification(readout, Xte, yte));
    r["energy_test"] = to_json(combine(test_energy));
    runs.push_back(std::move(r));
    if (steps == kCochleogramSteps) {
      report.artifacts["states_full.csv"] = format_state_matrix_csv(feats.matrix);
    }
  }
  report.results["fractions"] = std::move(runs);
  report.config = s.used();
  report.wall_time_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace memcap
