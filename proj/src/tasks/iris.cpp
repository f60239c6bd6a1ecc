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

#include <algorithm>
#include <chrono>

#include "memcap/errors.hpp"
#include "memcap/tasks.hpp"

namespace memcap {

TaskReport run_iris_task(const Config& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Settings s(cfg);
  const CommonSettings common = read_common(s);
  const auto path = s.path("iris.data");
  if (!path) throw UsageError("config must set iris.data to the 150-row iris CSV");
  const IrisData data = load_iris(*path);

  StaticLevels levels;
  levels.v_min_V = s.real("encoding.v_min", levels.v_min_V);
  levels.v_max_V = s.real("encoding.v_max", levels.v_max_V);
  levels.width_s = s.real("encoding.width_s", levels.width_s);
  const double test_fraction = s.real("iris.test_fraction", 0.4);
  LogisticConfig lc = read_logistic(s);

  Rng split_rng = make_rng(common.seed, "split");
  const Split split = stratified_split(data.labels, test_fraction, split_rng);

  // Encoder ranges come from the training split only.
  const std::size_t n_feat = data.features.cols();
  std::vector<FeatureRange> ranges(n_feat, {1e300, -1e300});
  for (auto i : split.train) {
    for (std::size_t f = 0; f < n_feat; ++f) {
      ranges[f].min = std::min(ranges[f].min, data.features(i, f));
      ranges[f].max = std::max(ranges[f].max, data.features(i, f));
    }
  }

  // One lane per (example, feature): a single pulse from rest.
  const std::size_t n = data.features.rows();
  std::vector<double> amps(n * n_feat);
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto enc = encode_static(data.features.row(i), ranges, levels);
    clamped += enc.clamped;
    for (std::size_t f = 0; f < n_feat; ++f) {
      amps[i * n_feat + f] = enc.trains[f].segments()[0].amplitude;
    }
  }
  const std::vector<MemcapacitorParams> lanes(n * n_feat, common.params);
  const double durations[] = {levels.width_s};
  const auto res = run_lockstep(lanes, durations, amps, common.reservoir);

  StateMatrix X(n, n_feat);
  X.column_names = data.features.column_names;
  std::vector<EnergyReport> energy(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<EnergyReport> parts;
    for (std::size_t f = 0; f < n_feat; ++f) {
      const std::size_t lane = i * n_feat + f;
      X(i, f) = res.at(0, lane);
      const double C_before[] = {res.C0[lane] * res.initial_ratio[lane]};
      parts.push_back(edge_energy(std::span(amps).subspan(lane, 1), durations,
                                  C_before, common.reservoir.charge_factor));
    }
    energy[i] = combine(parts);
  }
  if (common.reservoir.noise_sigma > 0.0) {
    Rng rng(common.reservoir.noise_seed);
    for (std::size_t i = 0; i < n; ++i) {
      apply_noise(X.row(i), common.reservoir.noise_sigma, rng);
    }
  }

  std::vector<int> ytr, yte;
  for (auto i : split.train) ytr.push_back(data.labels[i]);
  for (auto i : split.test) yte.push_back(data.labels[i]);
  const StateMatrix Xtr = X.select_rows(split.train);
  const StateMatrix Xte = X.select_rows(split.test);
  const LinearReadout readout = train_logistic_ovr(Xtr, ytr, lc);
  std::vector<EnergyReport> test_energy;
  for (auto i : split.test) test_energy.push_back(energy[i]);

  TaskReport report;
  report.task = "iris";
  report.seed = common.seed;
  report.results["readout"] = {readout.features, readout.outputs};
  report.results["train_examples"] = split.train.size();
  report.results["test_examples"] = split.test.size();
  report.results["clamped_test_features"] = clamped;
  report.results["train_accuracy"] = *evaluate_classification(readout, Xtr, ytr).accuracy;
  report.results["test"] = to_json(evaluate_classification(readout, Xte, yte));
  report.results["energy_test"] = to_json(combine(test_energy));
  X.row_labels.assign(data.labels.begin(), data.labels.end());
  report.artifacts["states.csv"] = format_state_matrix_csv(X);
  report.artifacts["readout_weights.csv"] = format_readout_weights_csv(readout);
  report.artifacts["readout.json"] = format_readout_metadata_json(readout);
  report.config = s.used();
  report.wall_time_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace memcap
