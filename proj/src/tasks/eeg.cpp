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
#include "memcap/tasks.hpp"

namespace memcap {

TaskReport run_eeg_task(const Config& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Settings s(cfg);
  const CommonSettings common = read_common(s, 1e-4);
  const auto dir = s.path("eeg.data_dir");
  if (!dir) {
    throw UsageError("config must set eeg.data_dir to a directory holding "
                     "Z/*.txt and S/*.txt (4097 samples per file)");
  }
  const auto records = load_eeg_bonn(*dir);

  ClipAbsMap enc;
  enc.clip_uV = s.real("encoding.clip_uV", enc.clip_uV);
  enc.v_min_V = s.real("encoding.v_min", enc.v_min_V);
  enc.v_max_V = s.real("encoding.v_max", enc.v_max_V);
  enc.width_s = s.real("encoding.width_s", enc.width_s);
  const std::size_t window = s.count("eeg.window", 60);
  const bool integrate = s.flag("eeg.integrate", true);
  const double test_fraction = s.real("eeg.test_fraction", 0.2);
  LogisticConfig lc = read_logistic(s);
  lc.jobs = common.reservoir.jobs;

  NodeSpec spec = nodes::EveryK{window, true};
  if (integrate) spec = nodes::Integrate{window, enc.width_s};
  DeviceBank bank;
  bank.devices = {common.params};
  std::vector<std::vector<double>> examples;
  std::vector<int> labels;
  for (const auto& r : records) {
    examples.push_back(r.samples);
    labels.push_back(r.label);
  }
  const EncoderSpec encoders[] = {enc};
  const BuiltStates built =
      build_state_matrix(examples, bank, encoders, spec, common.reservoir);

  Rng split_rng = make_rng(common.seed, "split");
  const Split split = stratified_split(labels, test_fraction, split_rng);
  std::vector<int> ytr, yte;
  for (auto i : split.train) ytr.push_back(labels[i]);
  for (auto i : split.test) yte.push_back(labels[i]);
  const StateMatrix Xtr = built.matrix.select_rows(split.train);
  const StateMatrix Xte = built.matrix.select_rows(split.test);
  const LinearReadout readout = train_logistic_ovr(Xtr, ytr, lc);
  std::vector<EnergyReport> test_energy;
  for (auto i : split.test) test_energy.push_back(built.energy[i]);

  TaskReport report;
  report.task = "eeg";
  report.seed = common.seed;
  report.results["variant"] = integrate ? "integrated" : "plain";
  report.results["records"] = records.size();
  report.results["features"] = built.matrix.cols();
  report.results["dropped_samples_per_record"] =
      built.dropped_samples / records.size();
  report.results["train_accuracy"] = *evaluate_classification(readout, Xtr, ytr).accuracy;
  report.results["test"] = to_json(evaluate_classification(readout, Xte, yte));
  report.results["energy_test"] = to_json(combine(test_energy));
  report.results["floor_hits"] = built.floor_hits;
  StateMatrix labelled = built.matrix;
  labelled.row_labels.assign(labels.begin(), labels.end());
  report.artifacts["states.csv"] = format_state_matrix_csv(labelled);
  report.config = s.used();
  report.wall_time_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace memcap
