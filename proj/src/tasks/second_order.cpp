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

struct SeriesSplit {
  SecondOrderSeries series;
  std::size_t train = 0;
  std::size_t test = 0;
};

SeriesSplit read_series(Settings& s, std::uint64_t seed) {
  SeriesSplit out;
  out.train = s.count("second_order.train", 300);
  out.test = s.count("second_order.test", 100);
  if (out.train == 0 || out.test == 0) {
    throw UsageError("second_order.train and second_order.test must be >= 1");
  }
  out.series = gen_second_order(out.train + out.test, derive_seed(seed, "series"));
  return out;
}

std::vector<std::size_t> range(std::size_t b, std::size_t e) {
  std::vector<std::size_t> v;
  for (std::size_t i = b; i < e; ++i) v.push_back(i);
  return v;
}

// Trains on the first `train` rows, evaluates both halves and fills in the
// common report fields.
void fit_and_report(const StateMatrix& X, const SeriesSplit& sp,
                    const LinearConfig& lc, TaskReport& report) {
  const auto train_idx = range(0, sp.train);
  const auto test_idx = range(sp.train, sp.train + sp.test);
  const StateMatrix Xtr = X.select_rows(train_idx);
  const StateMatrix Xte = X.select_rows(test_idx);
  const std::span<const double> y(sp.series.y);
  const auto ytr = y.first(sp.train);
  const auto yte = y.subspan(sp.train, sp.test);

  const LinearReadout readout = train_linear(Xtr, ytr, lc);
  const auto ztr = predict(readout, Xtr);
  const auto zte = predict(readout, Xte);
  report.results["features"] = X.cols();
  report.results["train"] = to_json(evaluate_regression(ztr, ytr));
  report.results["test"] = to_json(evaluate_regression(zte, yte));

  std::string csv = "frame,split,u,y,prediction\n";
  for (std::size_t t = 0; t < sp.train + sp.test; ++t) {
    const bool is_train = t < sp.train;
    csv += std::to_string(t) + (is_train ? ",train," : ",test,") +
           io::format_double(sp.series.u[t]) + "," +
           io::format_double(sp.series.y[t]) + "," +
           io::format_double(is_train ? ztr[t] : zte[t - sp.train]) + "\n";
  }
  report.artifacts["predictions.csv"] = std::move(csv);
  report.artifacts["readout_weights.csv"] = format_readout_weights_csv(readout);
  report.artifacts["readout.json"] = format_readout_metadata_json(readout);
}

}  // namespace

TaskReport run_second_order_task(const Config& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Settings s(cfg);
  const CommonSettings common = read_common(s);
  const SeriesSplit sp = read_series(s, common.seed);

  const std::size_t n_dev = s.count("bank.devices", 5);
  const double rel_sigma = s.real("bank.rel_sigma", 0.02);
  const DeviceBank bank = make_device_bank(common.params, n_dev, rel_sigma,
                                           derive_seed(common.seed, "bank"));
  AmplitudeMap base;
  base.in_min = 0.0;
  base.in_max = 0.5;
  base.v_min_V = s.real("encoding.v_min", base.v_min_V);
  base.v_max_V = s.real("encoding.v_max", base.v_max_V);
  base.duty = s.real("encoding.duty", base.duty);
  const auto encoders = frame_width_ladder(
      base, s.count("encoding.frames", 10), s.real("encoding.shortest_s", 0.2),
      s.real("encoding.longest_s", 0.6));
  const LinearConfig lc = read_linear(s);

  BuiltStates built =
      build_streaming_state_matrix(sp.series.u, bank, encoders, common.reservoir);
  built.matrix.row_labels = sp.series.y;

  TaskReport report;
  report.task = "second-order";
  report.seed = common.seed;
  fit_and_report(built.matrix, sp, lc, report);
  report.results["energy_test"] = to_json(combine(
      std::span(built.energy).subspan(sp.train, sp.test)));
  report.results["floor_hits"] = built.floor_hits;
  report.artifacts["states.csv"] = format_state_matrix_csv(built.matrix);
  report.config = s.used();
  report.wall_time_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start).count();
  return report;
}

TaskReport run_linear_baseline(const Config& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Settings s(cfg);
  const std::uint64_t seed = s.seed();
  const SeriesSplit sp = read_series(s, seed);
  const std::size_t n_feat = s.count("baseline.features", 50);
  if (n_feat == 0) throw UsageError("baseline.features must be >= 1");
  const LinearConfig lc = read_linear(s);

  Rng rng = make_rng(seed, "baseline");
  std::vector<double> r(n_feat);
  for (double& x : r) x = uniform(rng, 0.0, 1.0);
  StateMatrix X(sp.series.u.size(), n_feat);
  for (std::size_t k = 0; k < n_feat; ++k) X.column_names.push_back("r" + std::to_string(k));
  for (std::size_t t = 0; t < X.rows(); ++t) {
    for (std::size_t k = 0; k < n_feat; ++k) X(t, k) = r[k] * sp.series.u[t];
  }
  X.row_labels = sp.series.y;

  TaskReport report;
  report.task = "linear-baseline";
  report.seed = seed;
  fit_and_report(X, sp, lc, report);
  report.artifacts["states.csv"] = format_state_matrix_csv(X);
  report.config = s.used();
  report.wall_time_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace memcap
