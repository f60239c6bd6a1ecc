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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "helpers.hpp"
#include "memcap/errors.hpp"
#include "memcap/reservoir.hpp"

using namespace memcap;

namespace {

PulseTrain pulses(double v, double on, double off, int n) {
  PulseTrain t;
  for (int i = 0; i < n; ++i) {
    t.add(v, on, true);
    t.add(0.0, off, false);
  }
  return t;
}

std::vector<std::vector<double>> examples(std::size_t count, std::size_t len,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> out(count, std::vector<double>(len));
  for (auto& e : out) {
    for (auto& x : e) x = uniform(rng, 0.0, 0.5);
  }
  return out;
}

}  // namespace

TEST_CASE("device bank spread") {
  const auto& p = testutil::default_params();
  const auto flat = make_device_bank(p, 5, 0.0, 3);
  REQUIRE(flat.devices.size() == 5);
  for (const auto& d : flat.devices) CHECK(d == p);

  const auto a = make_device_bank(p, 5, 0.02, 11);
  const auto b = make_device_bank(p, 5, 0.02, 11);
  const auto c = make_device_bank(p, 5, 0.02, 12);
  CHECK(a.devices == b.devices);
  CHECK(a.devices != c.devices);
  for (const auto& d : a.devices) {
    CHECK(std::abs(d.R0 / p.R0 - 1.0) <= 0.06 + 1e-15);
    CHECK(std::abs(d.W0 / p.W0 - 1.0) <= 0.06 + 1e-15);
    CHECK(d.k_ew == p.k_ew);
    CHECK(d.zeta_ec == p.zeta_ec);
  }
}

TEST_CASE("a device held at zero volts stays at its rest capacitance") {
  const auto& p = testutil::default_params();
  PulseTrain t;
  for (int i = 0; i < 20; ++i) t.add(0.0, 0.1);
  const auto run = run_reservoir(t, p, {});
  REQUIRE(run.samples.size() == 20);
  for (double s : run.samples) CHECK(s == 1.0);
  CHECK(run.energy.total_energy == 0.0);
}

TEST_CASE("a long 200 mV pulse settles between two and three times rest") {
  const auto& p = testutil::default_params();
  const auto run = run_reservoir(PulseTrain({{0.2, 20.0}}), p, {});
  REQUIRE(run.samples.size() == 1);
  CHECK(run.samples[0] > 2.0);
  CHECK(run.samples[0] < 3.0);
  CHECK(run.floor_hits == 0);
}

TEST_CASE("closely spaced pulses facilitate") {
  const auto& p = testutil::default_params();
  const auto run = run_reservoir(pulses(0.2, 0.5, 0.25, 2), p, {});
  REQUIRE(run.samples.size() == 2);
  CHECK(run.samples[1] > run.samples[0]);
}

TEST_CASE("single-lane reservoir agrees with the plain simulator") {
  const auto& p = testutil::default_params();
  const auto train = pulses(0.15, 0.1, 0.1, 6);
  const auto run = run_reservoir(train, p, {});
  SimulationOptions o;
  o.sampling = sample::SegmentEnds{};
  const auto tr = simulate(train, p, o);
  REQUIRE(tr.size() == 13);
  REQUIRE(run.samples.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(run.samples[k] ==
          doctest::Approx(tr.capacitance[2 * k + 1] / tr.C0).epsilon(1e-13));
  }
  CHECK(run.energy.total_energy ==
        doctest::Approx(memcap_energy(simulate(train, p), train).total_energy)
            .epsilon(1e-12));
}

TEST_CASE("virtual node selection") {
  std::vector<double> seq(40);
  std::iota(seq.begin(), seq.end(), 0.0);
  const auto n = select_virtual_nodes(seq, 5);
  REQUIRE(n.size() == 8);
  for (std::size_t j = 0; j < 8; ++j) CHECK(n[j] == 5.0 * j + 4.0);
  CHECK(select_virtual_nodes(seq, 1) == seq);
  CHECK_THROWS_AS(select_virtual_nodes(seq, 7), InvalidInput);
  CHECK_THROWS_AS(select_virtual_nodes(seq, 0), InvalidInput);

  std::size_t dropped = 0;
  const auto t = extract_nodes(seq, nodes::EveryK{7, true}, &dropped);
  CHECK(t.size() == 5);
  CHECK(t.back() == 34.0);
  CHECK(dropped == 5);
  CHECK(extract_nodes(seq, nodes::EachSample{}) == seq);
}

TEST_CASE("window integration") {
  const std::vector<double> seq(4097, 0.25);
  const auto f = integrate_features(seq, 60, 0.01);
  REQUIRE(f.features.size() == 68);
  CHECK(f.dropped == 17);
  for (double x : f.features) CHECK(x == doctest::Approx(60 * 0.25 * 0.01));
  const auto whole = integrate_features(seq, seq.size(), 1.0);
  REQUIRE(whole.features.size() == 1);
  CHECK(whole.features[0] == doctest::Approx(4097 * 0.25));
  CHECK(whole.dropped == 0);
  CHECK_THROWS_AS(integrate_features(seq, 0, 1.0), InvalidInput);
}

TEST_CASE("state matrix layout and agreement with per-example runs") {
  const auto& p = testutil::default_params();
  const auto bank = make_device_bank(p, 5, 0.02, 7);
  const auto xs = examples(3, 10, 99);
  const std::vector<EncoderSpec> enc = {AmplitudeMap{}};
  const auto built = build_state_matrix(xs, bank, enc, nodes::EachSample{}, {});
  const auto& m = built.matrix;
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 50);
  CHECK(m.column_names.front() == "d0_e0_n0");
  CHECK(m.column_names[13] == "d1_e0_n3");
  CHECK(m.column_names.back() == "d4_e0_n9");
  REQUIRE(built.energy.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    double energy = 0.0;
    for (std::size_t d = 0; d < 5; ++d) {
      const auto run = run_reservoir(encode_amplitude(xs[r]), bank.devices[d], {});
      energy += run.energy.total_energy;
      for (std::size_t j = 0; j < 10; ++j) {
        CHECK(m(r, d * 10 + j) == doctest::Approx(run.samples[j]).epsilon(1e-13));
      }
    }
    CHECK(built.energy[r].total_energy == doctest::Approx(energy).epsilon(1e-12));
  }
}

TEST_CASE("permuting examples permutes rows") {
  const auto& p = testutil::default_params();
  const auto bank = make_device_bank(p, 2, 0.02, 5);
  const auto xs = examples(4, 8, 3);
  const std::vector<EncoderSpec> enc = {AmplitudeMap{}};
  const auto m = build_state_matrix(xs, bank, enc, nodes::EachSample{}, {}).matrix;
  const std::vector<std::size_t> perm = {2, 0, 3, 1};
  std::vector<std::vector<double>> ys;
  for (auto i : perm) ys.push_back(xs[i]);
  const auto mp = build_state_matrix(ys, bank, enc, nodes::EachSample{}, {}).matrix;
  CHECK(mp == m.select_rows(perm));
}

TEST_CASE("distinct inputs give distinct reservoir states") {
  const auto& p = testutil::default_params();
  const auto bank = make_device_bank(p, 1, 0.0, 1);
  const std::vector<std::vector<double>> xs = {
      {0.1, 0.4, 0.2}, {0.4, 0.1, 0.2}, {0.1, 0.4, 0.21}};
  const std::vector<EncoderSpec> enc = {AmplitudeMap{}};
  const auto m = build_state_matrix(xs, bank, enc, nodes::EachSample{}, {}).matrix;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      CHECK(std::vector<double>(m.row(a).begin(), m.row(a).end()) !=
            std::vector<double>(m.row(b).begin(), m.row(b).end()));
    }
  }
  // Same final input after different histories: the device remembers.
  CHECK(m(0, 1) != m(1, 1));
}

TEST_CASE("streaming states are causal") {
  const auto& p = testutil::default_params();
  const auto bank = make_device_bank(p, 3, 0.02, 4);
  const auto seq = examples(1, 40, 8)[0];
  const std::vector<AmplitudeMap> enc = {AmplitudeMap{}};
  const auto full = build_streaming_state_matrix(seq, bank, enc, {});
  const auto head =
      build_streaming_state_matrix(std::span(seq).first(15), bank, enc, {});
  REQUIRE(full.matrix.rows() == 40);
  REQUIRE(head.matrix.rows() == 15);
  REQUIRE(full.matrix.cols() == 3);
  std::vector<std::size_t> first(15);
  std::iota(first.begin(), first.end(), 0);
  CHECK(full.matrix.select_rows(first) == head.matrix);
  // A change in the future leaves the past alone.
  auto edited = seq;
  edited[30] = 0.0;
  const auto alt = build_streaming_state_matrix(edited, bank, enc, {});
  for (std::size_t t = 0; t < 30; ++t) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(alt.matrix(t, c) == full.matrix(t, c));
  }
  CHECK(alt.matrix(30, 0) != full.matrix(30, 0));
}

TEST_CASE("streaming rows match one continuous run") {
  const auto& p = testutil::default_params();
  const auto bank = make_device_bank(p, 1, 0.0, 1);
  const auto seq = examples(1, 12, 21)[0];
  const std::vector<AmplitudeMap> enc = {AmplitudeMap{}};
  const auto s = build_streaming_state_matrix(seq, bank, enc, {});
  const auto run = run_reservoir(encode_amplitude(seq), p, {});
  REQUIRE(run.samples.size() == 12);
  for (std::size_t t = 0; t < 12; ++t) {
    CHECK(s.matrix(t, 0) == doctest::Approx(run.samples[t]).epsilon(1e-13));
  }
}

TEST_CASE("state matrix CSV round trip") {
  StateMatrix m(3, 2);
  m.column_names = {"d0_e0_n0", "d0_e0_n1"};
  m.row_labels = {0.0, 2.0, 1.0};
  double x = 0.1;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 2; ++c) m(r, c) = (x *= 1.37);
  }
  CHECK(parse_state_matrix_csv(format_state_matrix_csv(m)) == m);
  m.row_labels.clear();
  CHECK(parse_state_matrix_csv(format_state_matrix_csv(m)) == m);
  CHECK_THROWS_AS(parse_state_matrix_csv("a,b\n1,2\n3\n"), ParseError);
}

TEST_CASE("noise hook") {
  std::vector<double> v(1000, 1.0);
  Rng rng(4);
  apply_noise(v, 0.0, rng);
  CHECK(std::all_of(v.begin(), v.end(), [](double x) { return x == 1.0; }));
  auto a = v;
  auto b = v;
  Rng r1(9), r2(9);
  apply_noise(a, 0.01, r1);
  apply_noise(b, 0.01, r2);
  CHECK(a == b);
  double mean = 0.0, var = 0.0;
  for (double x : a) mean += x - 1.0;
  mean /= a.size();
  for (double x : a) var += (x - 1.0 - mean) * (x - 1.0 - mean);
  var /= a.size() - 1;
  CHECK(std::abs(mean) < 5 * 0.01 / std::sqrt(1000.0));
  CHECK(std::sqrt(var) == doctest::Approx(0.01).epsilon(0.1));
}

TEST_CASE("the matrix rejects non-finite entries") {
  StateMatrix m(1, 1);
  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(m.check_finite(), InvalidInput);
}
