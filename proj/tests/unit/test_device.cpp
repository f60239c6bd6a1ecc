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

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "memcap/characterize.hpp"
#include "memcap/device.hpp"
#include "memcap/errors.hpp"

using namespace memcap;
using testutil::default_params;

TEST_CASE("rest is a fixed point at zero volts") {
  const auto& p = default_params();
  const auto d = derivatives(rest_state(p), 0.0, p);
  CHECK(d.dR_dt == 0.0);
  CHECK(d.dW_dt == 0.0);
}

TEST_CASE("pure restoring term when R is displaced") {
  const auto& p = default_params();
  const auto d = derivatives({2.0 * p.R0, p.W0, 0.0}, 0.0, p);
  CHECK(d.dR_dt == doctest::Approx(-p.k_ew * p.R0 / p.zeta_ew).epsilon(1e-14));
  CHECK(d.dW_dt == 0.0);
}

TEST_CASE("a voltage at rest widens and thins the bilayer") {
  const auto& p = default_params();
  const auto d = derivatives(rest_state(p), 0.15, p);
  CHECK(d.dR_dt > 0.0);
  CHECK(d.dW_dt < 0.0);
}

TEST_CASE("derivatives match a direct evaluation of the state equations") {
  const auto& p = default_params();
  const MemcapacitorState s{1.3 * p.R0, 0.93 * p.W0, 0.0};
  const double v = 0.17;
  const long double aee = static_cast<long double>(p.a) * p.eps * p.eps0;
  const long double dR = (aee / (2.0L * s.W) * v * v - p.k_ew * (s.R - p.R0)) / p.zeta_ew;
  const long double dW = (-aee * std::numbers::pi_v<long double> * s.R * s.R /
                              (2.0L * s.W * s.W) * v * v +
                          p.k_ec * (p.W0 - s.W)) /
                         p.zeta_ec;
  const auto d = derivatives(s, v, p);
  CHECK(d.dR_dt == doctest::Approx(static_cast<double>(dR)).epsilon(1e-13));
  CHECK(d.dW_dt == doctest::Approx(static_cast<double>(dW)).epsilon(1e-13));
}

TEST_CASE("non-finite inputs are rejected") {
  const auto& p = default_params();
  CHECK_THROWS_AS(derivatives(rest_state(p), NAN, p), InvalidInput);
  CHECK_THROWS_AS(derivatives({NAN, p.W0, 0.0}, 0.0, p), InvalidInput);
  CHECK_THROWS_AS(derivatives({p.R0, -1.0, 0.0}, 0.0, p), InvalidInput);
}

TEST_CASE("capacitance hand evaluation") {
  MemcapacitorParams p = default_params();
  p.a = 1.0;
  p.eps = 2.2;
  // 2.2 * 8.854187817e-12 * pi * 1e-8 / 4e-9
  const double expected = 1.529908e-10;
  CHECK(capacitance({1e-4, 4e-9, 0.0}, p) == doctest::Approx(expected).epsilon(1e-6));
  const double c = capacitance({1e-4, 4e-9, 0.0}, p);
  CHECK(capacitance({2e-4, 4e-9, 0.0}, p) == doctest::Approx(4.0 * c).epsilon(1e-15));
  CHECK(capacitance({1e-4, 2e-9, 0.0}, p) == doctest::Approx(2.0 * c).epsilon(1e-15));
  CHECK(capacitance(rest_state(p), p) == p.rest_capacitance());
}

TEST_CASE("calibrated defaults have a physical specific capacitance") {
  const auto& p = default_params();
  const double per_cm2 = p.rest_capacitance() / (p.a * std::numbers::pi * p.R0 * p.R0 * 1e4);
  CHECK(per_cm2 > 0.1e-6);
  CHECK(per_cm2 < 1e-6);
}

TEST_CASE("step keeps rest unchanged and advances time") {
  const auto& p = default_params();
  const auto r = step(rest_state(p), 0.0, 0.01, p, 0.2 * p.W0);
  CHECK(r.state.R == p.R0);
  CHECK(r.state.W == p.W0);
  CHECK(r.state.t == 0.01);
  CHECK_FALSE(r.floor_hit);
  const auto s = step(rest_state(p), 0.15, 1e-4, p, 0.2 * p.W0);
  CHECK(s.state.R > p.R0);
  CHECK(s.state.W < p.W0);
}

TEST_CASE("halving dt shrinks the one-step difference by about 2^4") {
  const auto& p = default_params();
  const MemcapacitorState s0 = rest_state(p);
  const double w_min = 0.2 * p.W0;
  const auto diff = [&](double dt) {
    const auto one = step(s0, 0.2, dt, p, w_min).state;
    const auto half = step(step(s0, 0.2, dt / 2, p, w_min).state, 0.2, dt / 2, p, w_min).state;
    return std::abs(one.W - half.W);
  };
  const double ratio = diff(8e-3) / diff(4e-3);
  // Local error is O(dt^5), so the ratio of one-step differences is ~32.
  CHECK(ratio > 24.0);
  CHECK(ratio < 40.0);
}

TEST_CASE("an unstable step size diverges with a located error") {
  const auto& p = default_params();
  PulseTrain train({{0.2, 100.0}});
  SimulationOptions o;
  o.dt = 1.0;
  o.w_min_fraction = 1e-300;
  CHECK_THROWS_AS(simulate(train, p, o), IntegrationDiverged);
}

TEST_CASE("steady state at zero volts is rest") {
  const auto& p = default_params();
  const auto ss = steady_state(0.0, p);
  CHECK(ss.R == p.R0);
  CHECK(ss.W == p.W0);
}

TEST_CASE("steady state is even in v, converged, and signed correctly") {
  const auto& p = default_params();
  for (int mv = 5; mv <= 200; mv += 5) {
    const double v = mv * 1e-3;
    const auto a = steady_state(v, p);
    const auto b = steady_state(-v, p);
    CHECK(a.R == b.R);
    CHECK(a.W == b.W);
    CHECK(a.R > p.R0);
    CHECK(a.W < p.W0);
    CHECK(a.W > 0.0);
    CHECK(a.residual < 1e-12);
  }
}

TEST_CASE("steady state satisfies the balance equations when checked independently") {
  const auto& p = default_params();
  const auto ss = steady_state(0.2, p);
  const long double alpha = 0.5L * p.a * p.eps * p.eps0 * 0.04L;
  const long double R = ss.R;
  const long double W = ss.W;
  const long double ew = p.k_ew * (R - p.R0) * W / alpha;
  const long double ec = p.k_ec * (p.W0 - W) /
                         (alpha * std::numbers::pi_v<long double> * R * R / (W * W));
  CHECK(static_cast<double>(ew) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(static_cast<double>(ec) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("steady state reports electrocompression collapse") {
  const auto& p = default_params();
  CHECK_THROWS_AS(steady_state(0.95, p), SolverFailed);
  CHECK_THROWS_AS(steady_state(5.0, p), InvalidInput);
}

TEST_CASE("long constant-voltage simulation settles on the steady state") {
  const auto& p = default_params();
  for (double v : {0.05, 0.15, 0.2}) {
    SimulationOptions o;
    o.sampling = sample::SegmentEnds{};
    const auto tr = simulate(PulseTrain({{v, 20.0}}), p, o);
    const auto ss = steady_state(v, p);
    CHECK(std::abs(tr.final_state.R / ss.R - 1.0) < 1e-3);
    CHECK(std::abs(tr.final_state.W / ss.W - 1.0) < 1e-3);
  }
}

TEST_CASE("every trace sample obeys the parallel-plate identity") {
  const auto& p = default_params();
  PulseTrain train({{0.2, 0.3}, {0.0, 0.2}, {0.1, 0.4}});
  const auto tr = simulate(train, p);
  REQUIRE(tr.size() == 901);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.capacitance[i] == p.eps * p.eps0 * tr.area[i] / tr.thickness[i]);
    CHECK(tr.area[i] == p.a * std::numbers::pi * tr.radius[i] * tr.radius[i]);
  }
}

TEST_CASE("traces depend on v only through v squared") {
  const auto& p = default_params();
  const auto a = simulate(PulseTrain({{0.2, 0.3}, {-0.1, 0.3}}), p);
  const auto b = simulate(PulseTrain({{-0.2, 0.3}, {0.1, 0.3}}), p);
  CHECK(a.capacitance == b.capacitance);
}

TEST_CASE("sampling policies") {
  const auto& p = default_params();
  const PulseTrain train({{0.2, 0.1}, {0.0, 0.05}});
  SimulationOptions o;
  const auto every = simulate(train, p, o);
  CHECK(every.size() == 151);
  o.sampling = sample::SegmentEnds{};
  const auto ends = simulate(train, p, o);
  REQUIRE(ends.size() == 3);
  CHECK(ends.capacitance[1] == every.capacitance[100]);
  CHECK(ends.capacitance[2] == every.capacitance[150]);
  CHECK(ends.voltage[1] == 0.2);
  o.sampling = sample::AtTimes{{0.0, 0.0505, 0.12}};
  const auto at = simulate(train, p, o);
  REQUIRE(at.size() == 3);
  CHECK(at.capacitance[1] == every.capacitance[50]);
  CHECK(at.capacitance[2] == every.capacitance[120]);
}

TEST_CASE("simulation resumes from a supplied state") {
  const auto& p = default_params();
  const auto whole = simulate(PulseTrain({{0.2, 0.2}, {0.1, 0.2}}), p);
  const auto first = simulate(PulseTrain({{0.2, 0.2}}), p);
  SimulationOptions o;
  o.initial = first.final_state;
  const auto second = simulate(PulseTrain({{0.1, 0.2}}), p, o);
  CHECK(second.final_state.R == whole.final_state.R);
  CHECK(second.final_state.W == whole.final_state.W);
  CHECK(second.times.back() == doctest::Approx(0.4));
}

TEST_CASE("parameter file round trip and errors") {
  const auto& p = default_params();
  CHECK(parse_params(format_params(p)) == p);
  CHECK_THROWS_AS(parse_params("eps = 2\n", "x.params"), ParseError);
  try {
    parse_params(format_params(p) + "bogus = 1\n", "x.params");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.path() == "x.params");
  }
  CHECK_THROWS_AS(parse_params("a=1\neps=2\nR0=-1\nW0=1\nzeta_ew=1\nk_ew=1\nzeta_ec=1\nk_ec=1\n"),
                  ParseError);
}

TEST_CASE("trace CSV round trip") {
  const auto& p = default_params();
  const auto tr = simulate(PulseTrain({{0.2, 0.01}, {0.0, 0.005}}), p);
  const auto text = format_trace_csv(tr);
  CHECK(text.rfind("t_s,v_V,R_m,W_m,A_m2,C_F,C_over_C0\n", 0) == 0);
  const auto back = parse_trace_csv(text);
  CHECK(back.capacitance == tr.capacitance);
  CHECK(back.voltage == tr.voltage);
  CHECK(back.times == tr.times);
  CHECK(back.C0 == doctest::Approx(tr.C0).epsilon(1e-15));
}

TEST_CASE("paired pulses facilitate until saturation") {
  const auto r = run_ppf(default_params(), {});
  REQUIRE(r.peak_ratio.size() == 4);
  CHECK(r.monotone);
  for (std::size_t k = 1; k < 4; ++k) CHECK(r.peak_ratio[k] > r.peak_ratio[k - 1]);
}

TEST_CASE("state relaxes monotonically after the stimulus ends") {
  const auto& p = default_params();
  const auto d = run_decay(p, {});
  CHECK(d.settled);
  double prev = INFINITY;
  for (std::size_t i = 0; i < d.trace.size(); i += 10) {
    const double dist = std::hypot(d.trace.radius[i] / p.R0 - 1.0,
                                   d.trace.thickness[i] / p.W0 - 1.0);
    if (d.trace.times[i] > 0.2) CHECK(dist <= prev);
    prev = dist;
  }
}

TEST_CASE("zero-amplitude sinusoid gives a flat trace with no loop") {
  HysteresisOptions o;
  o.amplitude_V = 0.0;
  o.cycles = 1;
  const auto h = run_hysteresis(default_params(), o);
  CHECK(h.loop_area == 0.0);
  CHECK(h.max_zero_crossing_deviation == 0.0);
  for (double c : h.trace.capacitance) CHECK(c == h.trace.C0);
}

TEST_CASE("lobe area of hand-built loops") {
  // Unit square traversed once: v 0->1 at y=0, back at y=1.
  const std::vector<double> v = {0.0, 1.0, 1.0, 0.0};
  const std::vector<double> y = {0.0, 0.0, 1.0, 1.0};
  CHECK(lobe_area(v, y) == doctest::Approx(1.0));
  // Figure eight: two unit lobes of opposite orientation.
  const std::vector<double> v8 = {0.0, 1.0, 1.0, 0.0, -1.0, -1.0, 0.0};
  const std::vector<double> y8 = {0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  CHECK(lobe_area(v8, y8) == doctest::Approx(2.0));
}
