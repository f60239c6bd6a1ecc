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

// Derives a default parameter file from geometry and response targets.
//
// Stiffnesses follow in closed form from the requested steady state at the
// reference voltage. Thickness damping is set from its time constant; the
// radius damping is bisected until the zero-input relaxation after a long
// hold takes the requested time.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "memcap/characterize.hpp"
#include "memcap/errors.hpp"
#include "memcap/io.hpp"

namespace {

struct Targets {
  double a = 1.0;
  double eps = 2.2;
  double R0 = 35e-6;
  double W0 = 3.5e-9;
  double v_ref = 0.200;
  double ratio_ref = 2.99;        // C_ss / C0 at v_ref
  double thickness_ratio = 0.99;  // W_ss / W0 at v_ref
  double tau_w = 0.05;            // s
  double decay_s = 1.45;          // 1 % relaxation time after the hold
};

memcap::MemcapacitorParams stiffness(const Targets& t, double tau_r) {
  memcap::MemcapacitorParams p;
  p.a = t.a;
  p.eps = t.eps;
  p.R0 = t.R0;
  p.W0 = t.W0;
  const double alpha = p.drive_coefficient() * t.v_ref * t.v_ref / 2.0;
  const double W = t.thickness_ratio * t.W0;
  // C/C0 = (R/R0)^2 / (W/W0)
  const double R = t.R0 * std::sqrt(t.ratio_ref * t.thickness_ratio);
  p.k_ew = alpha / (W * (R - t.R0));
  p.k_ec = alpha * std::numbers::pi * R * R / (W * W * (t.W0 - W));
  p.zeta_ec = t.tau_w * p.k_ec;
  p.zeta_ew = tau_r * p.k_ew;
  return p;
}

double decay_time(const memcap::MemcapacitorParams& p) {
  const auto d = memcap::run_decay(p, {});
  if (!d.settled) throw memcap::SolverFailed("relaxation did not settle");
  return d.decay_time_s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibrate memcapacitor parameters"};
  Targets t;
  std::string out;
  app.add_option("--out", out, "Parameter file to write (stdout if omitted)");
  app.add_option("--R0", t.R0, "Rest radius, m");
  app.add_option("--W0", t.W0, "Rest thickness, m");
  app.add_option("--eps", t.eps, "Relative permittivity");
  app.add_option("--a", t.a, "Area shape factor");
  app.add_option("--v-ref", t.v_ref, "Reference voltage, V");
  app.add_option("--ratio", t.ratio_ref, "Steady C/C0 at the reference voltage");
  app.add_option("--thickness-ratio", t.thickness_ratio,
                 "Steady W/W0 at the reference voltage");
  app.add_option("--tau-w", t.tau_w, "Thickness time constant, s");
  app.add_option("--decay", t.decay_s, "Target 1% relaxation time, s");
  CLI11_PARSE(app, argc, argv);

  try {
    double lo = 0.01;
    double hi = 3.0;
    if (decay_time(stiffness(t, lo)) > t.decay_s ||
        decay_time(stiffness(t, hi)) < t.decay_s) {
      throw memcap::SolverFailed("decay target outside the searchable range");
    }
    for (int i = 0; i < 40; ++i) {
      const double mid = 0.5 * (lo + hi);
      (decay_time(stiffness(t, mid)) < t.decay_s ? lo : hi) = mid;
    }
    const auto p = stiffness(t, 0.5 * (lo + hi));

    const double C0 = p.rest_capacitance();
    const double area_cm2 = p.a * std::numbers::pi * p.R0 * p.R0 * 1e4;
    std::fprintf(stderr, "C0 = %.4g F, specific capacitance = %.4g uF/cm^2\n", C0,
                 C0 / area_cm2 * 1e6);
    for (double v : {0.150, 0.200}) {
      const auto ss = memcap::steady_state(v, p);
      std::fprintf(stderr, "C_ss/C0 at %.0f mV = %.4f\n", v * 1e3,
                   memcap::capacitance({ss.R, ss.W, 0.0}, p) / C0);
    }
    std::fprintf(stderr, "1%% relaxation time = %.4f s\n", decay_time(p));

    const auto text = memcap::format_params(p);
    if (out.empty()) {
      std::fputs(text.c_str(), stdout);
    } else {
      memcap::io::write_file_atomic(out, text);
    }
  } catch (const memcap::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
