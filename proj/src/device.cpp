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

#include "memcap/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "kernels/rk4_lane.hpp"
#include "memcap/errors.hpp"
#include "memcap/io.hpp"

namespace memcap {

namespace {

constexpr double kPi = kernels::lane::kPi;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

kernels::lane::Coefficients coefficients(const MemcapacitorParams& p,
                                         double v) {
  return {p.drive_coefficient() * (v * v), p.R0, p.W0, p.zeta_ew,
          p.k_ew, p.zeta_ec, p.k_ec};
}

void check_state(const MemcapacitorState& s) {
  if (!positive_finite(s.R) || !positive_finite(s.W) || !std::isfinite(s.t)) {
    throw InvalidInput("device state must have finite R > 0 and W > 0");
  }
}

}  // namespace

void MemcapacitorParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"a", a},         {"eps", eps},     {"eps0", eps0},
      {"R0", R0},       {"W0", W0},       {"zeta_ew", zeta_ew},
      {"k_ew", k_ew},   {"zeta_ec", zeta_ec}, {"k_ec", k_ec}};
  for (const auto& [name, value] : fields) {
    if (!positive_finite(value)) {
      throw InvalidInput(std::string("device parameter '") + name +
                         "' must be finite and positive");
    }
  }
  if (eps0 != kEps0) {
    throw InvalidInput("eps0 is fixed at 8.854187817e-12 F/m");
  }
}

double MemcapacitorParams::rest_capacitance() const noexcept {
  return eps * eps0 * (a * kPi * R0 * R0) / W0;
}

MemcapacitorParams parse_params(const std::string& text,
                                const std::string& origin) {
  MemcapacitorParams p;
  std::map<std::string, double MemcapacitorParams::*, std::less<>> keys = {
      {"a", &MemcapacitorParams::a},
      {"eps", &MemcapacitorParams::eps},
      {"eps0", &MemcapacitorParams::eps0},
      {"R0", &MemcapacitorParams::R0},
      {"W0", &MemcapacitorParams::W0},
      {"zeta_ew", &MemcapacitorParams::zeta_ew},
      {"k_ew", &MemcapacitorParams::k_ew},
      {"zeta_ec", &MemcapacitorParams::zeta_ec},
      {"k_ec", &MemcapacitorParams::k_ec}};
  std::map<std::string, bool, std::less<>> seen;

  for (auto line : io::lines(text)) {
    if (line.front() == '#' || line.front() == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(origin, "expected 'key = value', got '" +
                                   std::string(line) + "'");
    }
    const auto key = io::trim(line.substr(0, eq));
    auto value_text = io::trim(line.substr(eq + 1));
    if (const auto hash = value_text.find('#'); hash != std::string_view::npos) {
      value_text = io::trim(value_text.substr(0, hash));
    }
    const auto it = keys.find(key);
    if (it == keys.end()) {
      throw ParseError(origin, "unknown parameter '" + std::string(key) + "'");
    }
    const auto value = io::to_double(value_text);
    if (!value) {
      throw ParseError(origin, "malformed number for '" + std::string(key) +
                                   "': '" + std::string(value_text) + "'");
    }
    p.*(it->second) = *value;
    seen[std::string(key)] = true;
  }

  for (const char* required : {"eps", "R0", "W0", "zeta_ew", "k_ew",
                               "zeta_ec", "k_ec"}) {
    if (!seen.count(required)) {
      throw ParseError(origin, std::string("missing parameter '") + required +
                                   "'");
    }
  }
  try {
    p.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(origin, e.what());
  }
  return p;
}

MemcapacitorParams load_params(const std::filesystem::path& path) {
  return parse_params(io::read_file(path), path.string());
}

std::string format_params(const MemcapacitorParams& p) {
  std::ostringstream os;
  os << "# Memcapacitor parameters, SI units.\n"
     << "a = " << io::format_double(p.a) << "\n"
     << "eps = " << io::format_double(p.eps) << "\n"
     << "eps0 = " << io::format_double(p.eps0) << "\n"
     << "R0 = " << io::format_double(p.R0) << "\n"
     << "W0 = " << io::format_double(p.W0) << "\n"
     << "zeta_ew = " << io::format_double(p.zeta_ew) << "\n"
     << "k_ew = " << io::format_double(p.k_ew) << "\n"
     << "zeta_ec = " << io::format_double(p.zeta_ec) << "\n"
     << "k_ec = " << io::format_double(p.k_ec) << "\n";
  return os.str();
}

MemcapacitorState rest_state(const MemcapacitorParams& params) {
  return {params.R0, params.W0, 0.0};
}

StateDerivatives derivatives(const MemcapacitorState& state, double v,
                             const MemcapacitorParams& params) {
  check_state(state);
  if (!std::isfinite(v)) throw InvalidInput("voltage must be finite");
  StateDerivatives d{};
  kernels::lane::derivatives(coefficients(params, v), state.R, state.W,
                             d.dR_dt, d.dW_dt);
  return d;
}

double capacitance(const MemcapacitorState& state,
                   const MemcapacitorParams& params) {
  check_state(state);
  return params.eps * params.eps0 * area(state, params) / state.W;
}

double area(const MemcapacitorState& state, const MemcapacitorParams& params) {
  return params.a * kPi * state.R * state.R;
}

StepResult step(const MemcapacitorState& state, double v, double dt,
                const MemcapacitorParams& params, double w_min) {
  check_state(state);
  if (!std::isfinite(v)) throw InvalidInput("voltage must be finite");
  if (!positive_finite(dt)) throw InvalidInput("dt must be positive");
  StepResult out{state, false};
  out.floor_hit = kernels::lane::rk4_step(coefficients(params, v), w_min, dt,
                                          out.state.R, out.state.W);
  out.state.t = state.t + dt;
  if (!std::isfinite(out.state.R) || !std::isfinite(out.state.W) ||
      out.state.R <= 0.0) {
    throw IntegrationDiverged(state.t, dt);
  }
  return out;
}

SteadyState steady_state(double v, const MemcapacitorParams& p,
                         const SteadyStateOptions& options) {
  if (!std::isfinite(v) || std::abs(v) > options.voltage_guard) {
    throw InvalidInput("steady_state: |v| must be finite and at most the "
                       "voltage guard");
  }
  if (v == 0.0) return {p.R0, p.W0, 0.0, 0};

  // Eliminate R with the electrowetting balance and solve the
  // electrocompression balance for the thinning d = W0 - W. Working in the
  // displacements keeps both balances well conditioned at small v, where
  // W0 - W and R - R0 are tiny next to W0 and R0.
  const double alpha = 0.5 * p.drive_coefficient() * v * v;
  const auto widening = [&](double d) { return alpha / ((p.W0 - d) * p.k_ew); };
  const auto g = [&](double d) {
    const double W = p.W0 - d;
    const double R = p.R0 + widening(d);
    return p.k_ec * d - alpha * kPi * R * R / (W * W);
  };
  const auto dg = [&](double d) {
    const double W = p.W0 - d;
    const double R = p.R0 + widening(d);
    const double dR_dW = -alpha / (W * W * p.k_ew);
    return p.k_ec + alpha * kPi * (2.0 * R * dR_dW / (W * W) - 2.0 * R * R / (W * W * W));
  };
  const auto residual = [&](double d) {
    const double W = p.W0 - d;
    const double dR = widening(d);
    const double R = p.R0 + dR;
    const double restoring = p.k_ec * d;
    const double compress = alpha * kPi * R * R / (W * W);
    const double r_ec = std::abs(restoring - compress) / (restoring + compress);
    const double r_ew = std::abs(p.k_ew * dR - alpha / W) / (alpha / W);
    return std::max(r_ec, r_ew);
  };

  // g(0) < 0 and g -> -inf as d -> W0; the stable root is the first sign
  // change walking up from d = 0.
  double lo = 0.0;
  double hi = 0.0;
  bool bracketed = false;
  for (double f = 1e-12; f < 1.0; f *= 2.0) {
    const double d = p.W0 * f;
    if (g(d) > 0.0) {
      hi = d;
      bracketed = true;
      break;
    }
    lo = d;
    if (f >= 0.5) {
      // Beyond 50% thinning only a finer scan can find a root.
      for (double d2 = d + 0.005 * p.W0; d2 < p.W0; d2 += 0.005 * p.W0) {
        if (g(d2) > 0.0) {
          hi = d2;
          bracketed = true;
          break;
        }
        lo = d2;
      }
      break;
    }
  }
  if (!bracketed) {
    throw SolverFailed("steady_state: no physical root at v=" +
                       io::format_double(v) +
                       " V (electrocompression collapse)");
  }

  // Safeguarded Newton on [lo, hi] with g(lo) < 0 < g(hi).
  double d = hi;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double gd = g(d);
    if (gd > 0.0) hi = d; else lo = d;
    double next = d - gd / dg(d);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    d = next;
    const double res = residual(d);
    if (res < options.tolerance) return {p.R0 + widening(d), p.W0 - d, res, it};
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  const double res = residual(d);
  if (res < options.tolerance) {
    return {p.R0 + widening(d), p.W0 - d, res, options.max_iterations};
  }
  throw SolverFailed("steady_state: no convergence at v=" +
                     io::format_double(v) + " V (residual " +
                     io::format_double(res) + ")");
}

std::vector<double> CapacitanceTrace::normalized() const {
  std::vector<double> out(capacitance.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = capacitance[i] / C0;
  return out;
}

std::size_t step_count(double duration, double dt) {
  if (!positive_finite(duration) || !positive_finite(dt)) {
    throw InvalidInput("segment duration and dt must be positive");
  }
  const double n = std::round(duration / dt);
  if (n < 1.0) {
    throw InvalidInput("segment of " + io::format_double(duration) +
                       " s is shorter than half a step of " +
                       io::format_double(dt) + " s");
  }
  return static_cast<std::size_t>(n);
}

namespace {

class TraceRecorder {
 public:
  TraceRecorder(const MemcapacitorParams& p, CapacitanceTrace& trace)
      : p_(p), trace_(trace) {}

  void record(const MemcapacitorState& s, double v) {
    const double A = area(s, p_);
    trace_.times.push_back(s.t);
    trace_.voltage.push_back(v);
    trace_.radius.push_back(s.R);
    trace_.thickness.push_back(s.W);
    trace_.area.push_back(A);
    trace_.capacitance.push_back(p_.eps * p_.eps0 * A / s.W);
  }

 private:
  const MemcapacitorParams& p_;
  CapacitanceTrace& trace_;
};

}  // namespace

CapacitanceTrace simulate(const PulseTrain& train,
                          const MemcapacitorParams& params,
                          const SimulationOptions& options) {
  params.validate();
  if (train.empty()) throw InvalidInput("simulate: empty pulse train");
  const double dt = options.dt;
  const double w_min = options.w_min_fraction * params.W0;

  CapacitanceTrace trace;
  trace.C0 = params.rest_capacitance();
  TraceRecorder recorder(params, trace);

  MemcapacitorState state = options.initial.value_or(rest_state(params));
  check_state(state);
  const double t_start = state.t;
  std::size_t steps_done = 0;
  double last_v = 0.0;

  const bool every = std::holds_alternative<sample::EveryStep>(options.sampling);
  const bool ends = std::holds_alternative<sample::SegmentEnds>(options.sampling);
  const std::vector<double>* wanted = nullptr;
  if (const auto* at = std::get_if<sample::AtTimes>(&options.sampling)) {
    wanted = &at->times;
    if (!std::is_sorted(wanted->begin(), wanted->end())) {
      throw InvalidInput("simulate: sample times must be ascending");
    }
  }
  std::size_t next_wanted = 0;
  const double slack = 1e-9 * dt;
  // Emits pending AtTimes samples that fall before the next step.
  const auto flush_wanted = [&](double next_t) {
    if (!wanted) return;
    while (next_wanted < wanted->size() &&
           (*wanted)[next_wanted] < next_t - slack) {
      if ((*wanted)[next_wanted] >= state.t - slack) {
        recorder.record(state, last_v);
      }
      ++next_wanted;
    }
  };

  if (every || ends) recorder.record(state, 0.0);

  for (const Segment& seg : train.segments()) {
    if (!std::isfinite(seg.amplitude)) {
      throw InvalidInput("simulate: non-finite amplitude");
    }
    const std::size_t n = step_count(seg.duration, dt);
    const auto c = coefficients(params, seg.amplitude);
    for (std::size_t k = 0; k < n; ++k) {
      flush_wanted(t_start + static_cast<double>(steps_done + 1) * dt);
      const double t_before = state.t;
      if (kernels::lane::rk4_step(c, w_min, dt, state.R, state.W)) {
        ++trace.floor_hits;
      }
      ++steps_done;
      state.t = t_start + static_cast<double>(steps_done) * dt;
      last_v = seg.amplitude;
      if (!std::isfinite(state.R) || !std::isfinite(state.W) || state.R <= 0) {
        throw IntegrationDiverged(t_before, dt);
      }
      if (every) recorder.record(state, seg.amplitude);
    }
    if (ends) recorder.record(state, seg.amplitude);
  }
  flush_wanted(std::numeric_limits<double>::infinity());

  trace.final_state = state;
  return trace;
}

std::string format_trace_csv(const CapacitanceTrace& trace) {
  std::string out = "t_s,v_V,R_m,W_m,A_m2,C_F,C_over_C0\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += io::format_double(trace.times[i]);
    for (double x : {trace.voltage[i], trace.radius[i], trace.thickness[i],
                     trace.area[i], trace.capacitance[i],
                     trace.capacitance[i] / trace.C0}) {
      out += ',';
      out += io::format_double(x);
    }
    out += '\n';
  }
  return out;
}

CapacitanceTrace parse_trace_csv(const std::string& text,
                                 const std::string& origin) {
  const auto rows = io::lines(text);
  if (rows.empty() || rows.front() != "t_s,v_V,R_m,W_m,A_m2,C_F,C_over_C0") {
    throw ParseError(origin, "expected trace header "
                             "'t_s,v_V,R_m,W_m,A_m2,C_F,C_over_C0'");
  }
  CapacitanceTrace trace;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto cells = io::split(rows[r], ',');
    if (cells.size() != 7) {
      throw ParseError(origin, "line " + std::to_string(r + 1) +
                                   ": expected 7 columns");
    }
    double v[7];
    for (int c = 0; c < 7; ++c) {
      const auto x = io::to_double(cells[c]);
      if (!x) {
        throw ParseError(origin, "line " + std::to_string(r + 1) +
                                     ": malformed number");
      }
      v[c] = *x;
    }
    if (!trace.times.empty() && v[0] < trace.times.back()) {
      throw ParseError(origin, "times must be non-decreasing");
    }
    trace.times.push_back(v[0]);
    trace.voltage.push_back(v[1]);
    trace.radius.push_back(v[2]);
    trace.thickness.push_back(v[3]);
    trace.area.push_back(v[4]);
    trace.capacitance.push_back(v[5]);
    if (r == 1) trace.C0 = v[5] / v[6];
  }
  if (trace.times.empty()) throw ParseError(origin, "trace has no samples");
  trace.final_state = {trace.radius.back(), trace.thickness.back(),
                       trace.times.back()};
  return trace;
}

}  // namespace memcap
