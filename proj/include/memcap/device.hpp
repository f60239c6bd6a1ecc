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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "memcap/pulse_train.hpp"

namespace memcap {

/// Permittivity of free space, F/m.
inline constexpr double kEps0 = 8.854187817e-12;

/// Physical constants of a droplet-interface-bilayer memcapacitor. Units are
/// SI throughout; the names match the keys of the parameter file.
struct MemcapacitorParams {
  double a = 1.0;      // area shape factor multiplying pi R^2
  double eps = 2.2;    // relative permittivity of the hydrophobic core
  double eps0 = kEps0; // F/m
  double R0 = 0.0;     // zero-volt minor-axis radius, m
  double W0 = 0.0;     // zero-volt hydrophobic thickness, m
  double zeta_ew = 0.0;  // electrowetting damping, N s m^-2
  double k_ew = 0.0;     // electrowetting stiffness, N m^-2
  double zeta_ec = 0.0;  // electrocompression damping, N s m^-1
  double k_ec = 0.0;     // electrocompression stiffness, N m^-1

  /// Throws InvalidInput unless every field is finite and strictly positive
  /// and eps0 equals kEps0.
  void validate() const;

  /// a * eps * eps0, the coefficient of v^2 in both state equations.
  double drive_coefficient() const noexcept { return a * eps * eps0; }

  /// Capacitance of the device at rest (R0, W0).
  double rest_capacitance() const noexcept;

  friend bool operator==(const MemcapacitorParams&,
                         const MemcapacitorParams&) = default;
};

/// Parses the flat `key = value` parameter format. Unknown keys, missing
/// keys and malformed numbers raise ParseError naming `origin`.
MemcapacitorParams parse_params(const std::string& text,
                                const std::string& origin = "<string>");
MemcapacitorParams load_params(const std::filesystem::path& path);
std::string format_params(const MemcapacitorParams& params);

struct MemcapacitorState {
  double R = 0.0;  // m
  double W = 0.0;  // m
  double t = 0.0;  // s
};

MemcapacitorState rest_state(const MemcapacitorParams& params);

struct StateDerivatives {
  double dR_dt;  // m/s
  double dW_dt;  // m/s
};

/// Right-hand side of the coupled electrowetting / electrocompression
/// state equations at voltage `v`.
StateDerivatives derivatives(const MemcapacitorState& state, double v,
                             const MemcapacitorParams& params);

/// Parallel-plate capacitance eps*eps0*(a*pi*R^2)/W.
double capacitance(const MemcapacitorState& state,
                   const MemcapacitorParams& params);

/// Bilayer area a*pi*R^2.
double area(const MemcapacitorState& state, const MemcapacitorParams& params);

struct StepResult {
  MemcapacitorState state;
  bool floor_hit = false;  // W was clamped to w_min
};

/// One classical RK4 step with `v` held over `dt`. The thickness is clamped
/// to `w_min` (and the clamp reported) if the step would take it lower.
/// Throws IntegrationDiverged if the new state is not finite.
StepResult step(const MemcapacitorState& state, double v, double dt,
                const MemcapacitorParams& params, double w_min);

/// Default floor for W as a fraction of W0.
inline constexpr double kDefaultWMinFraction = 0.2;

struct SteadyStateOptions {
  double tolerance = 1e-12;  // relative residual of both equations
  int max_iterations = 200;
  double voltage_guard = 1.0;  // |v| above this is rejected, V
};

struct SteadyState {
  double R;
  double W;
  double residual;  // max relative residual of the two balance equations
  int iterations;
};

/// Fixed point of the state equations under a constant voltage: the upper
/// (stable) root with W in (0, W0]. Throws SolverFailed when no physical
/// root exists (electrocompression collapse) or Newton does not converge.
SteadyState steady_state(double v, const MemcapacitorParams& params,
                         const SteadyStateOptions& options = {});

namespace sample {
/// Every integration step, plus the initial state.
struct EveryStep {};
/// The initial state and the state at the end of every segment.
struct SegmentEnds {};
/// The last integration step at or before each requested time.
struct AtTimes {
  std::vector<double> times;
};
}  // namespace sample

using SamplePolicy =
    std::variant<sample::EveryStep, sample::SegmentEnds, sample::AtTimes>;

struct SimulationOptions {
  double dt = 1e-3;
  double w_min_fraction = kDefaultWMinFraction;
  SamplePolicy sampling = sample::EveryStep{};
  /// Starting state; rest (R0, W0, t=0) when empty.
  std::optional<MemcapacitorState> initial;
};

/// Sampled device response. `voltage[i]` is the voltage applied over the
/// step that ended at `times[i]` (0 V for the initial sample).
struct CapacitanceTrace {
  std::vector<double> times;
  std::vector<double> voltage;
  std::vector<double> capacitance;
  std::vector<double> radius;
  std::vector<double> thickness;
  std::vector<double> area;
  double C0 = 0.0;
  std::size_t floor_hits = 0;
  MemcapacitorState final_state;

  std::size_t size() const noexcept { return times.size(); }
  std::vector<double> normalized() const;
};

/// Number of integration steps used for a segment: round(duration / dt),
/// at least one. Throws InvalidInput if the segment is shorter than dt/2.
std::size_t step_count(double duration, double dt);

/// Integrates the device under `train`. Each segment runs for
/// step_count(duration, dt) steps, so the simulated time can differ from
/// the nominal one by up to dt/2 per segment.
CapacitanceTrace simulate(const PulseTrain& train,
                          const MemcapacitorParams& params,
                          const SimulationOptions& options = {});

/// CSV with header `t_s,v_V,R_m,W_m,A_m2,C_F,C_over_C0`.
std::string format_trace_csv(const CapacitanceTrace& trace);
CapacitanceTrace parse_trace_csv(const std::string& text,
                                 const std::string& origin = "<string>");

}  // namespace memcap
