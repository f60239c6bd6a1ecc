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

#include "memcap/errors.hpp"
#include "memcap/io.hpp"
#include "memcap/tasks.hpp"

namespace memcap {

nlohmann::ordered_json to_json(const Metrics& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (m.nmse_ratio) j["nmse_ratio"] = *m.nmse_ratio;
  if (m.nmse_variance) j["nmse_variance"] = *m.nmse_variance;
  if (m.accuracy) j["accuracy"] = *m.accuracy;
  if (!m.classes.empty()) {
    j["classes"] = m.classes;
    j["confusion"] = m.confusion;
  }
  return j;
}

nlohmann::ordered_json to_json(const EnergyReport& e) {
  return {{"total_energy_J", e.total_energy},
          {"energy_per_spike_J", e.energy_per_spike},
          {"mean_power_W", e.mean_power},
          {"spike_count", e.spike_count},
          {"pulse_width_s", e.pulse_width_s},
          {"duration_s", e.duration_s},
          {"charge_factor", e.charge_factor}};
}

nlohmann::ordered_json TaskReport::to_json() const {
  nlohmann::ordered_json j;
  j["task"] = task;
  j["seed"] = seed;
  j["config"] = config;
  j["results"] = results;
  j["wall_time_s"] = wall_time_s;
  return j;
}

double Settings::real(const std::string& key, double fallback) {
  const double v = cfg_.get_double(key, fallback);
  used_[key] = io::format_double(v);
  return v;
}

long long Settings::integer(const std::string& key, long long fallback) {
  const long long v = cfg_.get_int(key, fallback);
  used_[key] = std::to_string(v);
  return v;
}

std::size_t Settings::count(const std::string& key, std::size_t fallback) {
  const long long v = integer(key, static_cast<long long>(fallback));
  if (v < 0) throw UsageError("config key " + key + " must be non-negative");
  return static_cast<std::size_t>(v);
}

bool Settings::flag(const std::string& key, bool fallback) {
  const bool v = cfg_.get_bool(key, fallback);
  used_[key] = v ? "true" : "false";
  return v;
}

std::string Settings::text(const std::string& key, const std::string& fallback) {
  auto v = cfg_.get_string(key, fallback);
  used_[key] = v;
  return v;
}

std::vector<double> Settings::reals(const std::string& key,
                                    std::vector<double> fallback) {
  auto v = cfg_.get_doubles(key, std::move(fallback));
  std::string joined;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) joined += ',';
    joined += io::format_double(v[i]);
  }
  used_[key] = joined;
  return v;
}

std::optional<std::filesystem::path> Settings::path(const std::string& key) {
  auto p = cfg_.get_path(key);
  if (p) used_[key] = cfg_.get_string(key, "");
  return p;
}

std::uint64_t Settings::seed() {
  if (!cfg_.has("run.seed")) throw UsageError("config must set run.seed");
  const std::uint64_t s = cfg_.get_seed("run.seed", 0);
  used_["run.seed"] = std::to_string(s);
  return s;
}

CommonSettings read_common(Settings& s, double default_dt) {
  CommonSettings c;
  c.seed = s.seed();
  const auto params_path = s.path("device.params");
  if (!params_path) throw UsageError("config must set device.params");
  if (!std::filesystem::exists(*params_path)) {
    throw UsageError("device parameter file " + params_path->string() +
                     " does not exist");
  }
  c.params = load_params(*params_path);
  c.reservoir.dt = s.real("sim.dt", default_dt);
  c.reservoir.w_min_fraction = s.real("sim.w_min_fraction", kDefaultWMinFraction);
  c.reservoir.noise_sigma = s.real("sim.noise_sigma", 0.0);
  c.reservoir.noise_seed = derive_seed(c.seed, "noise");
  c.reservoir.charge_factor = s.real("energy.charge_factor", 1.0);
  c.reservoir.jobs = static_cast<unsigned>(std::max<std::size_t>(1, s.count("run.jobs", 1)));
  if (!(c.reservoir.dt > 0.0)) throw UsageError("sim.dt must be positive");
  return c;
}

LinearConfig read_linear(Settings& s) {
  LinearConfig c;
  const auto method = s.text("readout.method", "closed-form");
  if (method == "closed-form") {
    c.method = LinearConfig::Method::kClosedForm;
  } else if (method == "gradient-descent") {
    c.method = LinearConfig::Method::kGradientDescent;
  } else {
    throw UsageError("readout.method must be closed-form or gradient-descent");
  }
  c.ridge_lambda = s.real("readout.ridge_lambda", c.ridge_lambda);
  c.lr = s.real("readout.lr", c.lr);
  c.iters = s.count("readout.iters", c.iters);
  return c;
}

LogisticConfig read_logistic(Settings& s) {
  LogisticConfig c;
  c.l2_lambda = s.real("readout.l2_lambda", c.l2_lambda);
  c.lr = s.real("readout.lr", c.lr);
  c.iters = s.count("readout.iters", c.iters);
  return c;
}

}  // namespace memcap
