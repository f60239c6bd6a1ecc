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

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>

#include "memcap/characterize.hpp"
#include "memcap/config.hpp"
#include "memcap/energy.hpp"
#include "memcap/errors.hpp"
#include "memcap/io.hpp"
#include "memcap/kernels.hpp"
#include "memcap/tasks.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

memcap::Config load_config(const std::string& path,
                           const std::vector<std::string>& overrides) {
  memcap::Config cfg = path.empty() ? memcap::Config{} : memcap::Config::load(path);
  for (const auto& o : overrides) cfg.apply_override(o);
  return cfg;
}

void write(const fs::path& path, const std::string& text) {
  memcap::io::write_file_atomic(path, text);
}

std::string csv_trace(const memcap::CapacitanceTrace& t) {
  return memcap::format_trace_csv(t);
}

int cmd_characterize(const memcap::Config& cfg, const fs::path& out) {
  memcap::Settings s(cfg);
  const auto params_path = s.path("device.params");
  if (!params_path) throw memcap::UsageError("config must set device.params");
  const auto params = memcap::load_params(*params_path);

  memcap::SimulationOptions sim;
  sim.dt = s.real("sim.dt", 1e-3);
  sim.w_min_fraction = s.real("sim.w_min_fraction", memcap::kDefaultWMinFraction);

  memcap::PpfOptions ppf;
  ppf.amplitude_V = s.real("ppf.amplitude_V", ppf.amplitude_V);
  ppf.pulse_s = s.real("ppf.pulse_s", ppf.pulse_s);
  ppf.gap_s = s.real("ppf.gap_s", ppf.gap_s);
  ppf.pulses = s.count("ppf.pulses", ppf.pulses);
  memcap::HysteresisOptions hyst;
  hyst.amplitude_V = s.real("hysteresis.amplitude_V", hyst.amplitude_V);
  hyst.frequency_Hz = s.real("hysteresis.frequency_Hz", hyst.frequency_Hz);
  hyst.cycles = s.count("hysteresis.cycles", hyst.cycles);
  hyst.pinch_tolerance = s.real("hysteresis.pinch_tolerance", hyst.pinch_tolerance);
  memcap::DecayOptions decay;
  decay.amplitude_V = s.real("decay.amplitude_V", decay.amplitude_V);
  decay.hold_s = s.real("decay.hold_s", decay.hold_s);
  decay.max_wait_s = s.real("decay.max_wait_s", decay.max_wait_s);
  decay.band = s.real("decay.band", decay.band);
  memcap::SweepOptions sweep;
  sweep.max_V = s.real("sweep.max_V", sweep.max_V);
  sweep.increment_V = s.real("sweep.increment_V", sweep.increment_V);

  const auto p = memcap::run_ppf(params, ppf, sim);
  const auto h = memcap::run_hysteresis(params, hyst, sim);
  const auto d = memcap::run_decay(params, decay, sim);
  const auto sw = memcap::run_sweep(params, sweep);

  write(out / "ppf_trace.csv", csv_trace(p.trace));
  write(out / "hysteresis_trace.csv", csv_trace(h.trace));
  write(out / "decay_trace.csv", csv_trace(d.trace));
  std::string sweep_csv = "v_V,C_ss_over_C0,R_m,W_m\n";
  json curve = json::array();
  for (const auto& pt : sw) {
    sweep_csv += memcap::io::format_double(pt.v) + "," +
                 memcap::io::format_double(pt.ratio) + "," +
                 memcap::io::format_double(pt.R) + "," +
                 memcap::io::format_double(pt.W) + "\n";
    curve.push_back({pt.v, pt.ratio});
  }
  write(out / "steady_state.csv", sweep_csv);

  json j;
  j["config"] = s.used();
  j["C0_F"] = params.rest_capacitance();
  j["ppf"] = {{"peak_ratio", p.peak_ratio},
              {"facilitation", p.facilitation},
              {"monotone", p.monotone}};
  j["hysteresis"] = {{"loop_area_V", h.loop_area},
                     {"max_zero_crossing_deviation", h.max_zero_crossing_deviation},
                     {"pinched", h.pinched},
                     {"floor_hits", h.trace.floor_hits}};
  j["decay"] = {{"ratio_at_release", d.ratio_at_release},
                {"settled", d.settled},
                {"decay_time_s", d.decay_time_s}};
  j["steady_state"] = curve;
  const auto summary = out / "characterize.json";
  write(summary, j.dump(2) + "\n");
  std::cout << summary.string() << "\n";
  return 0;
}

int cmd_run(const std::string& task, memcap::Config cfg, const fs::path& out) {
  memcap::TaskReport report;
  if (task == "second-order") {
    report = memcap::run_second_order_task(cfg);
  } else if (task == "linear-baseline") {
    report = memcap::run_linear_baseline(cfg);
  } else if (task == "spoken-digits") {
    report = memcap::run_spoken_digit_task(cfg);
  } else if (task == "eeg") {
    report = memcap::run_eeg_task(cfg);
  } else if (task == "iris") {
    report = memcap::run_iris_task(cfg);
  } else {
    throw memcap::UsageError("unknown task " + task);
  }
  for (const auto& [name, content] : report.artifacts) {
    write(out / (task + "_" + name), content);
  }
  const auto path = out / (task + "_report.json");
  write(path, report.to_json().dump(2) + "\n");
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_energy(const std::vector<std::string>& traces, double factor,
               const std::string& out) {
  std::vector<memcap::EnergyReport> runs;
  for (const auto& t : traces) {
    const auto trace = memcap::parse_trace_csv(memcap::io::read_file(t), t);
    runs.push_back(memcap::energy_from_trace(trace, factor));
  }
  json j = memcap::to_json(memcap::combine(runs));
  j["traces"] = traces;
  const auto text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write(out, text);
    std::cout << out << "\n";
  }
  return 0;
}

int cmd_gen(const memcap::SyntheticCochleogramOptions& o, const fs::path& out) {
  const auto set = memcap::gen_synthetic_cochleograms(o);
  for (const auto& c : set) {
    write(out / (c.id + ".csv"), memcap::format_cochleogram_csv(c));
  }
  std::cout << set.size() << " cochleograms written to " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memcapacitive reservoir computing simulator"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "Kernel variant: scalar or avx2");

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";

  auto* ch = app.add_subcommand("characterize", "Device fingerprints");
  ch->add_option("--config", config_path, "Config file");
  ch->add_option("--set", overrides, "Override section.key=value");
  ch->add_option("--out", out_dir, "Output directory");

  auto* run = app.add_subcommand("run", "Run a benchmark task");
  std::string task;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool no_integration = false;
  run->add_option("task", task, "Task name")
      ->required()
      ->check(CLI::IsMember(
          {"second-order", "spoken-digits", "eeg", "iris", "linear-baseline"}));
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--set", overrides, "Override section.key=value");
  run->add_option("--seed", seed, "Root seed (overrides run.seed)");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--no-integration", no_integration,
                "EEG: plain virtual nodes instead of window integrals");
  run->add_option("--out", out_dir, "Output directory");

  auto* en = app.add_subcommand("energy", "Energy of simulated traces");
  std::vector<std::string> traces;
  double factor = 1.0;
  std::string energy_out;
  en->add_option("traces", traces, "Trace CSV files")->required();
  en->add_option("--charge-factor", factor, "1.0 (C dV^2) or 0.5");
  en->add_option("--out", energy_out, "Report file (stdout if omitted)");

  auto* gen = app.add_subcommand("gen-synthetic-cochleograms",
                                 "Write a synthetic cochleogram set");
  memcap::SyntheticCochleogramOptions syn;
  gen->add_option("--seed", syn.seed, "Generator seed");
  gen->add_option("--per-class", syn.per_class, "Examples per digit");
  gen->add_option("--block-flip", syn.block_flip, "Cell flip probability");
  gen->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!isa.empty()) {
      if (isa == "scalar") {
        memcap::kernels::set_active_isa(memcap::kernels::Isa::kScalar);
      } else if (isa == "avx2") {
        if (!memcap::kernels::isa_available(memcap::kernels::Isa::kAvx2)) {
          throw memcap::UsageError("AVX2 kernels are not available on this machine");
        }
        memcap::kernels::set_active_isa(memcap::kernels::Isa::kAvx2);
      } else {
        throw memcap::UsageError("--isa must be scalar or avx2");
      }
    }
    if (*ch) return cmd_characterize(load_config(config_path, overrides), out_dir);
    if (*run) {
      auto cfg = load_config(config_path, overrides);
      if (seed) cfg.set("run.seed", std::to_string(*seed));
      if (jobs > 1) cfg.set("run.jobs", std::to_string(jobs));
      if (no_integration) cfg.set("eeg.integrate", "false");
      return cmd_run(task, std::move(cfg), out_dir);
    }
    if (*en) {
      if (!(factor > 0.0)) throw memcap::UsageError("--charge-factor must be positive");
      return cmd_energy(traces, factor, energy_out);
    }
    if (*gen) return cmd_gen(syn, out_dir);
  } catch (const memcap::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
