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

#include "memcap/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "memcap/errors.hpp"
#include "memcap/io.hpp"
#include "memcap/kernels.hpp"

namespace memcap {

DeviceBank make_device_bank(const MemcapacitorParams& base, std::size_t n,
                            double rel_sigma, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("device bank needs at least one device");
  if (!(rel_sigma >= 0.0) || !std::isfinite(rel_sigma)) {
    throw InvalidInput("rel_sigma must be finite and non-negative");
  }
  base.validate();
  DeviceBank bank;
  bank.seed = seed;
  bank.rel_sigma = rel_sigma;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    MemcapacitorParams p = base;
    const double gR = truncated_normal(rng, 3.0);
    const double gW = truncated_normal(rng, 3.0);
    p.R0 *= 1.0 + rel_sigma * gR;
    p.W0 *= 1.0 + rel_sigma * gW;
    if (!(p.R0 > 0.0) || !(p.W0 > 0.0)) {
      throw InvalidInput("device perturbation produced a non-positive size; "
                         "reduce rel_sigma");
    }
    bank.devices.push_back(p);
  }
  return bank;
}

namespace {

double normalized(const MemcapacitorParams& p, double R, double W) {
  return capacitance({R, W, 0.0}, p) / p.rest_capacitance();
}

struct LaneArrays {
  std::vector<double> R, W, drive, R0, W0, zeta_ew, k_ew, zeta_ec, k_ec,
      W_min, volts;
  std::vector<std::uint32_t> hits;

  LaneArrays(std::span<const MemcapacitorParams> lanes, double w_min_fraction) {
    const std::size_t n = lanes.size();
    for (auto* v : {&R, &W, &drive, &R0, &W0, &zeta_ew, &k_ew, &zeta_ec, &k_ec,
                    &W_min, &volts}) {
      v->resize(n);
    }
    hits.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = lanes[i];
      drive[i] = p.drive_coefficient();
      R0[i] = p.R0;
      W0[i] = p.W0;
      zeta_ew[i] = p.zeta_ew;
      k_ew[i] = p.k_ew;
      zeta_ec[i] = p.zeta_ec;
      k_ec[i] = p.k_ec;
      W_min[i] = w_min_fraction * p.W0;
    }
  }

  kernels::LaneBlock block(std::size_t b, std::size_t e) {
    const auto c = [&](const std::vector<double>& v) {
      return std::span<const double>(v).subspan(b, e - b);
    };
    return {std::span<double>(R).subspan(b, e - b),
            std::span<double>(W).subspan(b, e - b),
            c(drive), c(R0), c(W0), c(zeta_ew), c(k_ew), c(zeta_ec), c(k_ec),
            c(W_min), c(volts),
            std::span<std::uint32_t>(hits).subspan(b, e - b)};
  }
};

}  // namespace

LockstepResult run_lockstep(std::span<const MemcapacitorParams> lanes,
                            std::span<const double> durations,
                            std::span<const double> amplitudes,
                            const ReservoirOptions& options,
                            std::span<const MemcapacitorState> initial) {
  const std::size_t n_lanes = lanes.size();
  const std::size_t n_seg = durations.size();
  if (n_lanes == 0 || n_seg == 0) {
    throw InvalidInput("run_lockstep: need at least one lane and one segment");
  }
  if (amplitudes.size() != n_seg * n_lanes) {
    throw DimensionMismatch("run_lockstep: amplitudes must be segments x lanes");
  }
  if (!initial.empty() && initial.size() != n_lanes) {
    throw DimensionMismatch("run_lockstep: one initial state per lane");
  }
  for (const auto& p : lanes) p.validate();
  for (double a : amplitudes) {
    if (!std::isfinite(a)) throw InvalidInput("run_lockstep: non-finite amplitude");
  }

  std::vector<std::size_t> steps(n_seg);
  for (std::size_t s = 0; s < n_seg; ++s) {
    steps[s] = step_count(durations[s], options.dt);
  }

  LaneArrays arrays(lanes, options.w_min_fraction);
  LockstepResult out;
  out.segments = n_seg;
  out.lanes = n_lanes;
  out.ratio.resize(n_seg * n_lanes);
  out.C0.resize(n_lanes);
  out.initial_ratio.resize(n_lanes);
  out.final_state.resize(n_lanes);
  std::vector<double> t0(n_lanes, 0.0);
  for (std::size_t i = 0; i < n_lanes; ++i) {
    const MemcapacitorState s0 = initial.empty() ? rest_state(lanes[i]) : initial[i];
    if (!(s0.R > 0.0) || !(s0.W > 0.0)) {
      throw InvalidInput("run_lockstep: initial state must have R, W > 0");
    }
    arrays.R[i] = s0.R;
    arrays.W[i] = s0.W;
    t0[i] = s0.t;
    out.C0[i] = lanes[i].rest_capacitance();
    out.initial_ratio[i] = normalized(lanes[i], s0.R, s0.W);
  }

  const kernels::Isa isa = kernels::active_isa();
  const auto process = [&](std::size_t b, std::size_t e) {
    auto block = arrays.block(b, e);
    std::size_t done = 0;
    for (std::size_t s = 0; s < n_seg; ++s) {
      for (std::size_t i = b; i < e; ++i) {
        arrays.volts[i] = amplitudes[s * n_lanes + i];
      }
      kernels::advance(isa, block, options.dt, steps[s]);
      for (std::size_t i = b; i < e; ++i) {
        const double R = arrays.R[i];
        const double W = arrays.W[i];
        if (!std::isfinite(R) || !std::isfinite(W) || !(R > 0.0)) {
          throw IntegrationDiverged(
              t0[i] + static_cast<double>(done) * options.dt, options.dt);
        }
        out.ratio[s * n_lanes + i] = normalized(lanes[i], R, W);
      }
      done += steps[s];
    }
    for (std::size_t i = b; i < e; ++i) {
      out.final_state[i] = {arrays.R[i], arrays.W[i],
                            t0[i] + static_cast<double>(done) * options.dt};
    }
  };

  const std::size_t jobs = std::max<unsigned>(1, options.jobs);
  if (jobs == 1 || n_lanes < 8) {
    process(0, n_lanes);
  } else {
    // Chunk boundaries on multiples of four keep SIMD groups intact.
    const std::size_t groups = (n_lanes + 3) / 4;
    const std::size_t workers = std::min(jobs, groups);
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t b = std::min(n_lanes, 4 * (groups * w / workers));
        const std::size_t e = std::min(n_lanes, 4 * (groups * (w + 1) / workers));
        threads.emplace_back([&, b, e, w] {
          try {
            if (b < e) process(b, e);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  out.floor_hits.assign(arrays.hits.begin(), arrays.hits.end());
  return out;
}

ReservoirRun run_reservoir(const PulseTrain& train,
                           const MemcapacitorParams& params,
                           const ReservoirOptions& options,
                           std::optional<MemcapacitorState> initial, Rng* rng) {
  if (train.empty()) throw InvalidInput("run_reservoir: empty pulse train");
  std::vector<double> durations, amplitudes;
  for (const auto& s : train.segments()) {
    durations.push_back(s.duration);
    amplitudes.push_back(s.amplitude);
  }
  std::vector<MemcapacitorState> init;
  if (initial) init.push_back(*initial);
  const auto result =
      run_lockstep(std::span(&params, 1), durations, amplitudes, options, init);

  ReservoirRun run;
  std::vector<double> C_before(train.size());
  for (std::size_t k = 0; k < train.size(); ++k) {
    C_before[k] = result.C0[0] *
                  (k == 0 ? result.initial_ratio[0] : result.ratio[k - 1]);
    if (train.segments()[k].sampled) run.samples.push_back(result.ratio[k]);
  }
  run.energy = edge_energy(amplitudes, durations, C_before,
                           options.charge_factor);
  run.final_state = result.final_state[0];
  run.floor_hits = result.floor_hits[0];
  if (options.noise_sigma > 0.0) {
    Rng local(options.noise_seed);
    apply_noise(run.samples, options.noise_sigma, rng ? *rng : local);
  }
  return run;
}

std::vector<double> select_virtual_nodes(std::span<const double> seq,
                                         std::size_t every_k) {
  if (every_k == 0) throw InvalidInput("select_virtual_nodes: k must be >= 1");
  if (seq.empty() || seq.size() % every_k != 0) {
    throw InvalidInput("select_virtual_nodes: length " +
                       std::to_string(seq.size()) +
                       " is not a positive multiple of " +
                       std::to_string(every_k));
  }
  std::vector<double> out;
  out.reserve(seq.size() / every_k);
  for (std::size_t i = every_k - 1; i < seq.size(); i += every_k) {
    out.push_back(seq[i]);
  }
  return out;
}

IntegratedFeatures integrate_features(std::span<const double> seq,
                                      std::size_t window, double period) {
  if (window == 0) throw InvalidInput("integrate_features: window must be >= 1");
  if (!(period > 0.0)) throw InvalidInput("integrate_features: period must be > 0");
  if (seq.size() < window) {
    throw InvalidInput("integrate_features: sequence shorter than window");
  }
  IntegratedFeatures out;
  const std::size_t full = seq.size() / window;
  out.dropped = seq.size() - full * window;
  out.features.reserve(full);
  for (std::size_t w = 0; w < full; ++w) {
    double sum = 0.0;
    for (std::size_t i = w * window; i < (w + 1) * window; ++i) sum += seq[i];
    out.features.push_back(sum * period);
  }
  return out;
}

StateMatrix::StateMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

StateMatrix StateMatrix::select_rows(std::span<const std::size_t> indices) const {
  StateMatrix out(indices.size(), cols_);
  out.column_names = column_names;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= rows_) throw InvalidInput("select_rows: index out of range");
    std::copy_n(row(indices[r]).begin(), cols_, out.row(r).begin());
    if (!row_labels.empty()) out.row_labels.push_back(row_labels[indices[r]]);
  }
  return out;
}

void StateMatrix::check_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) throw InvalidInput("state matrix has a non-finite entry");
  }
}

std::string column_name(std::size_t device, std::size_t encoding,
                        std::size_t node) {
  return "d" + std::to_string(device) + "_e" + std::to_string(encoding) + "_n" +
         std::to_string(node);
}

std::string format_state_matrix_csv(const StateMatrix& m) {
  std::string out;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (c) out += ',';
    out += c < m.column_names.size() ? m.column_names[c] : "c" + std::to_string(c);
  }
  const bool labels = !m.row_labels.empty();
  if (labels) out += m.cols() ? ",label" : "label";
  out += '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += io::format_double(m(r, c));
    }
    if (labels) {
      if (m.cols()) out += ',';
      out += io::format_double(m.row_labels[r]);
    }
    out += '\n';
  }
  return out;
}

StateMatrix parse_state_matrix_csv(const std::string& text,
                                   const std::string& origin) {
  const auto rows = io::lines(text);
  if (rows.empty()) throw ParseError(origin, "empty state matrix file");
  std::vector<std::string> names;
  for (auto cell : io::split(rows[0], ',')) names.emplace_back(io::trim(cell));
  const bool labels = !names.empty() && names.back() == "label";
  if (labels) names.pop_back();

  StateMatrix m(rows.size() - 1, names.size());
  m.column_names = names;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto cells = io::split(rows[r], ',');
    if (cells.size() != names.size() + (labels ? 1 : 0)) {
      throw ParseError(origin, "line " + std::to_string(r + 1) +
                                   ": wrong number of columns");
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto x = io::to_double(cells[c]);
      if (!x) {
        throw ParseError(origin, "line " + std::to_string(r + 1) +
                                     ": malformed number");
      }
      if (c < names.size()) {
        m(r - 1, c) = *x;
      } else {
        m.row_labels.push_back(*x);
      }
    }
  }
  return m;
}

std::vector<double> extract_nodes(std::span<const double> samples,
                                  const NodeSpec& spec, std::size_t* dropped) {
  std::size_t lost = 0;
  std::vector<double> out;
  if (std::holds_alternative<nodes::EachSample>(spec)) {
    out.assign(samples.begin(), samples.end());
  } else if (const auto* every = std::get_if<nodes::EveryK>(&spec)) {
    auto seq = samples;
    if (every->truncate && every->k > 0) {
      lost = seq.size() % every->k;
      seq = seq.first(seq.size() - lost);
    }
    out = select_virtual_nodes(seq, every->k);
  } else {
    const auto& integ = std::get<nodes::Integrate>(spec);
    auto f = integrate_features(samples, integ.window, integ.period);
    lost = f.dropped;
    out = std::move(f.features);
  }
  if (dropped) *dropped += lost;
  return out;
}

namespace {

PulseTrain encode_any(const EncoderSpec& spec, std::span<const double> input) {
  return std::visit(
      [&](const auto& s) -> PulseTrain {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BinaryLevels>) {
          std::vector<std::uint8_t> bits;
          bits.reserve(input.size());
          for (double x : input) {
            if (x != 0.0 && x != 1.0) {
              throw InvalidInput("binary encoder: inputs must be 0 or 1");
            }
            bits.push_back(x == 1.0 ? 1 : 0);
          }
          return encode_binary(bits, s);
        } else if constexpr (std::is_same_v<T, AmplitudeMap>) {
          return encode_amplitude(input, s);
        } else if constexpr (std::is_same_v<T, ClipAbsMap>) {
          return encode_eeg(input, s);
        } else {
          throw InvalidInput("static features need per-feature ranges; use "
                             "encode_static");
        }
      },
      spec);
}

std::vector<double> durations_of(const PulseTrain& t) {
  std::vector<double> d;
  d.reserve(t.size());
  for (const auto& s : t.segments()) d.push_back(s.duration);
  return d;
}

}  // namespace

BuiltStates build_state_matrix(const std::vector<std::vector<double>>& examples,
                               const DeviceBank& bank,
                               std::span<const EncoderSpec> encoders,
                               const NodeSpec& node_spec,
                               const ReservoirOptions& options) {
  if (examples.empty()) throw InvalidInput("build_state_matrix: no examples");
  if (bank.devices.empty() || encoders.empty()) {
    throw InvalidInput("build_state_matrix: need devices and encoders");
  }
  const std::size_t n_ex = examples.size();
  const std::size_t n_dev = bank.devices.size();
  const std::size_t n_enc = encoders.size();

  // samples[(e * n_dev + d) * n_ex + i]: end-of-segment samples of one run.
  std::vector<std::vector<double>> samples(n_enc * n_dev * n_ex);
  std::vector<EnergyReport> energy(n_ex);
  std::vector<std::vector<EnergyReport>> per_run(n_ex);
  BuiltStates built;

  for (std::size_t e = 0; e < n_enc; ++e) {
    std::vector<PulseTrain> trains;
    trains.reserve(n_ex);
    for (const auto& ex : examples) trains.push_back(encode_any(encoders[e], ex));

    const auto schedule = durations_of(trains[0]);
    const bool shared = std::all_of(trains.begin(), trains.end(), [&](const auto& t) {
      return durations_of(t) == schedule;
    });

    // Lanes are (example, device) pairs; one lockstep group if every
    // example shares the schedule, otherwise one group per example.
    const auto run_group = [&](std::size_t first, std::size_t count) {
      const auto& sched = durations_of(trains[first]);
      const std::size_t n_seg = sched.size();
      std::vector<MemcapacitorParams> lanes;
      for (std::size_t i = first; i < first + count; ++i) {
        lanes.insert(lanes.end(), bank.devices.begin(), bank.devices.end());
      }
      const std::size_t n_lanes = lanes.size();
      std::vector<double> amps(n_seg * n_lanes);
      for (std::size_t s = 0; s < n_seg; ++s) {
        for (std::size_t i = 0; i < count; ++i) {
          const double a = trains[first + i].segments()[s].amplitude;
          for (std::size_t d = 0; d < n_dev; ++d) {
            amps[s * n_lanes + i * n_dev + d] = a;
          }
        }
      }
      const auto res = run_lockstep(lanes, sched, amps, options);
      for (std::size_t i = 0; i < count; ++i) {
        const auto& train = trains[first + i];
        std::vector<double> seg_amps(n_seg);
        for (std::size_t s = 0; s < n_seg; ++s) seg_amps[s] = train.segments()[s].amplitude;
        for (std::size_t d = 0; d < n_dev; ++d) {
          const std::size_t lane = i * n_dev + d;
          auto& out = samples[(e * n_dev + d) * n_ex + first + i];
          std::vector<double> C_before(n_seg);
          for (std::size_t s = 0; s < n_seg; ++s) {
            C_before[s] = res.C0[lane] *
                          (s == 0 ? res.initial_ratio[lane] : res.at(s - 1, lane));
            if (train.segments()[s].sampled) out.push_back(res.at(s, lane));
          }
          per_run[first + i].push_back(
              edge_energy(seg_amps, sched, C_before, options.charge_factor));
          built.floor_hits += res.floor_hits[lane];
        }
      }
    };

    if (shared) {
      run_group(0, n_ex);
    } else {
      for (std::size_t i = 0; i < n_ex; ++i) run_group(i, 1);
    }
  }

  if (options.noise_sigma > 0.0) {
    Rng rng(options.noise_seed);
    for (auto& s : samples) apply_noise(s, options.noise_sigma, rng);
  }

  std::size_t n_nodes = 0;
  std::vector<std::vector<double>> node_values(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    node_values[k] = extract_nodes(samples[k], node_spec, &built.dropped_samples);
    if (k == 0) n_nodes = node_values[k].size();
    if (node_values[k].size() != n_nodes) {
      throw DimensionMismatch("build_state_matrix: ragged feature counts");
    }
  }

  StateMatrix m(n_ex, n_dev * n_enc * n_nodes);
  for (std::size_t d = 0; d < n_dev; ++d) {
    for (std::size_t e = 0; e < n_enc; ++e) {
      for (std::size_t n = 0; n < n_nodes; ++n) {
        m.column_names.push_back(column_name(d, e, n));
      }
    }
  }
  for (std::size_t i = 0; i < n_ex; ++i) {
    for (std::size_t d = 0; d < n_dev; ++d) {
      for (std::size_t e = 0; e < n_enc; ++e) {
        const auto& v = node_values[(e * n_dev + d) * n_ex + i];
        std::copy(v.begin(), v.end(),
                  m.row(i).begin() + static_cast<std::ptrdiff_t>((d * n_enc + e) * n_nodes));
      }
    }
    energy[i] = combine(per_run[i]);
  }
  m.check_finite();
  built.matrix = std::move(m);
  built.energy = std::move(energy);
  return built;
}

BuiltStates build_streaming_state_matrix(std::span<const double> sequence,
                                         const DeviceBank& bank,
                                         std::span<const AmplitudeMap> encoders,
                                         const ReservoirOptions& options) {
  if (sequence.empty()) throw InvalidInput("streaming: empty sequence");
  if (bank.devices.empty() || encoders.empty()) {
    throw InvalidInput("streaming: need devices and encoders");
  }
  const std::size_t n_frames = sequence.size();
  const std::size_t n_dev = bank.devices.size();
  const std::size_t n_enc = encoders.size();

  BuiltStates built;
  StateMatrix m(n_frames, n_dev * n_enc);
  for (std::size_t d = 0; d < n_dev; ++d) {
    for (std::size_t e = 0; e < n_enc; ++e) m.column_names.push_back(column_name(d, e, 0));
  }
  std::vector<std::vector<EnergyReport>> per_frame(n_frames);
  Rng noise(options.noise_seed);

  for (std::size_t e = 0; e < n_enc; ++e) {
    const PulseTrain train = encode_amplitude(sequence, encoders[e]);
    const auto sched = durations_of(train);
    const std::size_t n_seg = sched.size();
    const std::size_t per = n_seg / n_frames;
    std::vector<double> seg_amps(n_seg);
    for (std::size_t s = 0; s < n_seg; ++s) seg_amps[s] = train.segments()[s].amplitude;
    std::vector<double> amps(n_seg * n_dev);
    for (std::size_t s = 0; s < n_seg; ++s) {
      for (std::size_t d = 0; d < n_dev; ++d) amps[s * n_dev + d] = seg_amps[s];
    }
    const auto res = run_lockstep(bank.devices, sched, amps, options);
    for (std::size_t d = 0; d < n_dev; ++d) {
      built.floor_hits += res.floor_hits[d];
      for (std::size_t t = 0; t < n_frames; ++t) {
        // The on-pulse is the first segment of each frame.
        m(t, d * n_enc + e) = res.at(t * per, d);
        std::vector<double> C_before(per);
        for (std::size_t j = 0; j < per; ++j) {
          const std::size_t s = t * per + j;
          C_before[j] = res.C0[d] * (s == 0 ? res.initial_ratio[d] : res.at(s - 1, d));
        }
        const double prev = t == 0 ? 0.0 : seg_amps[t * per - 1];
        per_frame[t].push_back(edge_energy(
            std::span(seg_amps).subspan(t * per, per),
            std::span(sched).subspan(t * per, per), C_before,
            options.charge_factor, prev));
      }
    }
  }
  if (options.noise_sigma > 0.0) {
    for (std::size_t r = 0; r < n_frames; ++r) {
      apply_noise(m.row(r), options.noise_sigma, noise);
    }
  }
  m.check_finite();
  built.matrix = std::move(m);
  built.energy.reserve(n_frames);
  for (auto& f : per_frame) built.energy.push_back(combine(f));
  return built;
}

void apply_noise(std::span<double> values, double sigma, Rng& rng) {
  if (sigma == 0.0) return;
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidInput("noise sigma must be finite and non-negative");
  }
  std::normal_distribution<double> normal(0.0, sigma);
  for (double& v : values) v += normal(rng);
}

}  // namespace memcap
