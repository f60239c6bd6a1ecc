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

#include <algorithm>
#include <cmath>
#include <regex>

#include "memcap/errors.hpp"
#include "memcap/io.hpp"
#include "memcap/tasks.hpp"

namespace memcap {

std::vector<double> second_order_response(std::span<const double> u) {
  std::vector<double> y(u.size());
  double y1 = 0.0;
  double y2 = 0.0;
  for (std::size_t t = 0; t < u.size(); ++t) {
    y[t] = 0.4 * y1 + 0.4 * y1 * y2 + 0.6 * u[t] * u[t] * u[t] + 0.1;
    y2 = y1;
    y1 = y[t];
  }
  return y;
}

SecondOrderSeries gen_second_order(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("gen_second_order: n must be >= 1");
  SecondOrderSeries s;
  s.seed = seed;
  Rng rng(seed);
  s.u.resize(n);
  for (double& x : s.u) x = uniform(rng, 0.0, 0.5);
  s.y = second_order_response(s.u);
  return s;
}

Cochleogram parse_cochleogram_csv(const std::string& text, int label,
                                  const std::string& id,
                                  const std::string& origin) {
  const auto rows = io::lines(text);
  if (rows.size() != kCochleogramChannels) {
    throw ParseError(origin, "expected " + std::to_string(kCochleogramChannels) +
                                 " rows, found " + std::to_string(rows.size()));
  }
  Cochleogram c;
  c.label = label;
  c.id = id;
  c.bits.reserve(kCochleogramChannels * kCochleogramSteps);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto cells = io::split(rows[r], ',');
    if (cells.size() != kCochleogramSteps) {
      throw ParseError(origin, "row " + std::to_string(r + 1) + " has " +
                                   std::to_string(cells.size()) + " values, expected " +
                                   std::to_string(kCochleogramSteps));
    }
    for (auto cell : cells) {
      const auto v = io::trim(cell);
      if (v != "0" && v != "1") {
        throw ParseError(origin, "row " + std::to_string(r + 1) +
                                     ": non-binary value '" + std::string(v) + "'");
      }
      c.bits.push_back(v == "1" ? 1 : 0);
    }
  }
  return c;
}

std::string format_cochleogram_csv(const Cochleogram& c) {
  std::string out;
  for (std::size_t ch = 0; ch < kCochleogramChannels; ++ch) {
    const auto row = c.channel(ch);
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (t) out += ',';
      out += row[t] ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

std::vector<Cochleogram> load_cochleograms(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw UsageError("cochleogram directory " + dir.string() +
                     " not found; expected files digit_<label>_<idx>.csv with 50 "
                     "rows of 40 comma-separated 0/1 values");
  }
  static const std::regex name(R"(digit_(\d)_(\d+)\.csv)");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto fname = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(fname, name)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw UsageError("no digit_<label>_<idx>.csv files in " + dir.string());
  }
  std::vector<Cochleogram> out;
  out.reserve(files.size());
  for (const auto& f : files) {
    std::smatch m;
    const auto fname = f.filename().string();
    std::regex_match(fname, m, name);
    out.push_back(parse_cochleogram_csv(io::read_file(f), std::stoi(m[1].str()),
                                        f.stem().string(), f.string()));
  }
  return out;
}

ChannelDedup dedup_channels(std::span<const Cochleogram> set) {
  ChannelDedup d;
  std::map<std::vector<std::uint8_t>, std::size_t> seen;
  d.back_map.reserve(set.size());
  for (const auto& c : set) {
    std::vector<std::size_t> row;
    row.reserve(kCochleogramChannels);
    for (std::size_t ch = 0; ch < kCochleogramChannels; ++ch) {
      std::vector<std::uint8_t> bits(c.channel(ch).begin(), c.channel(ch).end());
      const auto [it, inserted] = seen.emplace(bits, d.uniques.size());
      if (inserted) d.uniques.push_back(std::move(bits));
      row.push_back(it->second);
    }
    d.back_map.push_back(std::move(row));
  }
  return d;
}

std::vector<Cochleogram> gen_synthetic_cochleograms(
    const SyntheticCochleogramOptions& o) {
  if (o.classes < 2 || o.per_class == 0 || o.block_steps == 0 ||
      kCochleogramSteps % o.block_steps != 0 || o.onset_group == 0) {
    throw InvalidInput("synthetic cochleograms: inconsistent options");
  }
  const std::size_t blocks = kCochleogramSteps / o.block_steps;
  if (o.onset_blocks >= blocks) {
    throw InvalidInput("synthetic cochleograms: onset must leave class blocks");
  }
  Rng rng(o.seed);
  const std::size_t cells = kCochleogramChannels * blocks;
  const auto draw = [&](double p) { return uniform(rng, 0.0, 1.0) < p ? 1 : 0; };

  const std::size_t groups = (o.classes + o.onset_group - 1) / o.onset_group;
  std::vector<std::vector<std::uint8_t>> onset(groups, std::vector<std::uint8_t>(cells));
  for (auto& g : onset) {
    for (auto& v : g) v = static_cast<std::uint8_t>(draw(o.active_fraction));
  }
  // Class prototypes; the class-specific blocks of any two classes differ
  // in at least five cells.
  std::vector<std::vector<std::uint8_t>> proto(o.classes);
  for (std::size_t c = 0; c < o.classes; ++c) {
    for (;;) {
      auto& p = proto[c];
      p = onset[c / o.onset_group];
      for (std::size_t ch = 0; ch < kCochleogramChannels; ++ch) {
        for (std::size_t b = o.onset_blocks; b < blocks; ++b) {
          p[ch * blocks + b] = static_cast<std::uint8_t>(draw(o.active_fraction));
        }
      }
      bool distinct = true;
      for (std::size_t k = 0; k < c && distinct; ++k) {
        std::size_t diff = 0;
        for (std::size_t i = 0; i < cells; ++i) diff += p[i] != proto[k][i];
        distinct = diff >= 5;
      }
      if (distinct) break;
    }
  }

  std::vector<Cochleogram> out;
  out.reserve(o.classes * o.per_class);
  for (std::size_t c = 0; c < o.classes; ++c) {
    for (std::size_t i = 0; i < o.per_class; ++i) {
      Cochleogram x;
      x.label = static_cast<int>(c);
      x.id = "digit_" + std::to_string(c) + "_" + std::to_string(i);
      x.bits.resize(kCochleogramChannels * kCochleogramSteps);
      for (std::size_t ch = 0; ch < kCochleogramChannels; ++ch) {
        for (std::size_t b = 0; b < blocks; ++b) {
          const std::uint8_t v = proto[c][ch * blocks + b] ^
                                 static_cast<std::uint8_t>(draw(o.block_flip));
          for (std::size_t t = 0; t < o.block_steps; ++t) {
            x.bits[ch * kCochleogramSteps + b * o.block_steps + t] = v;
          }
        }
      }
      out.push_back(std::move(x));
    }
  }
  return out;
}

EegRecord parse_eeg_record(const std::string& text, int label,
                           const std::string& id, const std::string& origin) {
  EegRecord r;
  r.label = label;
  r.id = id;
  const auto rows = io::lines(text);
  if (rows.size() != kEegRecordLength) {
    throw ParseError(origin, "EEG record has " + std::to_string(rows.size()) +
                                 " samples, expected " +
                                 std::to_string(kEegRecordLength));
  }
  r.samples.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto v = io::to_double(rows[i]);
    if (!v || !std::isfinite(*v)) {
      throw ParseError(origin, "line " + std::to_string(i + 1) + ": malformed sample");
    }
    r.samples.push_back(*v);
  }
  return r;
}

std::vector<EegRecord> load_eeg_bonn(const std::filesystem::path& dir) {
  std::vector<EegRecord> out;
  const std::pair<const char*, int> classes[] = {{"Z", 0}, {"S", 1}};
  for (const auto& [name, label] : classes) {
    const auto sub = dir / name;
    if (!std::filesystem::is_directory(sub)) {
      throw UsageError("EEG class directory " + sub.string() +
                       " not found; expected <dir>/Z/*.txt and <dir>/S/*.txt, "
                       "4097 integer samples per file");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(sub)) {
      auto ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
      if (entry.is_regular_file() && ext == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw UsageError("no .txt records in " + sub.string());
    for (const auto& f : files) {
      out.push_back(parse_eeg_record(io::read_file(f), label,
                                     std::string(name) + "/" + f.stem().string(),
                                     f.string()));
    }
  }
  return out;
}

IrisData parse_iris_csv(const std::string& text, const std::string& origin) {
  IrisData d;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  for (auto line : io::lines(text)) {
    ++line_no;
    const auto cells = io::split(line, ',');
    if (cells.size() != 5) {
      throw ParseError(origin, "line " + std::to_string(line_no) +
                                   ": expected 4 features and a class name");
    }
    std::vector<double> row;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto v = io::to_double(cells[i]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(origin, "line " + std::to_string(line_no) + ": malformed number");
      }
      row.push_back(*v);
    }
    const std::string name(io::trim(cells[4]));
    auto it = std::find(d.class_names.begin(), d.class_names.end(), name);
    if (it == d.class_names.end()) {
      d.class_names.push_back(name);
      it = d.class_names.end() - 1;
    }
    d.labels.push_back(static_cast<int>(it - d.class_names.begin()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(origin, "no data rows");
  d.features = StateMatrix(rows.size(), 4);
  d.features.column_names = {"sepal_length", "sepal_width", "petal_length",
                             "petal_width"};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), d.features.row(r).begin());
  }
  return d;
}

IrisData load_iris(const std::filesystem::path& path) {
  return parse_iris_csv(io::read_file(path), path.string());
}

Split stratified_split(std::span<const int> labels, double test_fraction,
                       Rng& rng) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidInput("test fraction must lie in (0, 1)");
  }
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  Split s;
  for (int c : classes) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) idx.push_back(i);
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(idx.size())));
    if (idx.size() >= 2) n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    s.test.insert(s.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.insert(s.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

}  // namespace memcap
