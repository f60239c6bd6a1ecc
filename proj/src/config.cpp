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

#include "memcap/config.hpp"

#include "memcap/errors.hpp"
#include "memcap/io.hpp"

namespace memcap {

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0;
  for (auto raw : io::split(text, '\n')) {
    ++line_no;
    auto line = io::trim(raw);
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = io::trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw UsageError(where + ": unterminated section header");
      section = std::string(io::trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw UsageError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(where + ": expected key = value");
    }
    const auto key = io::trim(line.substr(0, eq));
    if (key.empty()) throw UsageError(where + ": empty key");
    const std::string full = section.empty() ? std::string(key)
                                             : section + "." + std::string(key);
    if (cfg.entries_.count(full)) throw UsageError(where + ": duplicate key " + full);
    cfg.entries_[full] = std::string(io::trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  Config cfg = parse(text, path.string());
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("override '" + assignment + "' is not section.key=value");
  }
  set(std::string(io::trim(std::string_view(assignment).substr(0, eq))),
      std::string(io::trim(std::string_view(assignment).substr(eq + 1))));
}

void Config::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  return get(key).value_or(fallback);
}

std::string Config::require_string(const std::string& key) const {
  const auto v = get(key);
  if (!v || v->empty()) throw UsageError("missing required config key " + key);
  return *v;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto x = io::to_double(*v);
  if (!x) throw UsageError("config key " + key + ": '" + *v + "' is not a number");
  return *x;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto x = io::to_integer(*v);
  if (!x) throw UsageError("config key " + key + ": '" + *v + "' is not an integer");
  return *x;
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
  const long long x = get_int(key, static_cast<long long>(fallback));
  if (x < 0) throw UsageError("config key " + key + " must be non-negative");
  return static_cast<std::uint64_t>(x);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw UsageError("config key " + key + ": '" + *v + "' is not a boolean");
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        std::vector<double> fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (auto cell : io::split(*v, ',')) {
    const auto x = io::to_double(cell);
    if (!x) throw UsageError("config key " + key + ": malformed list '" + *v + "'");
    out.push_back(*x);
  }
  return out;
}

std::optional<std::filesystem::path> Config::get_path(const std::string& key) const {
  const auto v = get(key);
  if (!v || v->empty()) return std::nullopt;
  std::filesystem::path p(*v);
  if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
  return p;
}

void Config::check_keys(const std::set<std::string>& known) const {
  for (const auto& [key, value] : entries_) {
    if (!known.count(key)) throw UsageError("unknown config key " + key);
  }
}

}  // namespace memcap
