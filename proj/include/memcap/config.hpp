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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace memcap {

/// Flat sectioned `key = value` configuration:
///
///   # comment
///   [bank]
///   devices = 5
///
/// Keys are addressed as `section.key`. Values are kept as text and
/// converted on access; conversion failures raise UsageError naming the key.
class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text,
                      const std::string& origin = "<string>");
  static Config load(const std::filesystem::path& path);

  /// Applies a `section.key=value` override.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated numbers.
  std::vector<double> get_doubles(const std::string& key,
                                  std::vector<double> fallback) const;

  /// A path value, resolved against the directory of the loaded file.
  std::optional<std::filesystem::path> get_path(const std::string& key) const;

  /// Throws UsageError for any key outside `known`.
  void check_keys(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const noexcept {
    return entries_;
  }
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }

 private:
  std::map<std::string, std::string> entries_;
  std::filesystem::path base_dir_;
};

}  // namespace memcap
