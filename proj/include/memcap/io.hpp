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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memcap::io {

/// Whole file as a string; throws ParseError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes `content` to a temporary sibling and renames it over `path`,
/// creating parent directories as needed.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

/// Non-empty lines with surrounding whitespace removed.
std::vector<std::string_view> lines(std::string_view text);

std::optional<double> to_double(std::string_view s);
std::optional<long long> to_integer(std::string_view s);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace memcap::io
