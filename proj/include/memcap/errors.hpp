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

#include <stdexcept>
#include <string>

namespace memcap {

/// Base class for every error raised by the library. The CLI maps
/// `UsageError` to exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violated a documented precondition (non-finite voltage,
/// out-of-range feature, empty input, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or command line.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The integrator produced a non-finite state.
class IntegrationDiverged : public Error {
 public:
  IntegrationDiverged(double t, double dt);

  double time() const noexcept { return t_; }
  double step() const noexcept { return dt_; }

 private:
  double t_;
  double dt_;
};

/// An iterative solver failed to converge or found no physical root.
class SolverFailed : public Error {
 public:
  using Error::Error;
};

/// A data file could not be parsed. The message always names the file.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& what);

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Matrix or vector sizes do not agree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Normal equations are singular and no ridge penalty was requested.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

}  // namespace memcap
