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

#include <sstream>

namespace memcap {

namespace {

std::string diverged_message(double t, double dt) {
  std::ostringstream os;
  os << "integration diverged at t=" << t << " s with dt=" << dt << " s";
  return os.str();
}

}  // namespace

IntegrationDiverged::IntegrationDiverged(double t, double dt)
    : Error(diverged_message(t, dt)), t_(t), dt_(dt) {}

ParseError::ParseError(const std::string& path, const std::string& what)
    : Error(path + ": " + what), path_(path) {}

}  // namespace memcap
