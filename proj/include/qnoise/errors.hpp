// Copyright 2026 The qnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNOISE_ERRORS_HPP
#define QNOISE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qnoise {

/// Parameters outside the physical or mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string &what) : std::invalid_argument(what) {}
};

/// A numerical procedure (series, quadrature, cutoff growth) failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string &what) : std::runtime_error(what) {}
};

/// Malformed configuration or command-line input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string &msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace detail
}  // namespace qnoise

#endif
