/* Copyright 2026 The lca Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lca {

// Base for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument or instance was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A random instance generator could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Carries the offending 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A local computation gave up (relevant set over cap, no good coloring, ...).
// This is the counted failure event of an LCA, never a wrong answer.
class LocalFailure : public Error {
 public:
  LocalFailure(const std::string& what, std::uint64_t probes, std::uint64_t explored)
      : Error(what), probes_(probes), explored_(explored) {}
  std::uint64_t probes() const noexcept { return probes_; }
  std::uint64_t explored() const noexcept { return explored_; }

 private:
  std::uint64_t probes_;
  std::uint64_t explored_;
};

#define LCA_REQUIRE(cond, msg)                          \
  do {                                                  \
    if (!(cond)) throw ::lca::InvalidArgument(msg);     \
  } while (0)

}  // namespace lca
