// Copyright 2026 The pufeval Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pufeval {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A planner could not reach its target below the device-count cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine exhausted its iteration budget. Never expected for
/// valid inputs; reaching it indicates a numerical defect.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Requested entropy of exactly one bit per position maps to p_l = p_u = 0.5,
/// which no finite experiment can certify.
class PerfectEntropyError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed input file. `offset` is a 1-based line number for text input
/// and a 0-based byte offset for binary input.
class ParseError : public Error {
 public:
  enum class Kind { kHeader, kDimension, kSymbol, kTruncated };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
      : Error(what), kind_(kind), offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace pufeval
