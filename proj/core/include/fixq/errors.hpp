// Copyright 2026 The Fixq Authors
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

#ifndef FIXQ_ERRORS_HPP
#define FIXQ_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fixq {

enum class ErrorKind {
  MalformedXml,
  SyntaxError,
  TypeErr,
  DynamicError,
  UnboundVariable,
  NoFocus,
  UnknownNode,
  UnknownFunction,
  FixpointDivergence,
  SchemaMismatch,
  MalformedDag,
  Unsupported,
};

const char* to_string(ErrorKind kind);

/// Base class for every error the engine raises. `kind()` is stable and is
/// what the CLI maps to exit codes.
class EngineError : public std::runtime_error {
 public:
  EngineError(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed input document; `offset` is a byte offset into the XML text.
class MalformedXmlError : public EngineError {
 public:
  MalformedXmlError(std::size_t offset, const std::string& reason)
      : EngineError(ErrorKind::MalformedXml,
                    reason + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Query text did not parse; `offset` is a byte offset, `expected` a hint.
class QuerySyntaxError : public EngineError {
 public:
  QuerySyntaxError(std::size_t offset, const std::string& expected)
      : EngineError(ErrorKind::SyntaxError,
                    "expected " + expected + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset),
        expected_(expected) {}

  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Raised when a fixpoint fails to converge within the configured bound.
class FixpointDivergenceError : public EngineError {
 public:
  explicit FixpointDivergenceError(std::size_t iterations)
      : EngineError(ErrorKind::FixpointDivergence,
                    "no fixpoint after " + std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}

  std::size_t iterations() const { return iterations_; }

 private:
  std::size_t iterations_;
};

[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& message) {
  throw EngineError(kind, message);
}

}  // namespace fixq

#endif  // FIXQ_ERRORS_HPP
