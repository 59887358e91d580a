// Copyright 2026 The PlantPulse Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plantpulse {

// Caller passed something malformed or out of range.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Named table, column or row does not exist.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Store refused an append or update (validation, referential or capacity).
class Rejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityExceeded : public Rejected {
 public:
  using Rejected::Rejected;
};

// Query text problems carry the byte offset of the first failing token.
class QueryError : public std::runtime_error {
 public:
  QueryError(const std::string& message, std::size_t offset)
      : std::runtime_error(message), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class SyntaxError : public QueryError {
 public:
  using QueryError::QueryError;
};

class SemanticError : public QueryError {
 public:
  using QueryError::QueryError;
};

// Query exceeded the intermediate row guard.
class ResourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plantpulse
