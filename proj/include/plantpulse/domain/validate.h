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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plantpulse/domain/schema.h"
#include "plantpulse/domain/types.h"

namespace plantpulse {

struct Violation {
  // Stable machine-readable code, e.g. "exactly-one-measurement".
  std::string code;
  // Offending column, empty for row-level rules.
  std::string column;
  std::string message;
};

/// Row-local checks: arity, types, nullability, text length, positive
/// quantities, timestamp order and the SENSOR_DATA sparsity rule. Foreign
/// keys need a store and are checked at append time.
std::vector<Violation> validate_row(const TableSchema& schema, std::span<const Value> row);

/// Looks the table up in catalog(). Throws NotFound for unknown tables.
std::vector<Violation> validate_row(std::string_view table, std::span<const Value> row);

}  // namespace plantpulse
