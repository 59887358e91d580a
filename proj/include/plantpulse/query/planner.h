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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plantpulse/domain/schema.h"
#include "plantpulse/query/ast.h"

namespace plantpulse::query {

/// Column of a plan table: table position in the join order and slot in
/// that table's scanned column list.
struct BoundColumn {
  std::size_t table = 0;
  std::size_t slot = 0;
  ColumnType type = ColumnType::kInt64;
  bool operator==(const BoundColumn&) const = default;
};

struct BoundOperand {
  std::optional<BoundColumn> column;
  Value literal;  // when column is empty
};

struct BoundPredicate {
  PredKind kind = PredKind::kCompare;
  BoundColumn column;
  CompareOp op = CompareOp::kEq;
  std::vector<BoundOperand> operands;
  std::vector<BoundPredicate> children;
};

struct PlanTable {
  std::string name;
  std::string alias;
  std::vector<std::string> columns;
  std::vector<store::ScanPredicate> pushed;    // evaluated by the store scan
  std::vector<BoundPredicate> filters;         // other single-table conjuncts
};

/// Equality join key: probe (a column of an earlier table) = build (a column
/// of the table being joined).
struct EqualityKey {
  BoundColumn probe;
  BoundColumn build;
};

/// point BETWEEN lo AND hi where the point and the interval sit on opposite
/// sides of the join.
struct IntervalKey {
  bool build_holds_point = true;
  BoundColumn point;
  BoundColumn lo;
  BoundColumn hi;
};

struct JoinStep {
  std::vector<EqualityKey> keys;
  std::optional<IntervalKey> interval;
  std::vector<BoundPredicate> residuals;
};

struct OutputExpr {
  bool aggregate = false;
  AggFn fn = AggFn::kCount;
  std::optional<BoundColumn> column;  // empty only for COUNT(*)
  ColumnType type = ColumnType::kInt64;
};

struct ResultColumn {
  std::string name;
  ColumnType type = ColumnType::kInt64;
  bool operator==(const ResultColumn&) const = default;
};

struct SortKey {
  std::size_t expr = 0;
  bool descending = false;
};

struct Plan {
  std::vector<PlanTable> tables;  // tables[0] is the FROM table
  std::vector<JoinStep> joins;    // joins[i] brings in tables[i + 1]
  bool aggregate = false;
  std::vector<BoundColumn> group_by;
  // Visible select items first, then hidden ORDER BY expressions.
  std::vector<OutputExpr> exprs;
  std::vector<ResultColumn> columns;
  std::vector<SortKey> order;
  std::optional<std::int64_t> limit;
};

/// Resolves names and types against the catalog. Throws SemanticError with
/// the offset of the offending identifier.
Plan plan(const Query& q, const SchemaCatalog& catalog);

}  // namespace plantpulse::query
