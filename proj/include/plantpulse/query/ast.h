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
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plantpulse/store/store.h"

namespace plantpulse::query {

using store::CompareOp;

/// Byte offset into the query text. Ignored by AST equality so that
/// re-printed queries compare equal to the original.
struct SourcePos {
  std::size_t offset = 0;
  bool operator==(const SourcePos&) const { return true; }
};

struct ColumnRef {
  std::string qualifier;  // empty when unqualified
  std::string name;
  SourcePos pos;
  bool operator==(const ColumnRef&) const = default;
};

struct Literal {
  std::variant<std::int64_t, double, std::string> value;
  SourcePos pos;
  bool operator==(const Literal&) const = default;
};

using Operand = std::variant<ColumnRef, Literal>;

enum class AggFn { kAvg, kSum, kMin, kMax, kCount };
std::string_view to_string(AggFn fn);

struct Aggregate {
  AggFn fn = AggFn::kCount;
  std::optional<ColumnRef> arg;  // nullopt for *
  SourcePos pos;
  bool operator==(const Aggregate&) const = default;
};

using Expr = std::variant<ColumnRef, Aggregate>;

struct SelectItem {
  Expr expr;
  std::string alias;
  bool operator==(const SelectItem&) const = default;
};

enum class PredKind { kCompare, kBetween, kIsNull, kIsNotNull, kAnd, kOr };

struct Predicate {
  PredKind kind = PredKind::kCompare;
  ColumnRef column;
  CompareOp op = CompareOp::kEq;
  std::vector<Operand> operands;     // 1 for compare, 2 for between
  std::vector<Predicate> children;   // and / or
  bool operator==(const Predicate&) const = default;
};

struct TableRef {
  std::string name;
  std::string alias;  // empty when absent
  SourcePos pos;
  bool operator==(const TableRef&) const = default;
};

struct Join {
  TableRef table;
  std::vector<Predicate> on;  // conjuncts
  bool operator==(const Join&) const = default;
};

struct OrderItem {
  Expr expr;
  bool descending = false;
  bool operator==(const OrderItem&) const = default;
};

struct Query {
  std::vector<SelectItem> select;
  TableRef from;
  std::vector<Join> joins;
  std::optional<Predicate> where;
  std::vector<ColumnRef> group_by;
  std::vector<OrderItem> order_by;
  std::optional<std::int64_t> limit;
  bool operator==(const Query&) const = default;
};

/// Throws SyntaxError carrying the byte offset of the first failing token.
Query parse(std::string_view sql);

/// Canonical SQL text; parse(print(q)) == q.
std::string print(const Query& q);
std::string print(const Expr& e);
std::string print(const Predicate& p);

}  // namespace plantpulse::query
