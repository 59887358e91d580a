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

#include <string>
#include <string_view>
#include <vector>

#include "plantpulse/domain/types.h"

namespace plantpulse {

/// Which ingestion-rate stream a table's appends are credited to.
enum class StreamClass { kBusiness, kSensor };

std::string_view to_string(StreamClass stream);

struct ColumnSchema {
  std::string name;
  ColumnType type = ColumnType::kInt64;
  bool nullable = false;
  // Referenced table for foreign keys; empty otherwise. Keys point at the
  // referenced table's ID column.
  std::string references;
  // Null cells of this column may be filled in once after the append.
  bool fillable = false;

  bool operator==(const ColumnSchema&) const = default;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnSchema> columns;
  StreamClass stream = StreamClass::kBusiness;

  /// Index of the named column, or -1.
  int column_index(std::string_view column) const;
  bool operator==(const TableSchema&) const = default;
};

class SchemaCatalog {
 public:
  SchemaCatalog() = default;
  explicit SchemaCatalog(std::vector<TableSchema> tables) : tables_(std::move(tables)) {}

  const std::vector<TableSchema>& tables() const { return tables_; }
  const TableSchema* find(std::string_view name) const;
  // Throws NotFound.
  const TableSchema& at(std::string_view name) const;

  bool operator==(const SchemaCatalog&) const = default;

 private:
  std::vector<TableSchema> tables_;
};

namespace tables {
inline constexpr std::string_view kSupplier = "SUPPLIER";
inline constexpr std::string_view kCustomer = "CUSTOMER";
inline constexpr std::string_view kProduct = "PRODUCT";
inline constexpr std::string_view kMaterial = "MATERIAL";
inline constexpr std::string_view kWorkplace = "WORKPLACE";
inline constexpr std::string_view kPurchaseOrderHead = "PURCHASE_ORDER_HEAD";
inline constexpr std::string_view kPurchaseOrderItem = "PURCHASE_ORDER_ITEM";
inline constexpr std::string_view kSalesOrderHead = "SALES_ORDER_HEAD";
inline constexpr std::string_view kSalesOrderItem = "SALES_ORDER_ITEM";
inline constexpr std::string_view kProductionOrderHead = "PRODUCTION_ORDER_HEAD";
inline constexpr std::string_view kProductionOrderPosition = "PRODUCTION_ORDER_POSITION";
inline constexpr std::string_view kSensorData = "SENSOR_DATA";
}  // namespace tables

/// Maximum stored size of a text cell, in bytes.
inline constexpr std::size_t kMaxTextBytes = 128;

/// The twelve tables of the plant model, listed so that every table comes
/// after the tables it references. Pure; returns the same object every call.
const SchemaCatalog& catalog();

}  // namespace plantpulse
