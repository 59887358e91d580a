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

#include <optional>
#include <string>
#include <string_view>

#include "plantpulse/domain/schema.h"
#include "plantpulse/domain/types.h"

namespace plantpulse {

// Typed records, one per table. to_row() yields cells in catalog column order.

struct Supplier {
  static constexpr std::string_view kTable = tables::kSupplier;
  EntityId id;
  std::string name;
  Row to_row() const;
};

struct Customer {
  static constexpr std::string_view kTable = tables::kCustomer;
  EntityId id;
  std::string name;
  Row to_row() const;
};

struct Product {
  static constexpr std::string_view kTable = tables::kProduct;
  EntityId id;
  std::string name;
  Row to_row() const;
};

struct Material {
  static constexpr std::string_view kTable = tables::kMaterial;
  EntityId id;
  std::string name;
  Row to_row() const;
};

struct Workplace {
  static constexpr std::string_view kTable = tables::kWorkplace;
  EntityId id;
  std::string name;
  Row to_row() const;
};

struct PurchaseOrderHead {
  static constexpr std::string_view kTable = tables::kPurchaseOrderHead;
  EntityId id;
  EntityId supplier_id;
  Timestamp created_at;
  Row to_row() const;
};

struct PurchaseOrderItem {
  static constexpr std::string_view kTable = tables::kPurchaseOrderItem;
  EntityId id;
  EntityId head_id;
  EntityId material_id;
  std::int64_t quantity = 1;
  Row to_row() const;
};

struct ProductionOrderHead {
  static constexpr std::string_view kTable = tables::kProductionOrderHead;
  EntityId id;
  EntityId product_id;
  EntityId purchase_order_item_id;
  std::optional<EntityId> sales_order_item_id;
  Timestamp released_at;
  std::optional<Timestamp> finished_at;
  Row to_row() const;
};

struct ProductionOrderPosition {
  static constexpr std::string_view kTable = tables::kProductionOrderPosition;
  EntityId id;
  EntityId head_id;
  EntityId workplace_id;
  std::int64_t seq_no = 1;
  Timestamp entered_at;
  std::optional<Timestamp> left_at;
  Row to_row() const;
};

struct SalesOrderHead {
  static constexpr std::string_view kTable = tables::kSalesOrderHead;
  EntityId id;
  EntityId customer_id;
  Timestamp created_at;
  Row to_row() const;
};

struct SalesOrderItem {
  static constexpr std::string_view kTable = tables::kSalesOrderItem;
  EntityId id;
  EntityId head_id;
  EntityId product_id;
  std::int64_t quantity = 1;
  Row to_row() const;
};

/// One SENSOR_DATA row. Exactly one measurement is carried; the other two
/// value/unit pairs are null in the stored row.
struct SensorReading {
  static constexpr std::string_view kTable = tables::kSensorData;
  EntityId id;
  EntityId workplace_id;
  EntityId sensor_id;
  Timestamp date;
  SensorKind kind = SensorKind::kTemperature;
  double value = 0.0;

  Row to_row() const;
  bool operator==(const SensorReading&) const = default;
};

}  // namespace plantpulse
