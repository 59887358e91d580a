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

#include "plantpulse/domain/schema.h"

#include "plantpulse/domain/error.h"

namespace plantpulse {

std::string_view to_string(StreamClass stream) {
  return stream == StreamClass::kSensor ? "sensor" : "business";
}

int TableSchema::column_index(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return static_cast<int>(i);
  }
  return -1;
}

const TableSchema* SchemaCatalog::find(std::string_view name) const {
  for (const auto& t : tables_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const TableSchema& SchemaCatalog::at(std::string_view name) const {
  if (const auto* t = find(name)) return *t;
  throw NotFound("unknown table " + std::string(name));
}

namespace {

ColumnSchema id_col() { return {"ID", ColumnType::kInt64, false, "", false}; }

ColumnSchema fk(std::string name, std::string_view target, bool nullable = false,
                bool fillable = false) {
  return {std::move(name), ColumnType::kInt64, nullable, std::string(target), fillable};
}

ColumnSchema col(std::string name, ColumnType type, bool nullable = false, bool fillable = false) {
  return {std::move(name), type, nullable, "", fillable};
}

TableSchema named_entity(std::string_view table) {
  return {std::string(table), {id_col(), col("NAME", ColumnType::kText)}, StreamClass::kBusiness};
}

SchemaCatalog build_catalog() {
  using T = ColumnType;
  std::vector<TableSchema> t;
  t.push_back(named_entity(tables::kSupplier));
  t.push_back(named_entity(tables::kCustomer));
  t.push_back(named_entity(tables::kProduct));
  t.push_back(named_entity(tables::kMaterial));
  t.push_back(named_entity(tables::kWorkplace));
  t.push_back({std::string(tables::kPurchaseOrderHead),
               {id_col(), fk("SUPPLIER_ID", tables::kSupplier), col("CREATED_AT", T::kTimestamp)}});
  t.push_back({std::string(tables::kPurchaseOrderItem),
               {id_col(), fk("HEAD_ID", tables::kPurchaseOrderHead),
                fk("MATERIAL_ID", tables::kMaterial), col("QUANTITY", T::kInt64)}});
  t.push_back({std::string(tables::kSalesOrderHead),
               {id_col(), fk("CUSTOMER_ID", tables::kCustomer), col("CREATED_AT", T::kTimestamp)}});
  t.push_back({std::string(tables::kSalesOrderItem),
               {id_col(), fk("HEAD_ID", tables::kSalesOrderHead), fk("PRODUCT_ID", tables::kProduct),
                col("QUANTITY", T::kInt64)}});
  t.push_back({std::string(tables::kProductionOrderHead),
               {id_col(), fk("PRODUCT_ID", tables::kProduct),
                fk("PURCHASE_ORDER_ITEM_ID", tables::kPurchaseOrderItem),
                fk("SALES_ORDER_ITEM_ID", tables::kSalesOrderItem, true, true),
                col("RELEASED_AT", T::kTimestamp), col("FINISHED_AT", T::kTimestamp, true, true)}});
  t.push_back({std::string(tables::kProductionOrderPosition),
               {id_col(), fk("HEAD_ID", tables::kProductionOrderHead),
                fk("WORKPLACE_ID", tables::kWorkplace), col("SEQ_NO", T::kInt64),
                col("ENTERED_AT", T::kTimestamp), col("LEFT_AT", T::kTimestamp, true, true)}});
  t.push_back({std::string(tables::kSensorData),
               {id_col(), fk("WORKPLACE_ID", tables::kWorkplace), col("SENSOR_ID", T::kInt64),
                col("DATE", T::kTimestamp), col("TEMPERATURE_VALUE", T::kDecimal, true),
                col("TEMPERATURE_UNIT", T::kText, true), col("NOISE_VALUE", T::kDecimal, true),
                col("NOISE_UNIT", T::kText, true), col("VIBRATION_VALUE", T::kDecimal, true),
                col("VIBRATION_UNIT", T::kText, true)},
               StreamClass::kSensor});
  return SchemaCatalog(std::move(t));
}

}  // namespace

const SchemaCatalog& catalog() {
  static const SchemaCatalog instance = build_catalog();
  return instance;
}

}  // namespace plantpulse
