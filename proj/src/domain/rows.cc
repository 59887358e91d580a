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

#include "plantpulse/domain/rows.h"

namespace plantpulse {

namespace {

Value key(EntityId e) { return static_cast<std::int64_t>(e.value); }
Value key(const std::optional<EntityId>& e) { return e ? key(*e) : Value{}; }
Value ts(Timestamp t) { return t.millis; }
Value ts(const std::optional<Timestamp>& t) { return t ? ts(*t) : Value{}; }

}  // namespace

Row Supplier::to_row() const { return {key(this->id), name}; }
Row Customer::to_row() const { return {key(this->id), name}; }
Row Product::to_row() const { return {key(this->id), name}; }
Row Material::to_row() const { return {key(this->id), name}; }
Row Workplace::to_row() const { return {key(this->id), name}; }

Row PurchaseOrderHead::to_row() const { return {key(this->id), key(supplier_id), ts(created_at)}; }

Row PurchaseOrderItem::to_row() const {
  return {key(this->id), key(head_id), key(material_id), quantity};
}

Row ProductionOrderHead::to_row() const {
  return {key(this->id),        key(product_id),   key(purchase_order_item_id),
          key(sales_order_item_id), ts(released_at), ts(finished_at)};
}

Row ProductionOrderPosition::to_row() const {
  return {key(this->id), key(head_id), key(workplace_id), seq_no, ts(entered_at), ts(left_at)};
}

Row SalesOrderHead::to_row() const { return {key(this->id), key(customer_id), ts(created_at)}; }

Row SalesOrderItem::to_row() const {
  return {key(this->id), key(head_id), key(product_id), quantity};
}

Row SensorReading::to_row() const {
  Row row{key(this->id), key(workplace_id), key(sensor_id), ts(date), {}, {}, {}, {}, {}, {}};
  std::size_t slot = 4;
  switch (kind) {
    case SensorKind::kTemperature:
      slot = 4;
      break;
    case SensorKind::kNoise:
      slot = 6;
      break;
    case SensorKind::kVibration:
      slot = 8;
      break;
  }
  row[slot] = value;
  row[slot + 1] = std::string(unit_of(kind));
  return row;
}

}  // namespace plantpulse
