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

#include "plantpulse/domain/validate.h"

#include "plantpulse/domain/error.h"

namespace plantpulse {

namespace {

bool is_key_column(const ColumnSchema& c) {
  return c.type == ColumnType::kInt64 && (c.name == "ID" || !c.references.empty());
}

void check_cell(const ColumnSchema& c, const Value& v, std::vector<Violation>& out) {
  if (is_null(v)) {
    if (!c.nullable) {
      out.push_back({"null-in-non-nullable", c.name, c.name + " must not be null"});
    }
    return;
  }
  auto mismatch = [&] {
    out.push_back({"type-mismatch", c.name,
                   c.name + " expects " + std::string(to_string(c.type))});
  };
  switch (c.type) {
    case ColumnType::kInt64:
      if (!std::holds_alternative<std::int64_t>(v)) return mismatch();
      if (is_key_column(c) && std::get<std::int64_t>(v) < 1) {
        out.push_back({"invalid-id", c.name, c.name + " must be >= 1"});
      }
      break;
    case ColumnType::kTimestamp:
      if (!std::holds_alternative<std::int64_t>(v)) return mismatch();
      if (std::get<std::int64_t>(v) < 0) {
        out.push_back({"negative-timestamp", c.name, c.name + " must be >= 0"});
      }
      break;
    case ColumnType::kDecimal:
      if (!std::holds_alternative<double>(v) && !std::holds_alternative<std::int64_t>(v)) {
        return mismatch();
      }
      break;
    case ColumnType::kText:
      if (!std::holds_alternative<std::string>(v)) return mismatch();
      if (std::get<std::string>(v).size() > kMaxTextBytes) {
        out.push_back({"text-too-long", c.name,
                       c.name + " exceeds " + std::to_string(kMaxTextBytes) + " bytes"});
      }
      break;
  }
}

const Value* cell(const TableSchema& schema, std::span<const Value> row, std::string_view name) {
  int idx = schema.column_index(name);
  return idx < 0 ? nullptr : &row[static_cast<std::size_t>(idx)];
}

void check_interval(const TableSchema& schema, std::span<const Value> row, std::string_view from,
                    std::string_view to, std::vector<Violation>& out) {
  const Value* a = cell(schema, row, from);
  const Value* b = cell(schema, row, to);
  if (!a || !b) return;
  const auto* lo = std::get_if<std::int64_t>(a);
  const auto* hi = std::get_if<std::int64_t>(b);
  if (lo && hi && *hi < *lo) {
    out.push_back({"interval-order", std::string(to),
                   std::string(to) + " precedes " + std::string(from)});
  }
}

struct MeasurementColumns {
  SensorKind kind;
  std::string_view value;
  std::string_view unit;
};

constexpr MeasurementColumns kMeasurementColumns[] = {
    {SensorKind::kTemperature, "TEMPERATURE_VALUE", "TEMPERATURE_UNIT"},
    {SensorKind::kNoise, "NOISE_VALUE", "NOISE_UNIT"},
    {SensorKind::kVibration, "VIBRATION_VALUE", "VIBRATION_UNIT"},
};

void check_measurement(const TableSchema& schema, std::span<const Value> row,
                       std::vector<Violation>& out) {
  int present = 0;
  for (const auto& m : kMeasurementColumns) {
    const Value* value = cell(schema, row, m.value);
    const Value* unit = cell(schema, row, m.unit);
    if (!value || !unit) continue;
    if (!is_null(*value)) ++present;
    if (is_null(*value) != is_null(*unit)) {
      out.push_back({"unit-pairing", std::string(m.unit),
                     std::string(m.value) + " and " + std::string(m.unit) +
                         " must be both set or both null"});
    } else if (const auto* u = std::get_if<std::string>(unit); u && *u != unit_of(m.kind)) {
      out.push_back({"unit-mismatch", std::string(m.unit),
                     std::string(m.unit) + " must be " + std::string(unit_of(m.kind))});
    }
  }
  if (present != 1) {
    out.push_back({"exactly-one-measurement", "",
                   "exactly one measurement value must be set, found " + std::to_string(present)});
  }
}

}  // namespace

std::vector<Violation> validate_row(const TableSchema& schema, std::span<const Value> row) {
  std::vector<Violation> out;
  if (row.size() != schema.columns.size()) {
    out.push_back({"arity", "",
                   schema.name + " expects " + std::to_string(schema.columns.size()) +
                       " values, got " + std::to_string(row.size())});
    return out;
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    const auto& c = schema.columns[i];
    check_cell(c, row[i], out);
    if ((c.name == "QUANTITY" || c.name == "SEQ_NO") && std::holds_alternative<std::int64_t>(row[i]) &&
        std::get<std::int64_t>(row[i]) < 1) {
      out.push_back({"non-positive", c.name, c.name + " must be positive"});
    }
  }
  if (schema.name == tables::kSensorData) {
    check_measurement(schema, row, out);
  } else if (schema.name == tables::kProductionOrderPosition) {
    check_interval(schema, row, "ENTERED_AT", "LEFT_AT", out);
  } else if (schema.name == tables::kProductionOrderHead) {
    check_interval(schema, row, "RELEASED_AT", "FINISHED_AT", out);
  }
  return out;
}

std::vector<Violation> validate_row(std::string_view table, std::span<const Value> row) {
  return validate_row(catalog().at(table), row);
}

}  // namespace plantpulse
