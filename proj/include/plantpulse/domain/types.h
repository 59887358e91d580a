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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace plantpulse {

/// Milliseconds on the simulation clock; epoch is simulation start.
struct Timestamp {
  std::int64_t millis = 0;

  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
};

/// Row identifier; allocated densely from 1 per table.
struct EntityId {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(EntityId, EntityId) = default;
};

enum class SensorKind { kTemperature, kNoise, kVibration };

inline constexpr SensorKind kAllSensorKinds[] = {SensorKind::kTemperature, SensorKind::kNoise,
                                                 SensorKind::kVibration};

/// Lowercase name used in sensor configuration documents.
std::string_view to_string(SensorKind kind);
std::optional<SensorKind> parse_sensor_kind(std::string_view name);

/// Fixed unit stored alongside every measurement of this kind.
std::string_view unit_of(SensorKind kind);

enum class ColumnType { kInt64, kDecimal, kText, kTimestamp };

std::string_view to_string(ColumnType type);

/// One untyped cell. monostate is SQL NULL; timestamps travel as int64.
using Value = std::variant<std::monostate, std::int64_t, double, std::string>;
using Row = std::vector<Value>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

/// Debug/CSV-style rendering; null renders as "NULL".
std::string to_display(const Value& v);

}  // namespace plantpulse
