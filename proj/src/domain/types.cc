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

#include "plantpulse/domain/types.h"

#include <charconv>
#include <array>

namespace plantpulse {

std::string_view to_string(SensorKind kind) {
  switch (kind) {
    case SensorKind::kTemperature:
      return "temperature";
    case SensorKind::kNoise:
      return "noise";
    case SensorKind::kVibration:
      return "vibration";
  }
  return "unknown";
}

std::optional<SensorKind> parse_sensor_kind(std::string_view name) {
  for (SensorKind kind : kAllSensorKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view unit_of(SensorKind kind) {
  switch (kind) {
    case SensorKind::kTemperature:
      return "\xC2\xB0" "C";  // °C
    case SensorKind::kNoise:
      return "dB";
    case SensorKind::kVibration:
      return "mm/s";
  }
  return "";
}

std::string_view to_string(ColumnType type) {
  switch (type) {
    case ColumnType::kInt64:
      return "int64";
    case ColumnType::kDecimal:
      return "decimal";
    case ColumnType::kText:
      return "text";
    case ColumnType::kTimestamp:
      return "timestamp";
  }
  return "unknown";
}

std::string to_display(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "NULL"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      std::array<char, 32> buf{};
      auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
      return std::string(buf.data(), end);
    }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace plantpulse
