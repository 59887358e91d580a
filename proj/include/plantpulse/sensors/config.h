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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plantpulse/domain/types.h"

namespace plantpulse::sensors {

inline constexpr double kMaxRateHz = 10'000.0;

struct SensorConfig {
  EntityId sensor_id;
  EntityId workplace_id;
  SensorKind kind = SensorKind::kTemperature;
  double rate_hz = 1.0;
  double base = 0.0;
  double amplitude = 0.0;
  double period_s = 60.0;
  double noise_sigma = 0.0;
  std::int64_t phase_ms = 0;

  bool operator==(const SensorConfig&) const = default;
};

struct SensorConfigSet {
  std::vector<SensorConfig> sensors;
  std::uint64_t revision = 1;

  bool operator==(const SensorConfigSet&) const = default;
};

struct ConfigParseResult {
  std::optional<SensorConfigSet> config;
  // Every violation found; empty iff config is set.
  std::vector<std::string> errors;

  bool ok() const { return config.has_value(); }
};

/// Parses and validates a sensor configuration document against the known
/// workplaces. Unknown fields are rejected. Never yields a partial set. The
/// optional top-level "revision" field is accepted and ignored.
ConfigParseResult parse_config(std::string_view text, std::span<const EntityId> workplaces);

/// Canonical document: {"sensors":[...]} with fields in fixed order, plus
/// "revision" when requested.
std::string to_json(const SensorConfigSet& set, bool with_revision = false);

/// The shipped default document (also in config/sensors.json).
std::string_view default_config_text();
/// default_config_text() parsed against the default workplaces 1..4.
SensorConfigSet default_config();

/// Replacement semantics: next becomes current with revision current + 1.
SensorConfigSet apply_config(const SensorConfigSet& current, SensorConfigSet next);

/// Sum of rate_hz over all sensors.
double aggregate_rate_hz(const SensorConfigSet& set);

}  // namespace plantpulse::sensors
