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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "plantpulse/domain/rows.h"
#include "plantpulse/sensors/config.h"

namespace plantpulse::sensors {

/// Signal model: base + amplitude * sin(2 pi (t - phase) / period) plus
/// Gaussian noise with sd noise_sigma drawn from rng.
template <typename Urbg>
double value_at(const SensorConfig& config, Timestamp t, Urbg& rng) {
  double angle = 2.0 * std::numbers::pi * static_cast<double>(t.millis - config.phase_ms) /
                 (1000.0 * config.period_s);
  double v = config.base + config.amplitude * std::sin(angle);
  if (config.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, config.noise_sigma);
    v += noise(rng);
  }
  return v;
}

/// splitmix64; one instance per reading keyed on (seed, sensor, emission
/// index) keeps values independent of how time is cut into windows.
class ReadingRng {
 public:
  using result_type = std::uint64_t;
  explicit ReadingRng(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return UINT64_MAX; }
  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Emission instant k of a sensor, in fractional milliseconds.
double emission_instant(const SensorConfig& config, std::uint64_t k);

/// Readings for every emission instant in [t0, t1), ordered by (date,
/// sensor_id, instant). IDs are assigned consecutively from first_id.
/// Throws InvalidArgument unless t0 < t1.
std::vector<SensorReading> readings_between(const SensorConfigSet& set, Timestamp t0, Timestamp t1,
                                            std::uint64_t seed, EntityId first_id = EntityId{1});

/// Stateful generator over consecutive windows. Single driver; a new
/// configuration is swapped in at the start of the next generate_until().
class SensorEngine {
 public:
  SensorEngine(SensorConfigSet config, std::uint64_t seed);

  /// Readings for [cursor, t1); no-op when t1 <= cursor.
  std::vector<SensorReading> generate_until(Timestamp t1);

  /// Moves the cursor without emitting (used while generation is stopped).
  void skip_to(Timestamp t);

  /// Accepts next (already validated) and returns it with its new revision.
  const SensorConfigSet& apply_config(SensorConfigSet next);

  /// Last accepted configuration, including a pending swap.
  const SensorConfigSet& config() const { return pending_ ? *pending_ : active_; }
  Timestamp cursor() const { return cursor_; }
  std::uint64_t next_id() const { return next_id_; }

 private:
  SensorConfigSet active_;
  std::optional<SensorConfigSet> pending_;
  std::uint64_t seed_;
  Timestamp cursor_;
  std::uint64_t next_id_ = 1;
};

}  // namespace plantpulse::sensors
