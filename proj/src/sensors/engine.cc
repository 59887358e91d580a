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

#include "plantpulse/sensors/engine.h"

#include <algorithm>

#include "plantpulse/domain/error.h"

namespace plantpulse::sensors {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t reading_seed(std::uint64_t seed, EntityId sensor, std::uint64_t k) {
  return mix(mix(mix(seed) ^ sensor.value) ^ k);
}

// Smallest k with emission_instant(k) >= t.
std::uint64_t first_index_at_or_after(const SensorConfig& c, double t) {
  double step = 1000.0 / c.rate_hz;
  double phase = static_cast<double>(c.phase_ms);
  if (t <= phase) return 0;
  auto k = static_cast<std::uint64_t>(std::ceil((t - phase) / step));
  while (k > 0 && emission_instant(c, k - 1) >= t) --k;
  while (emission_instant(c, k) < t) ++k;
  return k;
}

struct Pending {
  std::int64_t date;
  std::uint64_t sensor;
  std::uint64_t k;
  std::size_t config;
};

}  // namespace

double emission_instant(const SensorConfig& config, std::uint64_t k) {
  return static_cast<double>(config.phase_ms) + static_cast<double>(k) * (1000.0 / config.rate_hz);
}

std::vector<SensorReading> readings_between(const SensorConfigSet& set, Timestamp t0, Timestamp t1,
                                            std::uint64_t seed, EntityId first_id) {
  if (!(t0 < t1)) {
    throw InvalidArgument("readings_between needs t0 < t1 (got " + std::to_string(t0.millis) +
                          ", " + std::to_string(t1.millis) + ")");
  }
  std::vector<Pending> pending;
  for (std::size_t i = 0; i < set.sensors.size(); ++i) {
    const SensorConfig& c = set.sensors[i];
    auto lo = static_cast<double>(t0.millis);
    auto hi = static_cast<double>(t1.millis);
    for (std::uint64_t k = first_index_at_or_after(c, lo);; ++k) {
      double at = emission_instant(c, k);
      if (at >= hi) break;
      pending.push_back({static_cast<std::int64_t>(std::floor(at)), c.sensor_id.value, k, i});
    }
  }
  std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    if (a.date != b.date) return a.date < b.date;
    if (a.sensor != b.sensor) return a.sensor < b.sensor;
    return a.k < b.k;
  });

  std::vector<SensorReading> out;
  out.reserve(pending.size());
  std::uint64_t id = first_id.value;
  for (const Pending& p : pending) {
    const SensorConfig& c = set.sensors[p.config];
    ReadingRng rng(reading_seed(seed, c.sensor_id, p.k));
    Timestamp date{p.date};
    out.push_back({EntityId{id++}, c.workplace_id, c.sensor_id, date, c.kind, value_at(c, date, rng)});
  }
  return out;
}

SensorEngine::SensorEngine(SensorConfigSet config, std::uint64_t seed)
    : active_(std::move(config)), seed_(seed) {}

std::vector<SensorReading> SensorEngine::generate_until(Timestamp t1) {
  if (pending_) {
    active_ = std::move(*pending_);
    pending_.reset();
  }
  if (t1 <= cursor_) return {};
  auto out = readings_between(active_, cursor_, t1, seed_, EntityId{next_id_});
  next_id_ += out.size();
  cursor_ = t1;
  return out;
}

void SensorEngine::skip_to(Timestamp t) {
  if (pending_) {
    active_ = std::move(*pending_);
    pending_.reset();
  }
  if (t > cursor_) cursor_ = t;
}

const SensorConfigSet& SensorEngine::apply_config(SensorConfigSet next) {
  pending_ = sensors::apply_config(config(), std::move(next));
  return *pending_;
}

}  // namespace plantpulse::sensors
