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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "plantpulse/sensors/engine.h"
#include "plantpulse/sim/clock.h"
#include "plantpulse/sim/engine.h"
#include "plantpulse/store/store.h"

namespace plantpulse::service {

struct PipelineOptions {
  std::uint64_t seed = 42;
  sim::ClockMode clock = sim::ClockMode::kRealTime;
  double scale = 1.0;
  sensors::SensorConfigSet sensors = sensors::default_config();
  sim::MasterData master = sim::MasterData::defaults();
  std::int64_t arrival_mean_ms = 1000;
  std::uint64_t max_rows = 50'000'000;
  int rate_window_s = 10;
  std::function<std::int64_t()> wall_seconds;  // store rate metering; steady clock when empty
  // Virtual time per tick in Stepped mode is tick * scale.
  std::chrono::milliseconds tick{100};
};

struct MetricsFrame {
  std::int64_t wall_time = 0;  // Unix epoch milliseconds
  std::int64_t sim_time = 0;   // virtual milliseconds
  double business_rows_per_s = 0.0;
  double sensor_rows_per_s = 0.0;
  std::uint64_t business_rows_total = 0;
  std::uint64_t sensor_rows_total = 0;

  std::string to_json() const;
};

/// The single ingestion pipeline of a process: business simulation and
/// sensor generation feeding one store. All control calls are serialized
/// with the driver; queries use store() snapshots and never block on it.
class Pipeline {
 public:
  /// Loads the master data; throws InvalidArgument on a bad configuration.
  explicit Pipeline(PipelineOptions options);

  /// Idempotent; both return the running state afterwards. start() has no
  /// effect once ingestion has halted.
  bool start();
  bool stop();
  bool running() const { return running_.load(); }

  /// One driver tick after `wall` real time. RealTime mode advances by the
  /// scaled wall time, Stepped mode by tick * scale. No-op while stopped.
  void tick(std::chrono::nanoseconds wall);

  /// Advances virtual time by exactly virtual_ms (while running).
  void step(std::int64_t virtual_ms);

  Timestamp sim_time() const { return Timestamp{sim_time_.load()}; }
  sensors::SensorConfigSet sensor_config() const;
  /// parse_config + apply_config under the driver lock; nothing changes on
  /// error. On success config holds the applied set with its revision.
  sensors::ConfigParseResult put_sensor_config(std::string_view text);

  MetricsFrame metrics() const;

  store::Store& store() { return *store_; }
  const store::Store& store() const { return *store_; }
  const PipelineOptions& options() const { return options_; }

  /// Set once a write failed (e.g. the row cap was reached).
  bool halted() const { return halted_.load(); }
  std::string halt_reason() const;

 private:
  void advance_locked(Timestamp t);

  PipelineOptions options_;
  std::unique_ptr<store::Store> store_;
  mutable std::mutex mu_;
  sim::SimEngine sim_;
  sensors::SensorEngine sensors_;
  sim::SimClock clock_;
  std::atomic<bool> running_{false};
  std::atomic<bool> halted_{false};
  std::atomic<std::int64_t> sim_time_{0};
  std::string halt_reason_;  // guarded by mu_
};

}  // namespace plantpulse::service
