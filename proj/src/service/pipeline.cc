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

#include "plantpulse/service/pipeline.h"

#include <cmath>
#include <iostream>

#include <json.hpp>

#include "plantpulse/domain/error.h"

namespace plantpulse::service {

namespace {

template <typename Rows>
void add_rows(store::WriteBatch& batch, const Rows& rows) {
  if (rows.empty()) return;
  store::TableAppend append;
  append.table = std::string(Rows::value_type::kTable);
  append.rows.reserve(rows.size());
  for (const auto& r : rows) append.rows.push_back(r.to_row());
  batch.appends.push_back(std::move(append));
}

store::WriteBatch to_write(const sim::EmittedBatch& b, const std::vector<SensorReading>& readings) {
  store::WriteBatch w;
  add_rows(w, b.purchase_order_heads);
  add_rows(w, b.purchase_order_items);
  add_rows(w, b.sales_order_heads);
  add_rows(w, b.sales_order_items);
  add_rows(w, b.production_order_heads);
  add_rows(w, b.production_order_positions);
  add_rows(w, readings);
  const std::string positions(tables::kProductionOrderPosition);
  const std::string heads(tables::kProductionOrderHead);
  for (const auto& f : b.positions_left) {
    w.updates.push_back({positions, f.position_id.value, "LEFT_AT", f.left_at.millis});
  }
  for (const auto& f : b.orders_finished) {
    w.updates.push_back({heads, f.order_id.value, "FINISHED_AT", f.finished_at.millis});
  }
  for (const auto& f : b.sales_links) {
    w.updates.push_back({heads, f.order_id.value, "SALES_ORDER_ITEM_ID",
                         static_cast<std::int64_t>(f.sales_order_item_id.value)});
  }
  return w;
}

std::unique_ptr<store::Store> make_store(const PipelineOptions& o) {
  store::StoreOptions so;
  so.max_total_rows = o.max_rows;
  so.rate_window_s = o.rate_window_s;
  so.wall_seconds = o.wall_seconds;
  return store::Store::with_catalog(catalog(), std::move(so));
}

sensors::SensorConfigSet checked_sensors(const PipelineOptions& o) {
  auto ids = o.master.workplace_ids();
  auto parsed = sensors::parse_config(sensors::to_json(o.sensors), ids);
  if (!parsed.ok()) {
    std::string message = "invalid sensor configuration";
    for (std::size_t i = 0; i < parsed.errors.size(); ++i) {
      message += (i ? "; " : ": ") + parsed.errors[i];
    }
    throw InvalidArgument(message);
  }
  return o.sensors;
}

}  // namespace

std::string MetricsFrame::to_json() const {
  nlohmann::ordered_json j;
  j["wall_time"] = wall_time;
  j["sim_time"] = sim_time;
  j["business_rows_per_s"] = business_rows_per_s;
  j["sensor_rows_per_s"] = sensor_rows_per_s;
  j["business_rows_total"] = business_rows_total;
  j["sensor_rows_total"] = sensor_rows_total;
  return j.dump();
}

Pipeline::Pipeline(PipelineOptions options)
    : options_(std::move(options)),
      store_(make_store(options_)),
      sim_(options_.master, {options_.seed, options_.arrival_mean_ms, 10}),
      sensors_(checked_sensors(options_), options_.seed),
      clock_(options_.clock, options_.scale) {
  sim_.stop();
  store::WriteBatch master;
  master.metered = false;
  add_rows(master, options_.master.suppliers);
  add_rows(master, options_.master.customers);
  add_rows(master, options_.master.products);
  add_rows(master, options_.master.materials);
  add_rows(master, options_.master.workplaces);
  store_->write(master);
}

bool Pipeline::start() {
  std::lock_guard lock(mu_);
  if (halted_) return false;
  sim_.start();
  running_ = true;
  return true;
}

bool Pipeline::stop() {
  std::lock_guard lock(mu_);
  sim_.stop();
  running_ = false;
  return false;
}

void Pipeline::tick(std::chrono::nanoseconds wall) {
  std::lock_guard lock(mu_);
  if (!running_) return;
  if (options_.clock == sim::ClockMode::kRealTime) {
    advance_locked(clock_.elapse(wall));
  } else {
    auto ms = std::llround(static_cast<double>(options_.tick.count()) * options_.scale);
    advance_locked(clock_.step(ms));
  }
}

void Pipeline::step(std::int64_t virtual_ms) {
  std::lock_guard lock(mu_);
  if (!running_) return;
  advance_locked(clock_.step(virtual_ms));
}

void Pipeline::advance_locked(Timestamp t) {
  sim::EmittedBatch batch = sim_.advance_to(t);
  std::vector<SensorReading> readings = sensors_.generate_until(t);
  sim_time_ = t.millis;
  if (batch.empty() && readings.empty()) return;
  try {
    store_->write(to_write(batch, readings));
  } catch (const Rejected& e) {
    halt_reason_ = e.what();
    halted_ = true;
    running_ = false;
    sim_.stop();
    std::cerr << "warning: ingestion stopped: " << e.what() << "\n";
  }
}

sensors::SensorConfigSet Pipeline::sensor_config() const {
  std::lock_guard lock(mu_);
  return sensors_.config();
}

sensors::ConfigParseResult Pipeline::put_sensor_config(std::string_view text) {
  auto result = sensors::parse_config(text, options_.master.workplace_ids());
  if (!result.ok()) return result;
  std::lock_guard lock(mu_);
  result.config = sensors_.apply_config(std::move(*result.config));
  return result;
}

MetricsFrame Pipeline::metrics() const {
  MetricsFrame f;
  f.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::system_clock::now().time_since_epoch())
                    .count();
  f.sim_time = sim_time_.load();
  f.business_rows_per_s = store_->ingest_rate(StreamClass::kBusiness);
  f.sensor_rows_per_s = store_->ingest_rate(StreamClass::kSensor);
  f.business_rows_total = store_->rows_credited(StreamClass::kBusiness);
  f.sensor_rows_total = store_->rows_credited(StreamClass::kSensor);
  return f;
}

std::string Pipeline::halt_reason() const {
  std::lock_guard lock(mu_);
  return halt_reason_;
}

}  // namespace plantpulse::service
