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

#include "plantpulse/service/api.h"

#include <json.hpp>

#include "plantpulse/domain/error.h"
#include "plantpulse/query/predefined.h"

namespace plantpulse::service {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ApiResponse reply(int status, const ordered_json& body) { return {status, body.dump(), "application/json"}; }

ApiResponse error(int status, const std::string& message) {
  ordered_json j;
  j["error"] = message;
  return reply(status, j);
}

ordered_json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return x;
        }
      },
      v);
}

ApiResponse running(bool value) {
  ordered_json j;
  j["running"] = value;
  return reply(200, j);
}

}  // namespace

Api::Api(Pipeline& pipeline, query::ExecOptions exec) : pipeline_(pipeline), exec_(exec) {}

ApiResponse Api::sim_start() { return running(pipeline_.start()); }

ApiResponse Api::sim_stop() { return running(pipeline_.stop()); }

ApiResponse Api::sim_status() const {
  const auto& o = pipeline_.options();
  ordered_json j;
  j["running"] = pipeline_.running();
  j["sim_time"] = pipeline_.sim_time().millis;
  j["seed"] = o.seed;
  j["clock"] = std::string(sim::to_string(o.clock));
  j["scale"] = o.scale;
  j["halted"] = pipeline_.halted();
  if (pipeline_.halted()) j["halt_reason"] = pipeline_.halt_reason();
  return reply(200, j);
}

ApiResponse Api::metrics() const { return {200, pipeline_.metrics().to_json(), "application/json"}; }

ApiResponse Api::sensors_get() const {
  return {200, sensors::to_json(pipeline_.sensor_config(), true), "application/json"};
}

ApiResponse Api::sensors_put(std::string_view body) {
  auto result = pipeline_.put_sensor_config(body);
  if (!result.ok()) {
    ordered_json j;
    j["error"] = "invalid sensor configuration";
    j["errors"] = result.errors;
    return reply(400, j);
  }
  return {200, sensors::to_json(*result.config, true), "application/json"};
}

ApiResponse Api::query(std::string_view body) const {
  std::string sql;
  try {
    json req = json::parse(body);
    if (!req.is_object() || !req.contains("sql") || !req["sql"].is_string()) {
      return error(400, "request body must be {\"sql\": \"...\"}");
    }
    sql = req["sql"].get<std::string>();
  } catch (const json::parse_error&) {
    return error(400, "request body is not valid JSON");
  }
  try {
    const store::Store& store = pipeline_.store();
    query::ResultTable result = query::execute_sql(sql, store, store.snapshot(), exec_);
    ordered_json j;
    j["columns"] = ordered_json::array();
    for (const auto& c : result.columns) {
      ordered_json col;
      col["name"] = c.name;
      col["type"] = std::string(to_string(c.type));
      j["columns"].push_back(std::move(col));
    }
    j["rows"] = ordered_json::array();
    for (const auto& row : result.rows) {
      ordered_json r = ordered_json::array();
      for (const auto& v : row) r.push_back(to_json(v));
      j["rows"].push_back(std::move(r));
    }
    j["elapsed_ms"] = result.elapsed_ms;
    return reply(200, j);
  } catch (const QueryError& e) {
    ordered_json j;
    j["error"] = e.what();
    j["offset"] = e.offset();
    return reply(400, j);
  } catch (const ResourceExhausted& e) {
    return error(422, e.what());
  }
}

ApiResponse Api::predefined() const {
  ordered_json j = ordered_json::array();
  for (const auto& q : query::predefined()) {
    ordered_json o;
    o["name"] = q.name;
    o["description"] = q.description;
    o["sql"] = q.sql;
    j.push_back(std::move(o));
  }
  return reply(200, j);
}

ApiResponse Api::tables() const {
  const store::Store& store = pipeline_.store();
  store::Snapshot snap = store.snapshot();
  ordered_json list = ordered_json::array();
  for (const auto& t : store.catalog().tables()) {
    ordered_json o;
    o["name"] = t.name;
    o["stream"] = t.stream == StreamClass::kSensor ? "sensor" : "business";
    o["rows"] = snap.rows(store.table_id(t.name));
    o["columns"] = ordered_json::array();
    for (const auto& c : t.columns) {
      ordered_json col;
      col["name"] = c.name;
      col["type"] = std::string(to_string(c.type));
      col["nullable"] = c.nullable;
      if (!c.references.empty()) col["references"] = c.references;
      o["columns"].push_back(std::move(col));
    }
    list.push_back(std::move(o));
  }
  ordered_json j;
  j["tables"] = std::move(list);
  return reply(200, j);
}

std::string sse_frame(const MetricsFrame& frame) {
  return "event: metrics\ndata: " + frame.to_json() + "\n\n";
}

}  // namespace plantpulse::service
