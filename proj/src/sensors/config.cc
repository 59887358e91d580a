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

#include "plantpulse/sensors/config.h"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "plantpulse/domain/error.h"

namespace plantpulse::sensors {

namespace {

using nlohmann::json;

constexpr std::string_view kDefaultConfig = R"({"sensors":[
{"sensor_id":1,"workplace_id":1,"kind":"temperature","rate_hz":10.0,"base":40.0,"amplitude":10.0,"period_s":60.0,"noise_sigma":2.0,"phase_ms":0},
{"sensor_id":2,"workplace_id":1,"kind":"noise","rate_hz":40.0,"base":70.0,"amplitude":8.0,"period_s":60.0,"noise_sigma":3.5,"phase_ms":0},
{"sensor_id":3,"workplace_id":2,"kind":"vibration","rate_hz":25.0,"base":4.0,"amplitude":1.5,"period_s":60.0,"noise_sigma":0.2,"phase_ms":0},
{"sensor_id":4,"workplace_id":2,"kind":"temperature","rate_hz":10.0,"base":40.0,"amplitude":10.0,"period_s":60.0,"noise_sigma":2.0,"phase_ms":0},
{"sensor_id":5,"workplace_id":3,"kind":"temperature","rate_hz":5.0,"base":40.0,"amplitude":10.0,"period_s":60.0,"noise_sigma":2.0,"phase_ms":0},
{"sensor_id":6,"workplace_id":4,"kind":"noise","rate_hz":10.0,"base":70.0,"amplitude":8.0,"period_s":60.0,"noise_sigma":3.5,"phase_ms":0}
]}
)";

constexpr const char* kFields[] = {"sensor_id", "workplace_id", "kind",        "rate_hz", "base",
                                   "amplitude", "period_s",     "noise_sigma", "phase_ms"};

class SensorReader {
 public:
  SensorReader(const json& obj, std::string where, std::vector<std::string>& errors)
      : obj_(obj), where_(std::move(where)), errors_(errors) {}

  bool present(const char* key) {
    if (obj_.contains(key)) return true;
    fail(std::string("missing field '") + key + "'");
    return false;
  }

  std::uint64_t id(const char* key) {
    if (!present(key)) return 0;
    const json& v = obj_.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
      fail(std::string(key) + " must be a positive integer");
      return 0;
    }
    return v.get<std::uint64_t>();
  }

  double number(const char* key) {
    if (!present(key)) return 0.0;
    const json& v = obj_.at(key);
    if (!v.is_number()) {
      fail(std::string(key) + " must be a number");
      return 0.0;
    }
    return v.get<double>();
  }

  void fail(const std::string& message) { errors_.push_back(where_ + ": " + message); }

 private:
  const json& obj_;
  std::string where_;
  std::vector<std::string>& errors_;
};

std::optional<SensorConfig> read_sensor(const json& obj, std::size_t index,
                                        std::span<const EntityId> workplaces,
                                        std::vector<std::string>& errors) {
  std::size_t before = errors.size();
  SensorReader r(obj, "sensors[" + std::to_string(index) + "]", errors);
  if (!obj.is_object()) {
    r.fail("sensor must be an object");
    return std::nullopt;
  }
  for (const auto& [key, _] : obj.items()) {
    if (std::find(std::begin(kFields), std::end(kFields), key) == std::end(kFields)) {
      r.fail("unknown field '" + key + "'");
    }
  }
  SensorConfig c;
  c.sensor_id = EntityId{r.id("sensor_id")};
  c.workplace_id = EntityId{r.id("workplace_id")};
  if (r.present("kind")) {
    const json& k = obj.at("kind");
    auto kind = k.is_string() ? parse_sensor_kind(k.get<std::string>()) : std::nullopt;
    if (kind) {
      c.kind = *kind;
    } else {
      r.fail("kind must be one of temperature, noise, vibration");
    }
  }
  c.rate_hz = r.number("rate_hz");
  c.base = r.number("base");
  c.amplitude = r.number("amplitude");
  c.period_s = r.number("period_s");
  c.noise_sigma = r.number("noise_sigma");
  if (r.present("phase_ms")) {
    const json& p = obj.at("phase_ms");
    if (!p.is_number_integer() || p.get<std::int64_t>() < 0) {
      r.fail("phase_ms must be a non-negative integer");
    } else {
      c.phase_ms = p.get<std::int64_t>();
    }
  }
  if (obj.contains("rate_hz") && !(c.rate_hz > 0.0 && c.rate_hz <= kMaxRateHz)) {
    r.fail("rate out of range");
  }
  if (c.amplitude < 0.0) r.fail("amplitude must be >= 0");
  if (obj.contains("period_s") && !(c.period_s > 0.0)) r.fail("period_s must be > 0");
  if (c.noise_sigma < 0.0) r.fail("noise_sigma must be >= 0");
  if (c.workplace_id.value != 0 &&
      std::find(workplaces.begin(), workplaces.end(), c.workplace_id) == workplaces.end()) {
    r.fail("unknown workplace " + std::to_string(c.workplace_id.value));
  }
  if (errors.size() != before) return std::nullopt;
  return c;
}

}  // namespace

ConfigParseResult parse_config(std::string_view text, std::span<const EntityId> workplaces) {
  ConfigParseResult result;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    result.errors.push_back(std::string("malformed document: ") + e.what());
    return result;
  }
  if (!doc.is_object()) {
    result.errors.push_back("malformed document: expected an object");
    return result;
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "sensors" && key != "revision") result.errors.push_back("unknown field '" + key + "'");
  }
  if (doc.contains("revision") && !doc["revision"].is_number_unsigned()) {
    result.errors.push_back("revision must be a non-negative integer");
  }
  if (!doc.contains("sensors") || !doc["sensors"].is_array()) {
    result.errors.push_back("malformed document: 'sensors' must be an array");
    return result;
  }

  SensorConfigSet set;
  std::set<std::uint64_t> seen;
  std::set<std::uint64_t> reported;
  const json& list = doc["sensors"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    auto sensor = read_sensor(list[i], i, workplaces, result.errors);
    if (list[i].is_object() && list[i].contains("sensor_id") &&
        list[i]["sensor_id"].is_number_unsigned()) {
      auto sid = list[i]["sensor_id"].get<std::uint64_t>();
      if (!seen.insert(sid).second && reported.insert(sid).second) {
        result.errors.push_back("duplicate sensor_id " + std::to_string(sid));
      }
    }
    if (sensor) set.sensors.push_back(*sensor);
  }
  if (result.errors.empty()) result.config = std::move(set);
  return result;
}

std::string to_json(const SensorConfigSet& set, bool with_revision) {
  nlohmann::ordered_json doc;
  doc["sensors"] = nlohmann::ordered_json::array();
  for (const auto& s : set.sensors) {
    nlohmann::ordered_json o;
    o["sensor_id"] = s.sensor_id.value;
    o["workplace_id"] = s.workplace_id.value;
    o["kind"] = std::string(to_string(s.kind));
    o["rate_hz"] = s.rate_hz;
    o["base"] = s.base;
    o["amplitude"] = s.amplitude;
    o["period_s"] = s.period_s;
    o["noise_sigma"] = s.noise_sigma;
    o["phase_ms"] = s.phase_ms;
    doc["sensors"].push_back(std::move(o));
  }
  if (with_revision) doc["revision"] = set.revision;
  return doc.dump();
}

std::string_view default_config_text() { return kDefaultConfig; }

SensorConfigSet default_config() {
  const EntityId workplaces[] = {EntityId{1}, EntityId{2}, EntityId{3}, EntityId{4}};
  auto parsed = parse_config(kDefaultConfig, workplaces);
  if (!parsed.ok()) throw InvalidArgument("default sensor config is invalid: " + parsed.errors.front());
  return *parsed.config;
}

SensorConfigSet apply_config(const SensorConfigSet& current, SensorConfigSet next) {
  next.revision = current.revision + 1;
  return next;
}

double aggregate_rate_hz(const SensorConfigSet& set) {
  double sum = 0.0;
  for (const auto& s : set.sensors) sum += s.rate_hz;
  return sum;
}

}  // namespace plantpulse::sensors
