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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "oracles.h"
#include "plantpulse/domain/error.h"
#include "plantpulse/domain/validate.h"
#include "plantpulse/sensors/config.h"
#include "plantpulse/sensors/engine.h"

using namespace plantpulse;
using namespace plantpulse::sensors;

namespace {

const std::vector<EntityId> kWorkplaces = {EntityId{1}, EntityId{2}, EntityId{3}, EntityId{4}};

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

SensorConfig sensor(std::uint64_t id, double rate, std::int64_t phase = 0) {
  SensorConfig c;
  c.sensor_id = EntityId{id};
  c.workplace_id = EntityId{1};
  c.rate_hz = rate;
  c.base = 40.0;
  c.amplitude = 10.0;
  c.noise_sigma = 2.0;
  c.phase_ms = phase;
  return c;
}

std::size_t count_for(const std::vector<SensorReading>& rs, std::uint64_t sensor_id) {
  return static_cast<std::size_t>(std::count_if(
      rs.begin(), rs.end(), [&](const SensorReading& r) { return r.sensor_id.value == sensor_id; }));
}

std::string entry(int id, int workplace, const char* kind, const char* rate, const char* extra = "") {
  return std::string("{\"sensor_id\":") + std::to_string(id) + ",\"workplace_id\":" + std::to_string(workplace) +
         ",\"kind\":\"" + kind + "\",\"rate_hz\":" + rate +
         ",\"base\":1.0,\"amplitude\":0.0,\"period_s\":60.0,\"noise_sigma\":0.0,\"phase_ms\":0" + extra + "}";
}

std::string doc(std::initializer_list<std::string> entries) {
  std::string out = "{\"sensors\":[";
  bool first = true;
  for (const auto& e : entries) {
    out += (first ? "" : ",") + e;
    first = false;
  }
  return out + "]}";
}

bool has_error(const ConfigParseResult& r, std::string_view text) {
  return std::any_of(r.errors.begin(), r.errors.end(),
                     [&](const std::string& e) { return e.find(text) != std::string::npos; });
}

}  // namespace

TEST_CASE("shipped default file matches the embedded default") {
  std::string text = read_file(PLANTPULSE_DEFAULT_SENSOR_CONFIG);
  CHECK(text == default_config_text());
  auto r = parse_config(text, kWorkplaces);
  REQUIRE(r.ok());
  const auto& s = r.config->sensors;
  REQUIRE(s.size() == 6);
  auto on = [&](std::uint64_t w, SensorKind k) {
    return std::count_if(s.begin(), s.end(), [&](const SensorConfig& c) {
      return c.workplace_id.value == w && c.kind == k;
    });
  };
  CHECK(on(1, SensorKind::kTemperature) == 1);
  CHECK(on(1, SensorKind::kNoise) == 1);
  CHECK(on(2, SensorKind::kVibration) == 1);
  CHECK(on(2, SensorKind::kTemperature) == 1);
  CHECK(on(3, SensorKind::kTemperature) + on(3, SensorKind::kNoise) + on(3, SensorKind::kVibration) == 1);
  CHECK(on(4, SensorKind::kTemperature) + on(4, SensorKind::kNoise) + on(4, SensorKind::kVibration) == 1);
  CHECK(*r.config == default_config());
  auto reparsed = parse_config(to_json(default_config()), kWorkplaces);
  REQUIRE(reparsed.ok());
  CHECK(*reparsed.config == default_config());
}

TEST_CASE("config validation") {
  auto dup = parse_config(doc({entry(5, 1, "noise", "1.0"), entry(5, 2, "noise", "1.0")}), kWorkplaces);
  CHECK_FALSE(dup.ok());
  CHECK(has_error(dup, "duplicate sensor_id 5"));

  CHECK(has_error(parse_config(doc({entry(1, 1, "noise", "0")}), kWorkplaces), "rate out of range"));
  CHECK(has_error(parse_config(doc({entry(1, 1, "noise", "10000.5")}), kWorkplaces), "rate out of range"));
  CHECK(parse_config(doc({entry(1, 1, "noise", "10000")}), kWorkplaces).ok());

  auto many = parse_config(doc({entry(1, 99, "noise", "1.0"), entry(2, 1, "smell", "1.0", ",\"colour\":\"red\"")}),
                           kWorkplaces);
  CHECK_FALSE(many.ok());
  CHECK(has_error(many, "unknown workplace 99"));
  CHECK(has_error(many, "colour"));
  CHECK(many.errors.size() >= 3);

  auto missing = parse_config(R"({"sensors":[{"sensor_id":1,"workplace_id":1,"kind":"noise","rate_hz":1.0}]})",
                              kWorkplaces);
  CHECK(has_error(missing, "missing field 'base'"));

  CHECK(has_error(parse_config("{", kWorkplaces), "malformed document"));
  CHECK_FALSE(parse_config(R"([1,2])", kWorkplaces).ok());
  CHECK_FALSE(parse_config(R"({"sensors":{}})", kWorkplaces).ok());
  CHECK(parse_config(R"({"sensors":[]})", kWorkplaces).ok());
}

TEST_CASE("to_json round-trips") {
  SensorConfigSet set;
  set.sensors = {sensor(1, 2.5, 17), sensor(9, 0.125)};
  set.sensors[1].kind = SensorKind::kVibration;
  set.sensors[1].workplace_id = EntityId{3};
  auto back = parse_config(to_json(set), kWorkplaces);
  REQUIRE(back.ok());
  CHECK(back.config->sensors == set.sensors);
  CHECK(to_json(set, true).find("\"revision\":1") != std::string::npos);
}

TEST_CASE("signal model") {
  ReadingRng rng(1);
  SensorConfig flat = sensor(1, 1);
  flat.amplitude = 0;
  flat.noise_sigma = 0;
  for (std::int64_t t : {0, 1, 15'000, 123'456'789}) CHECK(value_at(flat, Timestamp{t}, rng) == 40.0);

  SensorConfig wave = sensor(1, 1);
  wave.noise_sigma = 0;
  CHECK(value_at(wave, Timestamp{15'000}, rng) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(value_at(wave, Timestamp{45'000}, rng) == doctest::Approx(30.0).epsilon(1e-12));

  SensorConfig noisy = flat;
  noisy.noise_sigma = 1.0;
  constexpr int kN = 10'000;
  double sum = 0;
  for (int i = 0; i < kN; ++i) sum += value_at(noisy, Timestamp{i}, rng);
  CHECK(std::fabs(sum / kN - 40.0) <= 3.0 / std::sqrt(static_cast<double>(kN)));
}

TEST_CASE("readings_between counts") {
  SensorConfigSet one;
  one.sensors = {sensor(1, 5)};
  CHECK(readings_between(one, Timestamp{0}, Timestamp{2000}, 1).size() == 10);
  CHECK_THROWS_AS(readings_between(one, Timestamp{5}, Timestamp{5}, 1), InvalidArgument);

  SensorConfigSet two;
  two.sensors = {sensor(1, 5), sensor(2, 20)};
  auto rs = readings_between(two, Timestamp{0}, Timestamp{1000}, 1);
  CHECK(rs.size() == testing::brute_force_emissions(5, 0, 0, 1000) +
                         testing::brute_force_emissions(20, 0, 0, 1000));
  CHECK(rs.size() == 25);
  for (std::size_t i = 1; i < rs.size(); ++i) {
    CHECK(rs[i - 1].date <= rs[i].date);
    if (rs[i - 1].date == rs[i].date) CHECK(rs[i - 1].sensor_id <= rs[i].sensor_id);
    CHECK(rs[i].id.value == rs[i - 1].id.value + 1);
  }
  for (const auto& r : rs) CHECK(validate_row("SENSOR_DATA", r.to_row()).empty());
}

TEST_CASE("count law over random windows") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    double rate = std::uniform_real_distribution<double>(0.01, 500.0)(rng);
    if (trial % 3 == 0) rate = static_cast<double>(1 + rng() % 1000);
    std::int64_t phase = static_cast<std::int64_t>(rng() % 1000);
    std::int64_t t0 = phase + static_cast<std::int64_t>(rng() % 100'000);
    std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 20'000);
    SensorConfigSet set;
    set.sensors = {sensor(1, rate, phase)};
    auto n = readings_between(set, Timestamp{t0}, Timestamp{t0 + w}, 1).size();
    double expected = static_cast<double>(w) * rate / 1000.0;
    CHECK(n >= static_cast<std::size_t>(std::floor(expected - 1e-9)));
    CHECK(n <= static_cast<std::size_t>(std::ceil(expected + 1e-9)));
    if (w <= 5000) CHECK(n == testing::brute_force_emissions(rate, phase, t0, t0 + w));
  }
}

TEST_CASE("output is independent of window partitioning") {
  auto set = default_config();
  auto whole = readings_between(set, Timestamp{0}, Timestamp{2000}, 9);
  auto a = readings_between(set, Timestamp{0}, Timestamp{1000}, 9);
  auto b = readings_between(set, Timestamp{1000}, Timestamp{2000}, 9, EntityId{a.size() + 1});
  a.insert(a.end(), b.begin(), b.end());
  CHECK(a == whole);

  SensorEngine engine(set, 9);
  std::vector<SensorReading> stepped;
  std::mt19937_64 rng(5);
  std::int64_t t = 0;
  while (t < 2000) {
    t = std::min<std::int64_t>(2000, t + 1 + static_cast<std::int64_t>(rng() % 300));
    auto part = engine.generate_until(Timestamp{t});
    stepped.insert(stepped.end(), part.begin(), part.end());
  }
  CHECK(stepped == whole);
  CHECK(engine.generate_until(Timestamp{1500}).empty());
}

TEST_CASE("seeds change values, not instants") {
  auto set = default_config();
  auto a = readings_between(set, Timestamp{0}, Timestamp{1000}, 1);
  auto b = readings_between(set, Timestamp{0}, Timestamp{1000}, 2);
  REQUIRE(a.size() == b.size());
  bool differ = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].date == b[i].date);
    differ = differ || a[i].value != b[i].value;
  }
  CHECK(differ);
}

TEST_CASE("apply_config") {
  auto base = default_config();
  auto same = apply_config(base, base);
  CHECK(same.revision == base.revision + 1);
  CHECK(same.sensors == base.sensors);

  SensorEngine a(base, 4);
  SensorEngine b(base, 4);
  a.generate_until(Timestamp{1000});
  b.generate_until(Timestamp{1000});
  CHECK(b.apply_config(base).revision == 2);
  CHECK(a.generate_until(Timestamp{5000}) == b.generate_until(Timestamp{5000}));
}

TEST_CASE("doubling a rate doubles its readings per second") {
  SensorConfigSet set;
  set.sensors = {sensor(1, 10), sensor(2, 7)};
  SensorEngine e(set, 1);
  e.generate_until(Timestamp{10'000});
  auto doubled = set;
  doubled.sensors[0].rate_hz = 20;
  e.apply_config(doubled);
  for (int w = 0; w < 10; ++w) {
    auto rs = e.generate_until(Timestamp{11'000 + 1000 * w});
    CHECK(count_for(rs, 1) == 20);
    CHECK(count_for(rs, 2) == 7);
  }
}

TEST_CASE("empty set emits nothing") {
  SensorConfigSet empty;
  CHECK(readings_between(empty, Timestamp{0}, Timestamp{60'000}, 1).empty());
  SensorEngine e(default_config(), 1);
  CHECK_FALSE(e.generate_until(Timestamp{1000}).empty());
  e.apply_config(empty);
  CHECK(e.generate_until(Timestamp{5000}).empty());
  CHECK(aggregate_rate_hz(empty) == 0.0);
  CHECK(aggregate_rate_hz(default_config()) == doctest::Approx(100.0));
}

TEST_CASE("skip_to moves the cursor without emitting") {
  SensorEngine e(default_config(), 1);
  e.skip_to(Timestamp{5000});
  CHECK(e.cursor().millis == 5000);
  auto rs = e.generate_until(Timestamp{6000});
  REQUIRE_FALSE(rs.empty());
  CHECK(rs.front().date.millis >= 5000);
  CHECK(rs.front().id.value == 1);
  CHECK(e.next_id() == rs.size() + 1);
}
