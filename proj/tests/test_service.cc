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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "plantpulse/domain/error.h"
#include "plantpulse/service/api.h"
#include "plantpulse/service/pipeline.h"
#include "plantpulse/store/integrity.h"

using namespace plantpulse;
using namespace plantpulse::service;
using nlohmann::json;

namespace {

PipelineOptions stepped(std::uint64_t seed = 42) {
  PipelineOptions o;
  o.seed = seed;
  o.clock = sim::ClockMode::kStepped;
  return o;
}

json body(const ApiResponse& r) { return json::parse(r.body); }

std::string query_body(const std::string& sql) { return json{{"sql", sql}}.dump(); }

// Splits an SSE byte stream into complete frames.
std::vector<std::string> frames_of(const std::string& stream) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t end; (end = stream.find("\n\n", start)) != std::string::npos; start = end + 2) {
    out.push_back(stream.substr(start, end - start + 2));
  }
  return out;
}

}  // namespace

TEST_CASE("start and stop are idempotent") {
  Pipeline p(stepped());
  Api api(p);
  CHECK_FALSE(body(api.sim_status())["running"].get<bool>());
  CHECK(body(api.sim_start()) == json{{"running", true}});
  CHECK(body(api.sim_start()) == json{{"running", true}});
  CHECK(body(api.sim_stop()) == json{{"running", false}});
  CHECK(body(api.sim_stop()) == json{{"running", false}});
  auto status = body(api.sim_status());
  CHECK(status["seed"] == 42);
  CHECK(status["clock"] == "stepped");
  CHECK(status["halted"] == false);
}

TEST_CASE("fresh pipeline reports zero metrics") {
  Pipeline p(PipelineOptions{});
  Api api(p);
  auto m = body(api.metrics());
  CHECK(m["business_rows_total"] == 0);
  CHECK(m["sensor_rows_total"] == 0);
  CHECK(m["business_rows_per_s"] == 0.0);
  CHECK(m["sensor_rows_per_s"] == 0.0);
  CHECK(m["sim_time"] == 0);
  CHECK(m.contains("wall_time"));
}

TEST_CASE("a stopped pipeline stops growing and its clock freezes") {
  Pipeline p(stepped());
  p.start();
  for (int i = 0; i < 50; ++i) p.tick(std::chrono::milliseconds(100));
  CHECK(p.sim_time().millis == 5000);
  p.stop();
  auto before = p.metrics();
  for (int i = 0; i < 50; ++i) p.tick(std::chrono::milliseconds(100));
  auto after = p.metrics();
  CHECK(before.sensor_rows_total == after.sensor_rows_total);
  CHECK(before.business_rows_total == after.business_rows_total);
  CHECK(after.sim_time == 5000);
  CHECK(before.sensor_rows_total == 500);
}

TEST_CASE("real-time rate at the configured 100 Hz") {
  std::int64_t wall = 1000;
  PipelineOptions o;
  o.clock = sim::ClockMode::kRealTime;
  o.wall_seconds = [&] { return wall; };
  Pipeline p(o);
  p.start();
  for (int s = 0; s < 30; ++s) {
    for (int i = 0; i < 10; ++i) p.tick(std::chrono::milliseconds(100));
    ++wall;
  }
  auto m = p.metrics();
  CHECK(m.sensor_rows_per_s == doctest::Approx(100.0).epsilon(0.1));
  CHECK(m.sensor_rows_total == 3000);
  CHECK(m.business_rows_per_s > 0.0);
}

TEST_CASE("sensor configuration endpoint") {
  Pipeline p(stepped());
  Api api(p);
  auto initial = body(api.sensors_get());
  CHECK(initial["revision"] == 1);
  CHECK(initial["sensors"].size() == 6);

  auto doubled = initial;
  doubled.erase("revision");
  doubled["sensors"][0]["rate_hz"] = 20.0;
  auto put = api.sensors_put(doubled.dump());
  CHECK(put.status == 200);
  auto after = body(api.sensors_get());
  CHECK(after["revision"] == 2);
  CHECK(after["sensors"][0]["rate_hz"] == 20.0);

  auto bad = after;
  bad["sensors"][1]["workplace_id"] = 99;
  auto rejected = api.sensors_put(bad.dump());
  CHECK(rejected.status == 400);
  auto errors = body(rejected)["errors"];
  bool named = false;
  for (const auto& e : errors) named = named || e.get<std::string>().find("unknown workplace 99") != std::string::npos;
  CHECK(named);
  CHECK(body(api.sensors_get()) == after);
  CHECK(api.sensors_put("not json").status == 400);

  // New rates apply from the next batch on.
  p.start();
  p.step(1000);
  CHECK(p.metrics().sensor_rows_total == 110);
}

TEST_CASE("query endpoint") {
  Pipeline p(stepped());
  Api api(p);
  auto r = api.query(query_body("SELECT COUNT(*) FROM SUPPLIER"));
  CHECK(r.status == 200);
  auto j = body(r);
  CHECK(j["rows"] == json::parse("[[3]]"));
  CHECK(j["columns"][0]["type"] == "int64");
  CHECK(j["elapsed_ms"].is_number());

  auto bad = api.query(query_body("SELEC * FROM X"));
  CHECK(bad.status == 400);
  CHECK(body(bad)["offset"] == 0);
  auto semantic = api.query(query_body("SELECT NOPE FROM WORKPLACE"));
  CHECK(semantic.status == 400);
  CHECK(body(semantic).contains("offset"));
  CHECK(api.query("{").status == 400);
  CHECK(api.query(R"({"query":"x"})").status == 400);

  auto nulls = body(api.query(query_body("SELECT AVG(NOISE_VALUE) FROM SENSOR_DATA")));
  CHECK(nulls["rows"][0][0].is_null());

  query::ExecOptions tight;
  tight.max_intermediate_rows = 5;
  Api guarded(p, tight);
  auto huge = guarded.query(query_body("SELECT COUNT(*) FROM SUPPLIER A JOIN SUPPLIER B ON A.ID = B.ID "
                                       "JOIN WORKPLACE W ON W.ID = W.ID"));
  CHECK(huge.status == 422);
}

TEST_CASE("predefined queries are listed and runnable during ingestion") {
  Pipeline p(stepped());
  Api api(p);
  auto list = body(api.predefined());
  REQUIRE(list.size() == 2);
  p.start();
  for (int i = 0; i < 300; ++i) p.tick(std::chrono::milliseconds(100));
  for (const auto& q : list) {
    CHECK(q.contains("name"));
    CHECK(q.contains("description"));
    auto r = api.query(query_body(q["sql"].get<std::string>()));
    CHECK(r.status == 200);
    CHECK(body(r)["rows"].size() <= 10);
    CHECK_FALSE(body(r)["rows"].empty());
  }
}

TEST_CASE("tables endpoint") {
  Pipeline p(stepped());
  Api api(p);
  auto tables = body(api.tables())["tables"];
  CHECK(tables.size() == 12);
  bool found = false;
  for (const auto& t : tables) {
    if (t["name"] != "SENSOR_DATA") continue;
    found = true;
    CHECK(t["columns"].size() == 10);
    CHECK(t["stream"] == "sensor");
    CHECK(t["rows"] == 0);
    CHECK(t["columns"][1]["references"] == "WORKPLACE");
  }
  CHECK(found);
}

TEST_CASE("ingestion halts at the row cap") {
  auto o = stepped();
  o.max_rows = 100;
  Pipeline p(o);
  p.start();
  for (int i = 0; i < 50; ++i) p.tick(std::chrono::milliseconds(100));
  CHECK(p.halted());
  CHECK_FALSE(p.running());
  CHECK_FALSE(p.start());
  CHECK(p.store().total_rows() <= 100);
  CHECK_FALSE(p.halt_reason().empty());
  CHECK(store::check_integrity(p.store(), p.store().snapshot()).empty());
}

TEST_CASE("invalid pipeline options") {
  auto o = stepped();
  o.master.products.clear();
  CHECK_THROWS_AS(Pipeline{o}, InvalidArgument);
}

TEST_CASE("sse frame format") {
  MetricsFrame f;
  f.sim_time = 5;
  auto frame = sse_frame(f);
  CHECK(frame.rfind("event: metrics\ndata: {", 0) == 0);
  CHECK(frame.substr(frame.size() - 2) == "\n\n");
  auto data = json::parse(frame.substr(frame.find("data: ") + 6));
  CHECK(data["sim_time"] == 5);
}

TEST_CASE("HTTP server") {
  Pipeline p(stepped());
  ServerOptions so;
  so.host = "127.0.0.1";
  so.port = 0;
  so.metrics_interval = std::chrono::milliseconds(50);
  so.static_dir = "";
  ApiServer server(p, so);
  int port = server.start_background();
  REQUIRE(port > 0);
  httplib::Client c("127.0.0.1", port);

  auto status = c.Get("/api/sim/status");
  REQUIRE(status);
  CHECK(status->status == 200);
  CHECK(status->get_header_value("Access-Control-Allow-Origin") == "*");
  CHECK(json::parse(status->body)["running"] == false);

  auto pre = c.Options("/api/query");
  REQUIRE(pre);
  CHECK(pre->status < 300);
  CHECK(pre->get_header_value("Access-Control-Allow-Origin") == "*");

  auto started = c.Post("/api/sim/start", "", "application/json");
  REQUIRE(started);
  CHECK(json::parse(started->body)["running"] == true);

  auto q = c.Post("/api/query", query_body("SELECT COUNT(*) FROM WORKPLACE"), "application/json");
  REQUIRE(q);
  CHECK(q->status == 200);
  CHECK(json::parse(q->body)["rows"] == json::parse("[[4]]"));
  auto badq = c.Post("/api/query", query_body("SELECT"), "application/json");
  REQUIRE(badq);
  CHECK(badq->status == 400);
  CHECK(json::parse(badq->body)["offset"] == 6);

  auto put = c.Put("/api/sensors/config", R"({"sensors":[]})", "application/json");
  REQUIRE(put);
  CHECK(put->status == 200);
  CHECK(json::parse(put->body)["revision"] == 2);
  auto missing = c.Get("/api/nothing-here");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  // Two concurrent SSE clients each receive well-formed frames.
  auto stream = [&](std::vector<std::string>& frames) {
    httplib::Client sc("127.0.0.1", port);
    std::string buffer;
    sc.Get("/api/metrics/stream", [&](const char* data, std::size_t n) {
      buffer.append(data, n);
      return frames_of(buffer).size() < 3;
    });
    frames = frames_of(buffer);
  };
  std::vector<std::string> a, b;
  std::thread ta([&] { stream(a); });
  std::thread tb([&] { stream(b); });
  ta.join();
  tb.join();
  for (const auto* frames : {&a, &b}) {
    REQUIRE(frames->size() >= 3);
    for (const auto& f : *frames) {
      CHECK(f.rfind("event: metrics\ndata: ", 0) == 0);
      auto j = json::parse(f.substr(f.find("data: ") + 6));
      CHECK(j.contains("sensor_rows_per_s"));
      CHECK(j.contains("business_rows_per_s"));
    }
  }
  server.stop();
  CHECK_FALSE(httplib::Client("127.0.0.1", port).Get("/api/sim/status"));
}

TEST_CASE("static files are served under /") {
  auto dir = std::filesystem::temp_directory_path() / "plantpulse_static_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "index.html") << "<html>ok</html>";
  }
  Pipeline p(stepped());
  ServerOptions so;
  so.host = "127.0.0.1";
  so.port = 0;
  so.static_dir = dir.string();
  ApiServer server(p, so);
  int port = server.start_background();
  httplib::Client c("127.0.0.1", port);
  auto r = c.Get("/index.html");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->body == "<html>ok</html>");
  auto root = c.Get("/");
  REQUIRE(root);
  CHECK(root->body == "<html>ok</html>");
  server.stop();
  std::filesystem::remove_all(dir);
}

TEST_CASE("binding a port in use fails") {
  Pipeline p(stepped());
  ServerOptions so;
  so.host = "127.0.0.1";
  so.port = 0;
  ApiServer first(p, so);
  int port = first.start_background();
  so.port = port;
  ApiServer second(p, so);
  CHECK_THROWS_AS(second.bind(), std::runtime_error);
  first.stop();
}
