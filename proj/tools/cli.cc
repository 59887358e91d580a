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

#include "plantpulse/cli/cli.h"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "plantpulse/domain/error.h"
#include "plantpulse/service/api.h"
#include "plantpulse/store/csv.h"

namespace plantpulse::cli {

namespace {

constexpr std::uint64_t kMaxRowsLimit = 4'000'000'000ULL;

// Failure that maps to an exit code after printing its message.
struct Exit {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kExitOperational, "cannot read " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct SourceFlags {
  std::string sensor_config;
  std::string master_data;
};

void add_source_flags(CLI::App* cmd, SourceFlags& f) {
  cmd->add_option("--sensor-config", f.sensor_config, "Sensor configuration JSON file");
  cmd->add_option("--master-data", f.master_data, "Master data JSON file");
}

void load_sources(const SourceFlags& f, service::PipelineOptions& o) {
  if (!f.master_data.empty()) {
    std::string text = read_file(f.master_data);
    try {
      o.master = sim::parse_master_data(text, &o.arrival_mean_ms);
    } catch (const InvalidArgument& e) {
      throw Exit{kExitUsage, f.master_data + ": " + e.what()};
    }
  }
  std::string text = f.sensor_config.empty() ? std::string(sensors::default_config_text())
                                             : read_file(f.sensor_config);
  auto parsed = sensors::parse_config(text, o.master.workplace_ids());
  if (!parsed.ok()) {
    std::string message = (f.sensor_config.empty() ? "default sensor config" : f.sensor_config) +
                          ": invalid sensor configuration";
    for (const auto& e : parsed.errors) message += "\n  - " + e;
    throw Exit{kExitUsage, message};
  }
  o.sensors = *parsed.config;
}

int default_port() {
  const char* env = std::getenv("PLANTPULSE_PORT");
  if (!env || !*env) return 8080;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 65535) {
    throw Exit{kExitUsage, "PLANTPULSE_PORT must be an integer in [1, 65535]"};
  }
  return static_cast<int>(v);
}

struct ServeFlags {
  int port = 0;
  std::uint64_t seed = 42;
  double scale = 1.0;
  std::string clock = "realtime";
  std::uint64_t max_rows = 50'000'000;
  SourceFlags sources;
};

int serve(const ServeFlags& f, std::ostream& out, std::ostream& err) {
  service::PipelineOptions o;
  o.seed = f.seed;
  o.scale = f.scale;
  o.clock = *sim::parse_clock_mode(f.clock);
  o.max_rows = f.max_rows;
  load_sources(f.sources, o);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::Pipeline pipeline(std::move(o));
  service::ServerOptions so;
  so.port = f.port;
  service::ApiServer server(pipeline, so);
  int port = 0;
  try {
    port = server.bind();
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << " (port in use?)\n";
    return kExitOperational;
  }
  out << "plantpulse listening on http://" << so.host << ":" << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.serve();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  out << "plantpulse stopped" << std::endl;
  return kExitOk;
}

struct RunFlags {
  double duration_s = 0.0;
  std::uint64_t seed = 42;
  std::string export_dir;
  SourceFlags sources;
};

int run(const RunFlags& f, std::ostream& out, std::ostream& err) {
  service::PipelineOptions o;
  o.seed = f.seed;
  o.clock = sim::ClockMode::kStepped;
  load_sources(f.sources, o);
  const auto total_ms = static_cast<std::int64_t>(std::llround(f.duration_s * 1000.0));
  if (total_ms < 1) throw Exit{kExitUsage, "--duration must be at least 0.001 seconds"};

  service::Pipeline pipeline(std::move(o));
  pipeline.start();
  const std::int64_t step = pipeline.options().tick.count();
  for (std::int64_t t = 0; t < total_ms && pipeline.running();) {
    std::int64_t d = std::min(step, total_ms - t);
    pipeline.step(d);
    t += d;
  }
  pipeline.stop();

  const store::Store& store = pipeline.store();
  store::Snapshot snap = store.snapshot();
  if (!f.export_dir.empty()) {
    try {
      store::export_csv(store, snap, f.export_dir);
    } catch (const std::runtime_error& e) {
      err << "error: " << e.what() << "\n";
      return kExitOperational;
    }
  }
  for (const auto& t : store.catalog().tables()) {
    out << std::left << std::setw(28) << t.name << std::right << std::setw(12)
        << snap.rows(store.table_id(t.name)) << "\n";
  }
  auto m = pipeline.metrics();
  out << "simulated " << m.sim_time << " ms: " << m.business_rows_total << " business rows, "
      << m.sensor_rows_total << " sensor rows" << std::endl;
  if (pipeline.halted()) {
    err << "error: ingestion stopped early: " << pipeline.halt_reason() << "\n";
    return kExitOperational;
  }
  return kExitOk;
}

struct QueryFlags {
  std::string url;
  std::string export_dir;
  std::string file;
  std::string sql;
  bool csv = false;
};

Value json_value(const nlohmann::json& v, ColumnType type) {
  if (v.is_null()) return std::monostate{};
  if (v.is_string()) return v.get<std::string>();
  if (type == ColumnType::kDecimal || v.is_number_float()) return v.get<double>();
  return v.get<std::int64_t>();
}

query::ResultTable remote_query(const std::string& url, const std::string& sql) {
  httplib::Client client(url);
  client.set_connection_timeout(5);
  client.set_read_timeout(60);
  auto res = client.Post("/api/query", nlohmann::json{{"sql", sql}}.dump(), "application/json");
  if (!res) throw Exit{kExitOperational, "cannot reach " + url + ": " + httplib::to_string(res.error())};
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error&) {
    throw Exit{kExitOperational, "unexpected response from " + url + " (HTTP " +
                                     std::to_string(res->status) + ")"};
  }
  if (res->status == 400) {
    std::string message = body.value("error", "bad request");
    if (body.contains("offset")) message += " (offset " + std::to_string(body["offset"].get<std::size_t>()) + ")";
    throw Exit{kExitUsage, message};
  }
  if (res->status != 200) {
    throw Exit{kExitOperational, body.value("error", "HTTP " + std::to_string(res->status))};
  }
  query::ResultTable result;
  for (const auto& c : body.at("columns")) {
    ColumnType type = ColumnType::kText;
    std::string name = c.at("type").get<std::string>();
    for (ColumnType t : {ColumnType::kInt64, ColumnType::kDecimal, ColumnType::kText, ColumnType::kTimestamp}) {
      if (to_string(t) == name) type = t;
    }
    result.columns.push_back({c.at("name").get<std::string>(), type});
  }
  for (const auto& r : body.at("rows")) {
    Row row;
    for (std::size_t i = 0; i < r.size() && i < result.columns.size(); ++i) {
      row.push_back(json_value(r[i], result.columns[i].type));
    }
    result.rows.push_back(std::move(row));
  }
  result.elapsed_ms = body.value("elapsed_ms", 0.0);
  return result;
}

query::ResultTable offline_query(const std::string& dir, const std::string& sql) {
  auto store = store::Store::with_catalog(catalog());
  try {
    store::import_csv(*store, dir);
  } catch (const std::exception& e) {
    throw Exit{kExitOperational, "cannot load " + dir + ": " + e.what()};
  }
  try {
    return query::execute_sql(sql, *store, store->snapshot());
  } catch (const QueryError& e) {
    throw Exit{kExitUsage, std::string(e.what())};
  } catch (const ResourceExhausted& e) {
    throw Exit{kExitOperational, e.what()};
  }
}

int run_query(const QueryFlags& f, std::ostream& out) {
  if (f.url.empty() == f.export_dir.empty()) {
    throw Exit{kExitUsage, "query needs exactly one of --url or --export-dir"};
  }
  if (f.sql.empty() == f.file.empty()) throw Exit{kExitUsage, "query needs either SQL text or --file"};
  std::string sql = f.file.empty() ? f.sql : read_file(f.file);
  query::ResultTable result = f.url.empty() ? offline_query(f.export_dir, sql) : remote_query(f.url, sql);
  print_result(result, out, f.csv);
  return kExitOk;
}

}  // namespace

void print_result(const query::ResultTable& result, std::ostream& out, bool csv) {
  if (csv) {
    store::CsvRecord header;
    for (const auto& c : result.columns) header.emplace_back(c.name);
    out << store::csv_line(header);
    for (const auto& row : result.rows) {
      store::CsvRecord record;
      for (const auto& v : row) {
        if (is_null(v)) {
          record.emplace_back(std::nullopt);
        } else {
          record.emplace_back(to_display(v));
        }
      }
      out << store::csv_line(record);
    }
    out.flush();
    return;
  }
  std::vector<std::size_t> width;
  for (const auto& c : result.columns) width.push_back(c.name.size());
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : result.rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(to_display(row[i]));
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out << "  ";
      out << std::left << std::setw(static_cast<int>(width[i])) << line[i];
    }
    out << "\n";
  };
  std::vector<std::string> header;
  std::vector<std::string> rule;
  for (std::size_t i = 0; i < result.columns.size(); ++i) {
    header.push_back(result.columns[i].name);
    rule.emplace_back(width[i], '-');
  }
  emit(header);
  emit(rule);
  for (const auto& line : cells) emit(line);
  out << "(" << result.rows.size() << (result.rows.size() == 1 ? " row" : " rows") << ", "
      << std::fixed << std::setprecision(1) << result.elapsed_ms << " ms)" << std::endl;
  out << std::defaultfloat;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PlantPulse: Industry 4.0 data generation and query demonstrator", "plantpulse"};
  app.require_subcommand(1);

  ServeFlags serve_flags;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API and web UI server");
  serve_cmd->add_option("--port", serve_flags.port, "Listen port (default 8080 or $PLANTPULSE_PORT)")
      ->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--seed", serve_flags.seed, "Simulation seed")->capture_default_str();
  serve_cmd->add_option("--scale", serve_flags.scale, "Virtual time per wall time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--clock", serve_flags.clock, "Clock mode")
      ->check(CLI::IsMember({"realtime", "stepped"}))
      ->capture_default_str();
  serve_cmd->add_option("--max-rows", serve_flags.max_rows, "Row cap across all tables")
      ->check(CLI::Range(std::uint64_t{1}, kMaxRowsLimit))
      ->capture_default_str();
  add_source_flags(serve_cmd, serve_flags.sources);

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Headless deterministic simulation with CSV export");
  run_cmd->add_option("--duration", run_flags.duration_s, "Virtual seconds to simulate")
      ->required()
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run_flags.seed, "Simulation seed")->capture_default_str();
  run_cmd->add_option("--export-dir", run_flags.export_dir, "Directory for <TABLE>.csv files");
  add_source_flags(run_cmd, run_flags.sources);

  QueryFlags query_flags;
  auto* query_cmd = app.add_subcommand("query", "Execute one SQL query");
  query_cmd->add_option("--url", query_flags.url, "Server base URL, e.g. http://localhost:8080");
  query_cmd->add_option("--export-dir", query_flags.export_dir, "Query exported CSV files offline");
  query_cmd->add_flag("--csv", query_flags.csv, "Print RFC 4180 CSV");
  query_cmd->add_option("--file", query_flags.file, "Read SQL from a file");
  query_cmd->add_option("sql", query_flags.sql, "SQL text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*serve_cmd) {
      if (serve_cmd->count("--port") == 0) serve_flags.port = default_port();
      return serve(serve_flags, out, err);
    }
    if (*run_cmd) return run(run_flags, out, err);
    return run_query(query_flags, out);
  } catch (const Exit& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOperational;
  }
}

}  // namespace plantpulse::cli
