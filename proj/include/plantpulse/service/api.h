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

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include "plantpulse/query/executor.h"
#include "plantpulse/service/pipeline.h"

namespace plantpulse::service {

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Transport-independent request handlers; every method is safe to call
/// concurrently.
class Api {
 public:
  explicit Api(Pipeline& pipeline, query::ExecOptions exec = {});

  ApiResponse sim_start();
  ApiResponse sim_stop();
  ApiResponse sim_status() const;
  ApiResponse metrics() const;
  ApiResponse sensors_get() const;
  ApiResponse sensors_put(std::string_view body);
  ApiResponse query(std::string_view body) const;
  ApiResponse predefined() const;
  ApiResponse tables() const;

  Pipeline& pipeline() { return pipeline_; }

 private:
  Pipeline& pipeline_;
  query::ExecOptions exec_;
};

/// "event: metrics" frame for the SSE stream.
std::string sse_frame(const MetricsFrame& frame);

struct ServerOptions {
  std::string host = "0.0.0.0";
  int port = 8080;  // 0 binds an ephemeral port
  std::string static_dir = "web/dist";
  std::chrono::milliseconds metrics_interval{1000};
};

/// HTTP front end plus the ingestion ticker.
class ApiServer {
 public:
  ApiServer(Pipeline& pipeline, ServerOptions options, query::ExecOptions exec = {});
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds the socket; returns the bound port. Throws std::runtime_error
  /// when the port is unavailable.
  int bind();
  /// Serves until stop(); call after bind(). Starts the ticker.
  void serve();
  /// bind() + serve() on a background thread.
  int start_background();
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace plantpulse::service
