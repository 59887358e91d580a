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

#include <condition_variable>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "plantpulse/service/api.h"

namespace plantpulse::service {

struct ApiServer::Impl {
  Impl(Pipeline& pipeline, ServerOptions o, query::ExecOptions exec)
      : api(pipeline, exec), options(std::move(o)) {}

  // False once stop() was requested.
  bool wait(std::chrono::milliseconds d) {
    std::unique_lock lock(mu);
    return !cv.wait_for(lock, d, [&] { return stopping; });
  }

  void routes();
  void run_ticker();

  Api api;
  ServerOptions options;
  httplib::Server http;
  std::mutex mu;
  std::condition_variable cv;
  bool stopping = false;
  bool bound = false;
  std::thread ticker;
  std::thread background;
};

namespace {

void send(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

void ApiServer::Impl::routes() {
  // SO_REUSEADDR without SO_REUSEPORT.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  http.Post("/api/sim/start",
            [this](const httplib::Request&, httplib::Response& res) { send(res, api.sim_start()); });
  http.Post("/api/sim/stop",
            [this](const httplib::Request&, httplib::Response& res) { send(res, api.sim_stop()); });
  http.Get("/api/sim/status",
           [this](const httplib::Request&, httplib::Response& res) { send(res, api.sim_status()); });
  http.Get("/api/metrics",
           [this](const httplib::Request&, httplib::Response& res) { send(res, api.metrics()); });
  http.Get("/api/metrics/stream", [this](const httplib::Request&, httplib::Response& res) {
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [this](std::size_t, httplib::DataSink& sink) {
      std::string frame = sse_frame(api.pipeline().metrics());
      if (!sink.is_writable() || !sink.write(frame.data(), frame.size())) return false;
      if (!wait(options.metrics_interval)) {
        sink.done();
        return false;
      }
      return true;
    });
  });
  http.Get("/api/sensors/config",
           [this](const httplib::Request&, httplib::Response& res) { send(res, api.sensors_get()); });
  http.Put("/api/sensors/config", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, api.sensors_put(req.body));
  });
  http.Post("/api/query", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, api.query(req.body));
  });
  http.Get("/api/query/predefined",
           [this](const httplib::Request&, httplib::Response& res) { send(res, api.predefined()); });
  http.Get("/api/tables",
           [this](const httplib::Request&, httplib::Response& res) { send(res, api.tables()); });
  http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    send(res, {500, nlohmann::json{{"error", message}}.dump(), "application/json"});
  });
  if (!options.static_dir.empty() && std::filesystem::is_directory(options.static_dir)) {
    http.set_mount_point("/", options.static_dir);
  }
}

void ApiServer::Impl::run_ticker() {
  auto last = std::chrono::steady_clock::now();
  const std::chrono::milliseconds period = api.pipeline().options().tick;
  while (wait(period)) {
    auto now = std::chrono::steady_clock::now();
    api.pipeline().tick(now - last);
    last = now;
  }
}

ApiServer::ApiServer(Pipeline& pipeline, ServerOptions options, query::ExecOptions exec)
    : impl_(std::make_unique<Impl>(pipeline, std::move(options), exec)) {
  impl_->routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind() {
  const auto& o = impl_->options;
  if (o.port == 0) {
    port_ = impl_->http.bind_to_any_port(o.host);
  } else if (impl_->http.bind_to_port(o.host, o.port)) {
    port_ = o.port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) {
    throw std::runtime_error("cannot bind " + o.host + ":" + std::to_string(o.port));
  }
  impl_->bound = true;
  return port_;
}

void ApiServer::serve() {
  impl_->ticker = std::thread([this] { impl_->run_ticker(); });
  impl_->http.listen_after_bind();
}

int ApiServer::start_background() {
  int port = bind();
  impl_->background = std::thread([this] { serve(); });
  impl_->http.wait_until_ready();
  return port;
}

void ApiServer::stop() {
  {
    std::lock_guard lock(impl_->mu);
    if (impl_->stopping) return;
    impl_->stopping = true;
  }
  impl_->cv.notify_all();
  impl_->http.stop();
  if (impl_->background.joinable()) impl_->background.join();
  if (impl_->ticker.joinable()) impl_->ticker.join();
}

}  // namespace plantpulse::service
