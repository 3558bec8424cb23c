// Copyright 2026 The histif Authors
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

#include <csignal>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "histif/error.hpp"
#include "histif/store.hpp"
#include "http_binding.hpp"

namespace {
httplib::Server* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"histif-server: JSON API for historical what-if queries", "histif-server"};
  std::string host = "127.0.0.1", dir;
  int port = 8080, timeout = 60;
  app.add_option("--host", host, "Bind address");
  app.add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  app.add_option("--data-dir", dir, "Store directory (HISTIF_DATA_DIR overrides)");
  app.add_option("--timeout", timeout, "Seconds allowed per what-if request")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (const char* env = std::getenv("HISTIF_DATA_DIR"); env && *env) dir = env;
  if (dir.empty()) dir = "histif-data";

  histif::ApiOptions opts;
  opts.timeout = std::chrono::seconds(timeout);
  std::unique_ptr<histif::ApiSession> session;
  try {
    session = std::make_unique<histif::ApiSession>(histif::open_store(dir), opts);
  } catch (const histif::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  httplib::Server server;
  histif::bind_routes(server, *session);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  if (port == 0) {
    port = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  std::cout << "listening on http://" << host << ":" << port << std::endl;
  server.listen_after_bind();
  return 0;
}
