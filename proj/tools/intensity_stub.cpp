// Copyright 2026 The carbench Authors
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

// Minimal grid-intensity endpoint for local runs and tests. Answers every GET
// with {"carbon_intensity": <value>, "timestamp": <ts>}.

#include <httplib.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Serve a constant carbon intensity over HTTP"};
  std::string host = "127.0.0.1";
  int port = 0;
  std::string port_file;
  double value = 400.0;
  double timestamp = 0.0;
  app.add_option("--host", host, "Bind address");
  app.add_option("--port", port, "Port (0 picks a free port)");
  app.add_option("--port-file", port_file, "Write the bound port here once listening");
  app.add_option("--value", value, "Intensity in gCO2/kWh");
  app.add_option("--timestamp", timestamp, "Timestamp reported with the value");
  CLI11_PARSE(app, argc, argv);

  httplib::Server server;
  server.Get(".*", [&](const httplib::Request&, httplib::Response& res) {
    const nlohmann::json body = {{"carbon_intensity", value}, {"timestamp", timestamp}};
    res.set_content(body.dump(), "application/json");
  });

  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    std::cerr << "intensity_stub: cannot bind " << host << ':' << port << '\n';
    return 1;
  }
  if (!port_file.empty()) {
    const std::string tmp = port_file + ".tmp";
    std::ofstream(tmp) << bound << '\n';
    std::rename(tmp.c_str(), port_file.c_str());
  }
  std::cout << "listening on " << host << ':' << bound << std::endl;
  return server.listen_after_bind() ? 0 : 1;
}
