// Copyright 2026 The ejpeg Authors. All Rights Reserved.
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

// ejpeg_server: the session service over HTTP.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <pthread.h>
#include <thread>

#include "CLI11.hpp"
#include "ejpeg/error.h"
#include "ejpeg/service/server.h"

namespace {

std::string EnvOr(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  ejpeg::service::ServerConfig config;
  config.host = EnvOr("EJPEG_HOST", config.host);
  config.data_dir = EnvOr("EJPEG_DATA_DIR", "ejpeg-data");
  try {
    config.port = std::stoi(EnvOr("EJPEG_PORT", std::to_string(config.port)));
    config.job_threads =
        std::stoi(EnvOr("EJPEG_JOB_THREADS", std::to_string(config.job_threads)));
  } catch (const std::exception&) {
    std::fprintf(stderr, "EJPEG_PORT and EJPEG_JOB_THREADS must be integers\n");
    return 2;
  }

  CLI::App app{"Explorable JPEG decompression session service"};
  app.add_option("--host", config.host, "Listen address (env EJPEG_HOST)");
  app.add_option("--port", config.port, "Listen port, 0 for any (env EJPEG_PORT)")
      ->check(CLI::Range(0, 65535));
  app.add_option("--data-dir", config.data_dir,
                 "Session directory, empty for memory only (env EJPEG_DATA_DIR)");
  app.add_option("--job-threads", config.job_threads,
                 "Concurrent optimization jobs (env EJPEG_JOB_THREADS)")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  // Signals are taken by a dedicated thread so Stop() runs outside a handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    ejpeg::service::Server server(config);
    const int port = server.Bind();
    std::printf("listening on %s:%d, data in %s\n", config.host.c_str(), port,
                config.data_dir.empty() ? "(memory)" : config.data_dir.c_str());
    std::fflush(stdout);
    std::thread waiter([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      server.Stop();
    });
    server.Serve();
    // Serve() also returns on a listen failure; wake the waiter either way.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  } catch (const ejpeg::Error& e) {
    std::fprintf(stderr, "ejpeg_server: %s\n", e.what());
    return 2;
  }
  return 0;
}
