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

#ifndef EJPEG_SERVICE_SERVER_H_
#define EJPEG_SERVICE_SERVER_H_

#include <memory>
#include <string>

#include "ejpeg/error.h"
#include "ejpeg/service/job_runner.h"
#include "ejpeg/service/session_store.h"

namespace httplib {
class Server;
}

namespace ejpeg::service {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;        // 0 picks a free port
  std::string data_dir;   // empty keeps sessions in memory only
  int job_threads = 2;
};

// HTTP status for a library error code.
int HttpStatus(ErrorCode code);

// The session service over HTTP + JSON. Routes:
//   GET    /health, /schema/objective, /classifiers
//   POST   /sessions                      JFIF, or PNG/PNM with ?qf=&sampling=
//   GET    /sessions, /sessions/{id}
//   DELETE /sessions/{id}
//   POST   /sessions/{id}/masks[?name=]   PNG/PNM, or JSON rectangles
//   GET    /sessions/{id}/masks/{name}    PNG
//   POST   /sessions/{id}/images[?name=]  PNG/PNM, or JSON crop of the output
//   GET    /sessions/{id}/images/{name}   PNG
//   POST   /sessions/{id}/jobs            objective, mask, config, kind
//   GET    /jobs/{id}
//   POST   /jobs/{id}/cancel
//   GET    /jobs/{id}/preview[?result=i]  PNG of the latest iterate or result
//   POST   /sessions/{id}/adopt           {"job", "index"}
//   POST   /sessions/{id}/undo, /sessions/{id}/redo
//   GET    /sessions/{id}/export?format=jfif|png|ppm
//   GET    /sessions/{id}/verify[?mode=dct-exact|pixel-rounded]
//   POST   /sessions/{id}/hsv, /sessions/{id}/imprint, /sessions/{id}/shift-search
// Errors are {"error", "code"} with "path" for objective schema errors.
class Server {
 public:
  explicit Server(const ServerConfig& config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the listening socket and returns the port. Throws kIo.
  int Bind();
  // Serves until Stop(). Call after Bind().
  void Serve();
  void Stop();

  SessionStore& store() { return *store_; }
  JobRunner& jobs() { return *jobs_; }

 private:
  void Routes();

  ServerConfig config_;
  std::unique_ptr<SessionStore> store_;
  std::unique_ptr<JobRunner> jobs_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace ejpeg::service

#endif  // EJPEG_SERVICE_SERVER_H_
