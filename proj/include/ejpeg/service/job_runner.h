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

#ifndef EJPEG_SERVICE_JOB_RUNNER_H_
#define EJPEG_SERVICE_JOB_RUNNER_H_

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "ejpeg/error.h"
#include "ejpeg/optimizer.h"
#include "ejpeg/service/session_store.h"
#include "ejpeg/tool_objective.h"

namespace ejpeg::service {

enum class JobKind { kOptimize, kExploreClasses, kDiverse };
enum class JobStatus { kQueued, kRunning, kDone, kFailed, kCancelled };

const char* JobKindName(JobKind kind);
const char* JobStatusName(JobStatus status);

// A preview latent is published every this many steps.
constexpr int kPreviewInterval = 10;

struct JobRequest {
  JobKind kind = JobKind::kOptimize;
  std::vector<WeightedTool> tools;  // optimize
  std::string descriptor;           // history entry text on commit
  std::string mask;                 // mask name; empty selects everything
  OptimizeConfig config;
  std::string hook = "toy";         // explore_classes
  std::vector<int> classes;
  int count = 2;                    // diverse
  double proximity = 0.0;
};

struct JobResult {
  std::string label;
  int cls = -1;
  double score = 0.0;
  LatentField latent;
};

struct Job {
  std::string id;
  std::string session_id;
  JobKind kind = JobKind::kOptimize;
  std::atomic<bool> cancel_requested{false};

  // Everything below is guarded by mu.
  mutable std::mutex mu;
  std::condition_variable finished;
  JobStatus status = JobStatus::kQueued;
  int step = 0;
  int total_steps = 0;
  std::vector<double> values;
  double final_value = 0.0;
  bool early_stopped = false;
  std::string error;
  ErrorCode error_code = ErrorCode::kNumerical;
  LatentField preview;  // last published iterate; empty until the first
  std::vector<JobResult> results;
  bool committed = false;

  bool terminal() const {
    return status == JobStatus::kDone || status == JobStatus::kFailed ||
           status == JobStatus::kCancelled;
  }
};

// Runs jobs on a fixed pool of threads. At most one job owns a session at a
// time; an optimize job pushes its result onto the session history when it
// finishes, class and diversity jobs leave their results for adoption.
class JobRunner {
 public:
  JobRunner(SessionStore& store, int threads);
  ~JobRunner();
  JobRunner(const JobRunner&) = delete;
  JobRunner& operator=(const JobRunner&) = delete;

  // Validates the request against the session and queues it. Throws
  // kNotFound for a missing session or mask, kConflict when the session
  // already has a job, kInvalidArgument for a bad request.
  std::shared_ptr<Job> Submit(const std::string& session_id, JobRequest request);
  // Throws kNotFound.
  std::shared_ptr<Job> Find(const std::string& id) const;
  // Returns false when the job already finished.
  bool Cancel(const std::string& id);
  // Blocks until the job is terminal.
  void Wait(const std::string& id) const;

 private:
  struct Pending {
    std::shared_ptr<Job> job;
    JobRequest request;
    CompressedImage code;
    LatentField start;
    RegionMask mask;
    ResourceResolver resolver;
  };

  void WorkerLoop();
  void Run(Pending& pending);
  void Release(const std::string& session_id, const std::string& job_id);

  SessionStore& store_;
  mutable std::mutex mu_;
  std::condition_variable wake_;
  std::deque<Pending> queue_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  uint64_t next_id_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace ejpeg::service

#endif  // EJPEG_SERVICE_JOB_RUNNER_H_
