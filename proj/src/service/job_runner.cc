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

#include "ejpeg/service/job_runner.h"

#include <algorithm>

#include "ejpeg/classifier.h"

namespace ejpeg::service {

const char* JobKindName(JobKind kind) {
  switch (kind) {
    case JobKind::kOptimize:
      return "optimize";
    case JobKind::kExploreClasses:
      return "explore_classes";
    case JobKind::kDiverse:
      return "diverse";
  }
  return "?";
}

const char* JobStatusName(JobStatus status) {
  switch (status) {
    case JobStatus::kQueued:
      return "queued";
    case JobStatus::kRunning:
      return "running";
    case JobStatus::kDone:
      return "done";
    case JobStatus::kFailed:
      return "failed";
    case JobStatus::kCancelled:
      return "cancelled";
  }
  return "?";
}

JobRunner::JobRunner(SessionStore& store, int threads) : store_(store) {
  if (threads < 1) Fail(ErrorCode::kInvalidArgument, "job thread budget must be >= 1");
  for (int i = 0; i < threads; ++i) workers_.emplace_back([this] { WorkerLoop(); });
}

JobRunner::~JobRunner() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
    for (auto& [id, job] : jobs_) job->cancel_requested = true;
  }
  wake_.notify_all();
  for (auto& t : workers_) t.join();
}

std::shared_ptr<Job> JobRunner::Submit(const std::string& session_id,
                                       JobRequest request) {
  request.config.Validate();
  auto slot = store_.Find(session_id);
  Pending pending;
  std::lock_guard<std::mutex> slot_lock(slot->mu);
  const Session& s = slot->session;
  if (!slot->active_job.empty()) {
    Fail(ErrorCode::kConflict,
         "session " + session_id + " already runs job " + slot->active_job);
  }
  pending.code = s.code;
  pending.start = s.latent();
  pending.mask = request.mask.empty() ? RegionMask::Full(s.code.width, s.code.height)
                                      : s.Mask(request.mask);
  // Snapshots, so later uploads do not change a running job.
  pending.resolver.image = [images = s.images](const std::string& name) {
    auto it = images.find(name);
    if (it == images.end()) Fail(ErrorCode::kNotFound, "no image named '" + name + "'");
    return it->second;
  };
  pending.resolver.mask = [masks = s.masks](const std::string& name) {
    auto it = masks.find(name);
    if (it == masks.end()) Fail(ErrorCode::kNotFound, "no mask named '" + name + "'");
    return it->second;
  };

  TrainableBlocks(pending.code, pending.mask);
  int total = request.config.steps;
  switch (request.kind) {
    case JobKind::kOptimize: {
      // Binding reports unknown resources and bad classes before queueing.
      const PixelImage x0 = Reconstruct(pending.code, pending.start).pixels;
      ObjectiveProgram(pending.code, x0, pending.mask, request.tools, pending.resolver);
      break;
    }
    case JobKind::kExploreClasses: {
      std::shared_ptr<const ClassifierHook> hook;
      try {
        hook = FindClassifier(request.hook);
      } catch (const Error& e) {
        Fail(ErrorCode::kInvalidArgument, e.what());
      }
      for (int c : request.classes) {
        if (c < 0 || c >= hook->class_count()) {
          Fail(ErrorCode::kInvalidArgument, "class index out of range");
        }
      }
      std::vector<int> unique = request.classes;
      std::sort(unique.begin(), unique.end());
      unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
      total *= unique.empty() ? hook->class_count() : static_cast<int>(unique.size());
      break;
    }
    case JobKind::kDiverse:
      if (request.count < 2) Fail(ErrorCode::kInvalidArgument, "diversity needs count >= 2");
      if (!(request.proximity >= 0.0)) {
        Fail(ErrorCode::kInvalidArgument, "proximity must be >= 0");
      }
      break;
  }

  auto job = std::make_shared<Job>();
  job->session_id = session_id;
  job->kind = request.kind;
  job->total_steps = total;
  pending.request = std::move(request);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) Fail(ErrorCode::kConflict, "job runner is shutting down");
    job->id = "job-" + std::to_string(next_id_++);
    jobs_[job->id] = job;
    pending.job = job;
    queue_.push_back(std::move(pending));
  }
  slot->active_job = job->id;
  wake_.notify_one();
  return job;
}

std::shared_ptr<Job> JobRunner::Find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) Fail(ErrorCode::kNotFound, "no job '" + id + "'");
  return it->second;
}

bool JobRunner::Cancel(const std::string& id) {
  auto job = Find(id);
  std::lock_guard<std::mutex> lock(job->mu);
  if (job->terminal()) return false;
  job->cancel_requested = true;
  return true;
}

void JobRunner::Wait(const std::string& id) const {
  auto job = Find(id);
  std::unique_lock<std::mutex> lock(job->mu);
  job->finished.wait(lock, [&] { return job->terminal(); });
}

void JobRunner::WorkerLoop() {
  for (;;) {
    Pending pending;
    {
      std::unique_lock<std::mutex> lock(mu_);
      wake_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      pending = std::move(queue_.front());
      queue_.pop_front();
    }
    Run(pending);
  }
}

void JobRunner::Release(const std::string& session_id, const std::string& job_id) {
  try {
    auto slot = store_.Find(session_id);
    std::lock_guard<std::mutex> lock(slot->mu);
    if (slot->active_job == job_id) slot->active_job.clear();
  } catch (const Error&) {
    // Session deleted meanwhile.
  }
}

void JobRunner::Run(Pending& p) {
  Job& job = *p.job;
  {
    std::lock_guard<std::mutex> lock(job.mu);
    job.status = JobStatus::kRunning;
  }
  const ProgressCallback progress = [&job](int step, double value,
                                           const LatentField& latent) {
    std::lock_guard<std::mutex> lock(job.mu);
    job.step = step;
    job.values.push_back(value);
    if (step % kPreviewInterval == 0) job.preview = latent;
    return !job.cancel_requested.load();
  };

  JobStatus status = JobStatus::kDone;
  std::vector<JobResult> results;
  OptimizeTrace trace;
  std::string error;
  ErrorCode error_code = ErrorCode::kNumerical;
  const JobRequest& r = p.request;
  try {
    switch (r.kind) {
      case JobKind::kOptimize: {
        OptimizeResult out =
            Optimize(p.code, p.start, r.tools, p.mask, r.config, p.resolver, progress);
        trace = out.trace;
        results.push_back({"result", -1, out.trace.final_value, std::move(out.latent)});
        break;
      }
      case JobKind::kExploreClasses: {
        auto outcomes =
            ExploreClasses(p.code, p.start, p.mask, r.hook, r.classes, r.config, progress);
        for (auto& o : outcomes) {
          trace.cancelled = trace.cancelled || o.trace.cancelled;
          trace.final_value = o.trace.final_value;
          results.push_back(
              {"class " + std::to_string(o.cls), o.cls, o.score, std::move(o.latent)});
        }
        break;
      }
      case JobKind::kDiverse: {
        DiverseResult out = DiverseAlternatives(p.code, p.start, p.mask, r.count,
                                                r.proximity, r.config, progress);
        trace = out.trace;
        for (size_t i = 0; i < out.latents.size(); ++i) {
          results.push_back({"alternative " + std::to_string(i), -1, 0.0,
                             std::move(out.latents[i])});
        }
        break;
      }
    }
    if (trace.cancelled) status = JobStatus::kCancelled;
  } catch (const Error& e) {
    status = JobStatus::kFailed;
    error = e.what();
    error_code = e.code();
  } catch (const std::exception& e) {
    status = JobStatus::kFailed;
    error = e.what();
  }

  bool committed = false;
  if (status == JobStatus::kDone && r.kind == JobKind::kOptimize) {
    try {
      auto slot = store_.Find(job.session_id);
      std::lock_guard<std::mutex> lock(slot->mu);
      slot->session.Push(results[0].latent, r.descriptor);
      store_.Persist(slot->session);
      committed = true;
    } catch (const Error& e) {
      status = JobStatus::kFailed;
      error = std::string("commit failed: ") + e.what();
      error_code = e.code();
    }
  }
  Release(job.session_id, job.id);
  {
    std::lock_guard<std::mutex> lock(job.mu);
    job.status = status;
    job.error = error;
    job.error_code = error_code;
    job.final_value = trace.final_value;
    job.early_stopped = trace.early_stopped;
    if (status != JobStatus::kCancelled) job.results = std::move(results);
    job.committed = committed;
  }
  job.finished.notify_all();
}

}  // namespace ejpeg::service
