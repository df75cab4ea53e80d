// Copyright 2026 The Wardflow Authors
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

#ifndef WARDFLOW_SERVICE_H_
#define WARDFLOW_SERVICE_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "wardflow/plan.h"
#include "wardflow/store.h"

namespace httplib {
class Server;
}

namespace wardflow {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  PlanConfig default_config;
};

// HTTP front end over a Store.
//
//   GET/PUT             /wards/{id}               knowledge document
//   POST/GET            /scenarios                create (JSON or CSV) / list
//   GET/PUT/DELETE      /scenarios/{id}
//   POST                /scenarios/{id}/plan      start a plan job -> 202
//   POST                /scenarios/{id}/generate  synthetic scenario
//   GET                 /jobs/{id}
//   GET                 /plans/{id}
//   GET                 /plans/{a}/diff/{b}
//
// Errors are JSON {"code", "message"}. Mutating requests carrying an
// Idempotency-Key header are answered from cache on retry.
class PlannerService {
 public:
  PlannerService(Store& store, ServiceOptions options);
  ~PlannerService();

  PlannerService(const PlannerService&) = delete;
  PlannerService& operator=(const PlannerService&) = delete;

  // Binds and serves on a background thread. Returns the bound port.
  int Start();
  // Binds and serves on the calling thread until Stop().
  void Run();
  // Stops listening and waits for running plan jobs.
  void Stop();

 private:
  struct Job {
    std::string id;
    std::string scenario_id;
    std::string state = "running";  // running | done | failed
    std::string plan_document;
    PlanSummary summary;
    PhaseTimes times;
    std::string error_code;
    std::string error_message;
  };

  static Job NewJob(const std::string& id, const std::string& scenario_id);
  void Routes();
  std::string StartJob(const std::string& scenario_id, const PlanConfig& config);
  std::string JobDocument(const Job& job) const;

  Store& store_;
  ServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread listener_;

  mutable std::mutex jobs_mutex_;
  std::map<std::string, Job> jobs_;
  std::map<std::string, std::string> running_by_scenario_;
  std::vector<std::thread> workers_;
  int next_job_ = 1;

  std::mutex idempotency_mutex_;
  struct CachedResponse {
    int status;
    std::string body;
    std::string content_type;
  };
  std::map<std::string, CachedResponse> idempotent_;
};

}  // namespace wardflow

#endif  // WARDFLOW_SERVICE_H_
