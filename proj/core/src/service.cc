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

#include "wardflow/service.h"

#include "httplib.h"
#include "json.hpp"
#include "wardflow/error.h"

namespace wardflow {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kOutOfRange:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kVersionConflict:
      return 409;
    case ErrorCode::kBudgetExceeded:
      return 504;
    case ErrorCode::kValidation:
    case ErrorCode::kUnknownDiagnosis:
    case ErrorCode::kDuplicateId:
    case ErrorCode::kBoundExceeded:
    case ErrorCode::kDisjointPlans:
      return 422;
  }
  return 500;
}

void SendError(httplib::Response& res, int status, const std::string& code,
               const std::string& message) {
  res.status = status;
  res.set_content(json({{"code", code}, {"message", message}}).dump() + "\n",
                  kJson);
}

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

// Runs `body`, translating exceptions into error responses.
template <typename Fn>
void Guard(httplib::Response& res, Fn&& body) {
  try {
    body();
  } catch (const NotFoundError& e) {
    SendError(res, 404, e.kind() + "_not_found", e.what());
  } catch (const Error& e) {
    SendError(res, HttpStatus(e.code()), ErrorCodeName(e.code()), e.what());
  } catch (const json::exception& e) {
    SendError(res, 400, "parse_error", e.what());
  } catch (const std::exception& e) {
    SendError(res, 500, "internal", e.what());
  }
}

PlanConfig ConfigFromBody(const std::string& body, PlanConfig config) {
  if (body.empty()) return config;
  const json doc = json::parse(body);
  if (doc.contains("parallel_tasks")) {
    config.simulation.parallel_tasks = doc.at("parallel_tasks").get<bool>();
  }
  if (doc.contains("budget_secs")) {
    config.budget = std::chrono::milliseconds(
        static_cast<int64_t>(doc.at("budget_secs").get<double>() * 1000));
  }
  if (doc.contains("after_skip")) {
    const std::string policy = doc.at("after_skip").get<std::string>();
    if (policy != "keep" && policy != "clear") {
      throw Error(ErrorCode::kValidation, "after_skip must be keep or clear");
    }
    config.after_skip =
        policy == "clear" ? AfterSkip::kClear : AfterSkip::kKeepStanding;
  }
  return config;
}

}  // namespace

PlannerService::Job PlannerService::NewJob(const std::string& id,
                                           const std::string& scenario_id) {
  Job job;
  job.id = id;
  job.scenario_id = scenario_id;
  return job;
}

PlannerService::PlannerService(Store& store, ServiceOptions options)
    : store_(store),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  Routes();
}

PlannerService::~PlannerService() { Stop(); }

int PlannerService::Start() {
  int port = options_.port;
  if (port == 0) {
    port = server_->bind_to_any_port(options_.host);
  } else if (!server_->bind_to_port(options_.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw std::runtime_error("cannot bind " + options_.host + ":" +
                             std::to_string(options_.port));
  }
  listener_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void PlannerService::Run() {
  if (!server_->listen(options_.host, options_.port)) {
    throw std::runtime_error("cannot listen on " + options_.host + ":" +
                             std::to_string(options_.port));
  }
}

void PlannerService::Stop() {
  server_->stop();
  if (listener_.joinable()) listener_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(jobs_mutex_);
    workers.swap(workers_);
  }
  for (std::thread& worker : workers) worker.join();
}

std::string PlannerService::StartJob(const std::string& scenario_id,
                                     const PlanConfig& config) {
  store_.ReadScenario(scenario_id);
  std::lock_guard lock(jobs_mutex_);
  if (auto it = running_by_scenario_.find(scenario_id);
      it != running_by_scenario_.end()) {
    return it->second;
  }
  const std::string id = "job-" + std::to_string(next_job_++);
  jobs_[id] = NewJob(id, scenario_id);
  running_by_scenario_[scenario_id] = id;
  workers_.emplace_back([this, id, scenario_id, config] {
    Job result = NewJob(id, scenario_id);
    try {
      const AllocationPlan plan = RunPlan(store_, scenario_id, config);
      result.state = "done";
      result.plan_document = PlanToDocument(plan);
      result.summary = plan.summary;
      result.times = plan.times;
    } catch (const Error& e) {
      result.state = "failed";
      result.error_code = ErrorCodeName(e.code());
      result.error_message = e.what();
    } catch (const std::exception& e) {
      result.state = "failed";
      result.error_code = "internal";
      result.error_message = e.what();
    }
    std::lock_guard done_lock(jobs_mutex_);
    jobs_[id] = std::move(result);
    running_by_scenario_.erase(scenario_id);
  });
  return id;
}

std::string PlannerService::JobDocument(const Job& job) const {
  json doc = {{"id", job.id},
              {"scenario_id", job.scenario_id},
              {"status", job.state}};
  if (job.state == "done") {
    doc["plan_id"] = job.scenario_id;
    doc["plan"] = json::parse(job.plan_document);
    doc["times"] = {{"simulation_secs", job.times.simulation},
                    {"encoding_secs", job.times.encoding},
                    {"solving_secs", job.times.solving}};
    if (!job.summary.budget_exceeded_days.empty()) {
      doc["warning"] = {{"code", "budget_exceeded"},
                        {"http_status", 504},
                        {"days", job.summary.budget_exceeded_days}};
    }
  } else if (job.state == "failed") {
    doc["error"] = {{"code", job.error_code},
                    {"message", job.error_message}};
  }
  return doc.dump(2) + "\n";
}

void PlannerService::Routes() {
  httplib::Server& svr = *server_;

  // Answers retries of a keyed mutating request from cache.
  const auto idempotent = [this](auto handler) {
    return [this, handler](const httplib::Request& req,
                           httplib::Response& res) {
      const std::string key = req.get_header_value("Idempotency-Key");
      if (key.empty()) {
        handler(req, res);
        return;
      }
      const std::string cache_key = req.method + " " + req.path + " " + key;
      {
        std::lock_guard lock(idempotency_mutex_);
        if (auto it = idempotent_.find(cache_key); it != idempotent_.end()) {
          res.status = it->second.status;
          res.set_content(it->second.body, it->second.content_type);
          return;
        }
      }
      handler(req, res);
      std::lock_guard lock(idempotency_mutex_);
      idempotent_[cache_key] = {res.status, res.body,
                                res.get_header_value("Content-Type")};
    };
  };

  svr.Get(R"(/wards/([^/]+))", [this](const httplib::Request& req,
                                      httplib::Response& res) {
    Guard(res, [&] {
      res.set_content(store_.GetWardDocument(req.matches[1]), "text/plain");
    });
  });
  svr.Put(R"(/wards/([^/]+))",
          idempotent([this](const httplib::Request& req,
                            httplib::Response& res) {
            Guard(res, [&] {
              const std::string id = req.matches[1];
              const int64_t version = store_.PutWard(id, req.body);
              SendJson(res, 200, {{"id", id}, {"version", version}});
            });
          }));

  svr.Get("/scenarios", [this](const httplib::Request&,
                               httplib::Response& res) {
    Guard(res, [&] { SendJson(res, 200, store_.ListScenarios()); });
  });
  svr.Post("/scenarios",
           idempotent([this](const httplib::Request& req,
                             httplib::Response& res) {
             Guard(res, [&] {
               Scenario scenario;
               const std::string type = req.get_header_value("Content-Type");
               if (type.rfind("text/csv", 0) == 0) {
                 const std::string id = req.get_param_value("id");
                 const std::string ward = req.get_param_value("ward");
                 if (id.empty() || ward.empty()) {
                   throw Error(ErrorCode::kParse,
                               "CSV upload needs ?id=<scenario>&ward=<ward>");
                 }
                 std::optional<int> horizon;
                 if (req.has_param("horizon")) {
                   horizon = std::stoi(req.get_param_value("horizon"));
                 }
                 const KnowledgeBase kb = store_.GetWard(ward);
                 scenario = ParsePatientCsv(req.body, id, ward, &kb, horizon);
               } else {
                 scenario = ScenarioFromJson(req.body);
               }
               scenario = store_.CreateScenario(std::move(scenario));
               res.status = 201;
               res.set_content(ScenarioToJson(scenario), kJson);
             });
           }));
  svr.Get(R"(/scenarios/([^/]+))", [this](const httplib::Request& req,
                                          httplib::Response& res) {
    Guard(res, [&] {
      res.set_content(ScenarioToJson(store_.ReadScenario(req.matches[1])),
                      kJson);
    });
  });
  svr.Put(R"(/scenarios/([^/]+))",
          idempotent([this](const httplib::Request& req,
                            httplib::Response& res) {
            Guard(res, [&] {
              Scenario scenario = ScenarioFromJson(req.body);
              if (scenario.id != req.matches[1].str()) {
                throw Error(ErrorCode::kValidation,
                            "body id does not match the path");
              }
              scenario = store_.UpdateScenario(std::move(scenario));
              res.set_content(ScenarioToJson(scenario), kJson);
            });
          }));
  svr.Delete(R"(/scenarios/([^/]+))",
             idempotent([this](const httplib::Request& req,
                               httplib::Response& res) {
               Guard(res, [&] {
                 store_.DeleteScenario(req.matches[1]);
                 res.status = 204;
               });
             }));

  svr.Post(R"(/scenarios/([^/]+)/plan)",
           idempotent([this](const httplib::Request& req,
                             httplib::Response& res) {
             Guard(res, [&] {
               const PlanConfig config =
                   ConfigFromBody(req.body, options_.default_config);
               const std::string job = StartJob(req.matches[1], config);
               res.set_header("Location", "/jobs/" + job);
               SendJson(res, 202, {{"job_id", job}});
             });
           }));
  svr.Post(R"(/scenarios/([^/]+)/generate)",
           idempotent([this](const httplib::Request& req,
                             httplib::Response& res) {
             Guard(res, [&] {
               const json body = req.body.empty() ? json::object()
                                                  : json::parse(req.body);
               GeneratorOptions options;
               options.scenario_id = req.matches[1];
               options.ward_ref = body.value("ward", options.ward_ref);
               options.patients = body.value("patients", options.patients);
               options.days = body.value("days", options.days);
               options.seed = body.value("seed", options.seed);
               options.contagion_rate =
                   body.value("contagion_rate", options.contagion_rate);
               const KnowledgeBase kb = store_.GetWard(options.ward_ref);
               Scenario scenario =
                   store_.PutScenario(GenerateScenario(kb, options));
               res.status = 201;
               res.set_content(ScenarioToJson(scenario), kJson);
             });
           }));

  svr.Get(R"(/jobs/([^/]+))", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    Guard(res, [&] {
      std::lock_guard lock(jobs_mutex_);
      const auto it = jobs_.find(req.matches[1]);
      if (it == jobs_.end()) throw NotFoundError("job", req.matches[1]);
      res.set_content(JobDocument(it->second), kJson);
    });
  });
  svr.Get(R"(/plans/([^/]+))", [this](const httplib::Request& req,
                                      httplib::Response& res) {
    Guard(res, [&] { res.set_content(store_.GetPlan(req.matches[1]), kJson); });
  });
  svr.Get(R"(/plans/([^/]+)/diff/([^/]+))",
          [this](const httplib::Request& req, httplib::Response& res) {
            Guard(res, [&] {
              const AllocationPlan a =
                  PlanFromDocument(store_.GetPlan(req.matches[1]));
              const AllocationPlan b =
                  PlanFromDocument(store_.GetPlan(req.matches[2]));
              const bool allow = req.get_param_value("allow_disjoint") == "true";
              res.set_content(DiffToDocument(DiffPlans(a, b, allow)), kJson);
            });
          });
}

}  // namespace wardflow
