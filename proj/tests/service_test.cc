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

#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "test_support.h"

namespace wardflow {
namespace {

using ::nlohmann::json;
using ::wardflow::testing::ExampleWardPath;
using ::wardflow::testing::ReadFile;

constexpr const char* kJson = "application/json";

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    service_ = std::make_unique<PlannerService>(
        store_, ServiceOptions{"127.0.0.1", 0, {}});
    const int port = service_->Start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port);
    client_->set_read_timeout(120, 0);
    const auto res =
        client_->Put("/wards/example", ReadFile(ExampleWardPath()), "text/plain");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200);
  }

  void TearDown() override { service_->Stop(); }

  httplib::Result Generate(const std::string& id, int patients, int days,
                           uint64_t seed) {
    return client_->Post("/scenarios/" + id + "/generate",
                         json{{"ward", "example"},
                              {"patients", patients},
                              {"days", days},
                              {"seed", seed}}
                             .dump(),
                         kJson);
  }

  std::string StartPlan(const std::string& id, const json& body = {}) {
    const auto res = client_->Post("/scenarios/" + id + "/plan",
                                   body.is_null() ? "" : body.dump(), kJson);
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 202) << res->body;
    return json::parse(res->body).at("job_id").get<std::string>();
  }

  json AwaitJob(const std::string& job) {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::minutes(2);
    while (std::chrono::steady_clock::now() < deadline) {
      const auto res = client_->Get("/jobs/" + job);
      EXPECT_TRUE(res);
      const json doc = json::parse(res->body);
      if (doc.at("status") != "running") return doc;
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    ADD_FAILURE() << "job " << job << " did not finish";
    return {};
  }

  static std::string ErrorCodeOf(const httplib::Result& res) {
    return json::parse(res->body).at("code").get<std::string>();
  }

  std::string DirectPlan(const std::string& id, PlanConfig config = {}) {
    const Scenario scenario = store_.ReadScenario(id);
    return PlanToDocument(
        BuildPlan(scenario, store_.GetWard(scenario.ward_ref), config));
  }

  Store store_{":memory:"};
  std::unique_ptr<PlannerService> service_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServiceTest, WardRoundTrip) {
  const auto res = client_->Get("/wards/example");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(LoadKnowledge(res->body, "example").ward().rooms.size(), 13u);
}

TEST_F(ServiceTest, MissingWardIs404) {
  const auto res = client_->Get("/wards/nowhere");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(ErrorCodeOf(res), "ward_not_found");
}

TEST_F(ServiceTest, CyclicWardIs422) {
  const auto res = client_->Put("/wards/bad",
                                "categories: Standard=0\n"
                                "room R1 capacity=1 category=Standard\n"
                                "treatment loop:\n"
                                "  task a duration=1d category=Standard\n"
                                "  task b duration=1d category=Standard\n"
                                "  dep a -> b\n"
                                "  dep b -> a\n",
                                "text/plain");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  EXPECT_NE(json::parse(res->body).at("message").get<std::string>().find(
                "a -> b -> a"),
            std::string::npos);
}

TEST_F(ServiceTest, ScenarioRoundTrip) {
  Scenario scenario;
  scenario.id = "s1";
  scenario.ward_ref = "example";
  scenario.horizon_days = 2;
  scenario.patients = {{"P1", Gender::kFemale, false, "pneumonia", 1},
                       {"P2", Gender::kMale, true, "chest-pain", 2}};
  const auto created =
      client_->Post("/scenarios", ScenarioToJson(scenario), kJson);
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201) << created->body;
  const auto fetched = client_->Get("/scenarios/s1");
  ASSERT_TRUE(fetched);
  EXPECT_EQ(fetched->body, created->body);
  Scenario back = ScenarioFromJson(fetched->body);
  EXPECT_EQ(back.patients, scenario.patients);
  EXPECT_EQ(back.horizon_days, 2);

  const auto list = client_->Get("/scenarios");
  EXPECT_EQ(json::parse(list->body), json::array({"s1"}));
}

TEST_F(ServiceTest, MalformedBodyIs400) {
  const auto res = client_->Post("/scenarios", "{not json", kJson);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST_F(ServiceTest, UnknownDiagnosisIs422) {
  Scenario scenario;
  scenario.id = "s1";
  scenario.ward_ref = "example";
  scenario.patients = {{"P1", Gender::kFemale, false, "hiccups", 1}};
  const auto res = client_->Post("/scenarios", ScenarioToJson(scenario), kJson);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(ErrorCodeOf(res), "unknown_diagnosis");
}

TEST_F(ServiceTest, CsvUpload) {
  const auto res = client_->Post(
      "/scenarios?id=csv&ward=example&horizon=3",
      "patient_id,gender,contagious,diagnosis,arrival_day\n"
      "P1,M,false,appendicitis,1\n"
      "P2,F,true,pneumonia,3\n",
      "text/csv");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201) << res->body;
  const Scenario scenario = store_.ReadScenario("csv");
  EXPECT_EQ(scenario.patients.size(), 2u);
  EXPECT_EQ(scenario.horizon_days, 3);
}

TEST_F(ServiceTest, StaleUpdateIs409) {
  ASSERT_EQ(Generate("g", 5, 3, 1)->status, 201);
  Scenario scenario = ScenarioFromJson(client_->Get("/scenarios/g")->body);
  const auto first =
      client_->Put("/scenarios/g", ScenarioToJson(scenario), kJson);
  ASSERT_EQ(first->status, 200) << first->body;
  const auto stale =
      client_->Put("/scenarios/g", ScenarioToJson(scenario), kJson);
  EXPECT_EQ(stale->status, 409);
  EXPECT_EQ(ErrorCodeOf(stale), "version_conflict");
}

TEST_F(ServiceTest, IdempotentRetry) {
  Scenario scenario;
  scenario.id = "once";
  scenario.ward_ref = "example";
  const httplib::Headers key = {{"Idempotency-Key", "abc-1"}};
  const auto first =
      client_->Post("/scenarios", key, ScenarioToJson(scenario), kJson);
  const auto retry =
      client_->Post("/scenarios", key, ScenarioToJson(scenario), kJson);
  ASSERT_TRUE(first && retry);
  EXPECT_EQ(first->status, 201);
  EXPECT_EQ(retry->status, 201);
  EXPECT_EQ(retry->body, first->body);
  const auto unkeyed =
      client_->Post("/scenarios", ScenarioToJson(scenario), kJson);
  EXPECT_EQ(unkeyed->status, 409);
}

TEST_F(ServiceTest, DeleteRemovesScenarioAndPlan) {
  ASSERT_EQ(Generate("d", 5, 3, 1)->status, 201);
  AwaitJob(StartPlan("d"));
  EXPECT_EQ(client_->Get("/plans/d")->status, 200);
  EXPECT_EQ(client_->Delete("/scenarios/d")->status, 204);
  EXPECT_EQ(client_->Get("/scenarios/d")->status, 404);
  const auto plan = client_->Get("/plans/d");
  EXPECT_EQ(plan->status, 404);
  EXPECT_EQ(ErrorCodeOf(plan), "plan_not_found");
}

TEST_F(ServiceTest, PlanJobMatchesDirectRun) {
  ASSERT_EQ(Generate("what-if", 40, 10, 7)->status, 201);
  const std::string job = StartPlan("what-if");
  const json done = AwaitJob(job);
  ASSERT_EQ(done.at("status"), "done") << done.dump();
  EXPECT_EQ(done.at("plan_id"), "what-if");
  const std::string direct = DirectPlan("what-if");
  EXPECT_EQ(client_->Get("/plans/what-if")->body, direct);
  EXPECT_EQ(done.at("plan"), json::parse(direct));
  EXPECT_TRUE(done.at("times").contains("solving_secs"));
}

TEST_F(ServiceTest, PlanConfigIsHonoured) {
  ASSERT_EQ(Generate("cfg", 30, 8, 3)->status, 201);
  const json done = AwaitJob(
      StartPlan("cfg", {{"parallel_tasks", true}, {"after_skip", "clear"}}));
  ASSERT_EQ(done.at("status"), "done");
  PlanConfig config;
  config.simulation.parallel_tasks = true;
  config.after_skip = AfterSkip::kClear;
  EXPECT_EQ(client_->Get("/plans/cfg")->body, DirectPlan("cfg", config));

  const auto bad = client_->Post("/scenarios/cfg/plan",
                                 json{{"after_skip", "never"}}.dump(), kJson);
  EXPECT_EQ(bad->status, 422);
}

TEST_F(ServiceTest, BudgetExceededSurfacesAsWarning) {
  ASSERT_EQ(Generate("tight", 40, 10, 2)->status, 201);
  const json done = AwaitJob(StartPlan("tight", {{"budget_secs", 0}}));
  ASSERT_EQ(done.at("status"), "done");
  ASSERT_TRUE(done.contains("warning"));
  EXPECT_EQ(done.at("warning").at("code"), "budget_exceeded");
  EXPECT_EQ(done.at("warning").at("http_status"), 504);
}

TEST_F(ServiceTest, PlanForMissingScenarioIs404) {
  const auto res = client_->Post("/scenarios/ghost/plan", "", kJson);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(ErrorCodeOf(res), "scenario_not_found");
  EXPECT_EQ(client_->Get("/jobs/job-999")->status, 404);
}

TEST_F(ServiceTest, ConcurrentJobsMatchSerialRuns) {
  const std::vector<std::string> ids = {"c1", "c2", "c3", "c4"};
  for (size_t i = 0; i < ids.size(); ++i) {
    ASSERT_EQ(Generate(ids[i], 60, 15, 10 + i)->status, 201);
  }
  std::vector<std::string> jobs;
  for (const std::string& id : ids) jobs.push_back(StartPlan(id));
  std::set<std::string> distinct(jobs.begin(), jobs.end());
  EXPECT_EQ(distinct.size(), ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    ASSERT_EQ(AwaitJob(jobs[i]).at("status"), "done");
    EXPECT_EQ(client_->Get("/plans/" + ids[i])->body, DirectPlan(ids[i]));
  }
}

TEST_F(ServiceTest, DiffEndpoint) {
  ASSERT_EQ(Generate("a", 20, 5, 1)->status, 201);
  ASSERT_EQ(Generate("b", 20, 5, 2)->status, 201);
  AwaitJob(StartPlan("a"));
  AwaitJob(StartPlan("b"));
  const auto self = client_->Get("/plans/a/diff/a");
  ASSERT_EQ(self->status, 200);
  EXPECT_TRUE(json::parse(self->body).at("days").empty());

  // Generated ids coincide (P0001...), so these plans overlap.
  const auto ab = client_->Get("/plans/a/diff/b");
  EXPECT_EQ(ab->status, 200);
  EXPECT_EQ(client_->Get("/plans/a/diff/zzz")->status, 404);
}

TEST_F(ServiceTest, DisjointDiffNeedsFlag) {
  for (const auto& [id, patient] :
       std::vector<std::pair<std::string, std::string>>{{"x", "X1"},
                                                        {"y", "Y1"}}) {
    Scenario scenario;
    scenario.id = id;
    scenario.ward_ref = "example";
    scenario.patients = {{patient, Gender::kFemale, false, "pneumonia", 1}};
    ASSERT_EQ(
        client_->Post("/scenarios", ScenarioToJson(scenario), kJson)->status,
        201);
    AwaitJob(StartPlan(id));
  }
  const auto refused = client_->Get("/plans/x/diff/y");
  EXPECT_EQ(refused->status, 422);
  EXPECT_EQ(ErrorCodeOf(refused), "disjoint_plans");
  EXPECT_EQ(client_->Get("/plans/x/diff/y?allow_disjoint=true")->status, 200);
}

}  // namespace
}  // namespace wardflow
