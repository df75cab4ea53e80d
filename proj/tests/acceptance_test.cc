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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "test_support.h"
#include "wardflow/error.h"
#include "wardflow/oracle.h"
#include "wardflow/plan.h"
#include "wardflow/service.h"
#include "wardflow/solver.h"
#include "wardflow/store.h"
#include "wardflow/validator.h"

namespace wardflow {
namespace {

using ::nlohmann::json;
using Assignment = std::map<std::string, std::string>;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

std::string Fmt(double seconds) {
  char text[32];
  std::snprintf(text, sizeof text, "%.2f s", seconds);
  return text;
}

KnowledgeBase LargeWard() {
  return LoadKnowledgeFile(
      std::filesystem::path(WARDFLOW_DATA_DIR) / "large_ward.kb", "large");
}

// Five rooms of the example ward, one per category plus spares, so every
// day stays within the oracle's enumeration bounds.
KnowledgeBase CompactWard() {
  std::istringstream in(testing::ReadFile(testing::ExampleWardPath()));
  std::string document;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("room ", 0) == 0 && line.find("R01 ") == std::string::npos &&
        line.find("R05 ") == std::string::npos &&
        line.find("R07 ") == std::string::npos &&
        line.find("R09 ") == std::string::npos &&
        line.find("R12 ") == std::string::npos) {
      continue;
    }
    document += line + "\n";
  }
  return LoadKnowledge(document, "compact");
}

Scenario Generated(const std::string& ward, const KnowledgeBase& kb,
                   int patients, int days, uint64_t seed) {
  GeneratorOptions options;
  options.scenario_id = ward + "-" + std::to_string(patients) + "x" +
                        std::to_string(days) + "-" + std::to_string(seed);
  options.ward_ref = ward;
  options.patients = patients;
  options.days = days;
  options.seed = seed;
  return GenerateScenario(kb, options);
}

// Tallies for a plan run under full checking.
struct PlanAudit {
  int64_t feasible_days = 0;
  int64_t violations = 0;
  int64_t chain_breaks = 0;
  int64_t oracle_checked = 0;
  std::vector<std::string> first_problems;

  void Note(const std::string& text) {
    if (first_problems.size() < 3) first_problems.push_back(text);
  }
};

// Builds a plan while checking every Feasible day with the validator (and
// against the oracle minimum when the day is small enough), and checking that
// each day's previous assignment is the standing map the skip policy implies.
AllocationPlan AuditedPlan(const Scenario& scenario, const KnowledgeBase& kb,
                           const PlanConfig& config, PlanAudit& audit) {
  Assignment standing;
  AllocationPlan plan = BuildPlan(
      scenario, kb, config,
      [&](const DailyAllocationProblem& problem, const DailyAllocation& day) {
        Assignment expected;
        for (const DailyPatient& patient : problem.patients) {
          const auto it = standing.find(patient.id);
          if (it != standing.end()) expected.insert(*it);
        }
        if (problem.previous_assignment != expected) {
          ++audit.chain_breaks;
          audit.Note(scenario.id + " day " + std::to_string(problem.day) +
                     ": previous assignment differs from standing map");
        }
        if (day.status == AllocationStatus::kFeasible) {
          ++audit.feasible_days;
          std::optional<int> minimum;
          if (problem.patients.size() <= 7 && problem.rooms.size() <= 5) {
            minimum = CountMoves(problem, OracleSolve(problem).assignment);
            ++audit.oracle_checked;
          }
          const auto found = ValidateAllocation(problem, day, minimum);
          audit.violations += static_cast<int64_t>(found.size());
          for (const std::string& v : found) {
            audit.Note(scenario.id + " day " + std::to_string(problem.day) +
                       ": " + v);
          }
          standing = day.assignment;
        } else {
          if (!day.assignment.empty()) {
            ++audit.violations;
            audit.Note(scenario.id + ": skipped day carries a placement");
          }
          if (config.after_skip == AfterSkip::kClear) standing.clear();
        }
      });
  return plan;
}

std::string Problems(const PlanAudit& audit) {
  std::string text;
  for (const std::string& p : audit.first_problems) text += "; " + p;
  return text;
}

// 1. Exact solver agrees with exhaustive enumeration.
Outcome OracleEquivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260101);
  constexpr int kInstances = 2000;
  int status_mismatch = 0;
  int move_mismatch = 0;
  int allocation_mismatch = 0;
  int feasible = 0;
  for (int i = 0; i < kInstances; ++i) {
    const DailyAllocationProblem problem =
        testing::RandomProblem(rng, testing::RandomInstanceOptions{});
    const DailyAllocation expected = OracleSolve(problem);
    DailyAllocation actual = Solve(Encode(problem));
    actual.day = expected.day;
    if (actual.status != expected.status) {
      ++status_mismatch;
      continue;
    }
    if (actual.status != AllocationStatus::kFeasible) continue;
    ++feasible;
    if (actual.moves.size() != expected.moves.size()) ++move_mismatch;
    if (actual != expected) ++allocation_mismatch;
  }
  const double elapsed = Seconds(start);
  std::ostringstream detail;
  detail << kInstances << " instances (" << feasible << " feasible): "
         << status_mismatch << " status, " << move_mismatch << " move-count, "
         << allocation_mismatch << " allocation disagreements in "
         << Fmt(elapsed);
  return {status_mismatch + move_mismatch + allocation_mismatch == 0 &&
              elapsed < 60,
          detail.str()};
}

// 2. Every Feasible day of every plan passes the independent validator.
Outcome AllocationInvariants() {
  const auto start = std::chrono::steady_clock::now();
  const KnowledgeBase example = testing::ExampleWard();
  const KnowledgeBase large = LargeWard();
  PlanAudit audit;
  int plans = 0;
  for (bool parallel : {false, true}) {
    for (AfterSkip skip : {AfterSkip::kKeepStanding, AfterSkip::kClear}) {
      PlanConfig config;
      config.simulation.parallel_tasks = parallel;
      config.after_skip = skip;
      for (uint64_t seed = 1; seed <= 5; ++seed) {
        AuditedPlan(Generated("example", example, 100, 30, seed), example,
                    config, audit);
        AuditedPlan(Generated("large", large, 200, 30, seed), large, config,
                    audit);
        plans += 2;
      }
      for (const char* fixture : {"mixed_week.csv", "overload_day.csv"}) {
        const Scenario scenario = ParsePatientCsv(
            testing::ReadFile(std::filesystem::path(WARDFLOW_FIXTURE_DIR) /
                              fixture),
            fixture, "example", &example);
        AuditedPlan(scenario, example, config, audit);
        ++plans;
      }
    }
  }
  // Sparse days on a compact ward, small enough for the oracle minimum.
  const KnowledgeBase compact = CompactWard();
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorOptions options;
    options.scenario_id = "sparse";
    options.ward_ref = "compact";
    options.patients = 12;
    options.days = 10;
    options.seed = seed;
    options.contagion_rate = 0.2;
    AuditedPlan(GenerateScenario(compact, options), compact, {}, audit);
    ++plans;
  }
  std::ostringstream detail;
  detail << plans << " plans, " << audit.feasible_days << " feasible days ("
         << audit.oracle_checked << " also checked against the oracle "
         << "minimum), " << audit.violations << " violations, "
         << audit.chain_breaks << " carried-assignment breaks in "
         << Fmt(Seconds(start)) << Problems(audit);
  return {audit.violations == 0 && audit.chain_breaks == 0 &&
              audit.feasible_days > 0,
          detail.str()};
}

// 3. 100 patients over 30 days: fast, valid, byte-identical on replay.
Outcome RealisticScale() {
  const KnowledgeBase kb = testing::ExampleWard();
  const Scenario scenario = Generated("example", kb, 100, 30, 1);
  PlanAudit audit;
  auto start = std::chrono::steady_clock::now();
  const AllocationPlan first = AuditedPlan(scenario, kb, {}, audit);
  const double first_secs = Seconds(start);
  start = std::chrono::steady_clock::now();
  const AllocationPlan second = BuildPlan(scenario, kb);
  const double second_secs = Seconds(start);
  const bool identical = PlanToDocument(first) == PlanToDocument(second);
  std::ostringstream detail;
  detail << first.summary.total_days << " days, "
         << first.summary.total_moves << " moves, "
         << first.summary.infeasible_days.size() << " infeasible; runs took "
         << Fmt(first_secs) << " (audited) and " << Fmt(second_secs)
         << "; documents " << (identical ? "identical" : "DIFFER") << "; "
         << audit.violations << " violations" << Problems(audit);
  return {identical && audit.violations == 0 && audit.chain_breaks == 0 &&
              first_secs < 300 && second_secs < 300,
          detail.str()};
}

// 4. 500 patients over 60 days with the default 60 s per-day budget.
Outcome ScalingSmoke() {
  const auto start = std::chrono::steady_clock::now();
  PlanAudit audit;
  std::ostringstream detail;
  bool reported = true;
  int skipped_total = 0;
  for (const auto& [ward, kb] :
       std::vector<std::pair<std::string, KnowledgeBase>>{
           {"example", testing::ExampleWard()}, {"large", LargeWard()}}) {
    const auto run_start = std::chrono::steady_clock::now();
    const Scenario scenario = Generated(ward, kb, 500, 60, 1);
    PlanConfig config;
    config.budget = std::chrono::seconds(60);
    const AllocationPlan plan = AuditedPlan(scenario, kb, config, audit);
    std::vector<int> skipped;
    for (const DailyAllocation& day : plan.days) {
      if (day.status != AllocationStatus::kFeasible) skipped.push_back(day.day);
    }
    std::vector<int> listed = plan.summary.infeasible_days;
    listed.insert(listed.end(), plan.summary.budget_exceeded_days.begin(),
                  plan.summary.budget_exceeded_days.end());
    std::sort(listed.begin(), listed.end());
    reported = reported && listed == skipped;
    skipped_total += static_cast<int>(skipped.size());
    detail << ward << " ward: " << plan.summary.total_days << " days, "
           << plan.summary.infeasible_days.size() << " infeasible, "
           << plan.summary.budget_exceeded_days.size() << " over budget, "
           << plan.summary.total_moves << " moves in "
           << Fmt(Seconds(run_start)) << "; ";
  }
  const double elapsed = Seconds(start);
  detail << audit.chain_breaks << " carried-assignment breaks, "
         << audit.violations << " violations, skipped days "
         << (reported ? "all" : "NOT all") << " in summary" << Problems(audit);
  return {elapsed < 1800 && reported && audit.chain_breaks == 0 &&
              audit.violations == 0 && skipped_total > 0,
          detail.str()};
}

// 5. Timelines match a straight-line schedule and respect dependencies.
Outcome SimulatorConservation() {
  const auto start = std::chrono::steady_clock::now();
  const KnowledgeBase kb = testing::ExampleWard();
  const Scenario scenario = Generated("example", kb, 100, 30, 1);
  int length_mismatch = 0;
  int level_mismatch = 0;
  int order_violations = 0;
  for (bool parallel : {false, true}) {
    const BedNeedTimeline timeline = Simulate(scenario, kb, {parallel});
    std::map<std::string, std::vector<int>> levels;
    std::map<std::string, int> first_day;
    for (int day = 1; day <= timeline.last_day(); ++day) {
      for (const BedNeed& need : timeline.On(day)) {
        levels[need.patient_id].push_back(need.category.level);
        first_day.emplace(need.patient_id, day);
      }
    }
    for (const PatientRecord& patient : scenario.patients) {
      const Treatment& treatment = kb.TreatmentFor(patient.diagnosis);
      const std::vector<int> reference =
          testing::ReferenceNeedLevels(treatment, parallel);
      const std::vector<int>& seen = levels[patient.id];
      if (seen.size() != reference.size() ||
          first_day[patient.id] != patient.arrival_day) {
        ++length_mismatch;
      } else if (seen != reference) {
        ++level_mismatch;
      }
      const auto executed = testing::ExecutionDays(patient, kb, parallel);
      for (const Dependency& dep : treatment.dependencies) {
        if (executed.at(dep.before).back() >= executed.at(dep.after).front()) {
          ++order_violations;
        }
      }
    }
  }
  const double elapsed = Seconds(start);
  std::ostringstream detail;
  detail << scenario.patients.size() << " patients under both task policies: "
         << length_mismatch << " length, " << level_mismatch << " category, "
         << order_violations << " dependency-order mismatches in "
         << Fmt(elapsed);
  return {length_mismatch + level_mismatch + order_violations == 0 &&
              elapsed < 10,
          detail.str()};
}

// 6. Encoding soundness by exhaustion.
Outcome EncoderSoundness() {
  const auto start = std::chrono::steady_clock::now();
  int64_t mismatches = 0;
  const int64_t instances = testing::ForEachSmallProblem(
      3, 2, 3, [&](const DailyAllocationProblem& problem) {
        mismatches += testing::SoundnessMismatches(problem);
      });
  const double elapsed = Seconds(start);
  std::ostringstream detail;
  detail << instances << " instances (up to 3 patients, 2 rooms, capacity "
         << "1-3), every valuation enumerated: " << mismatches
         << " disagreements in " << Fmt(elapsed);
  return {mismatches == 0 && elapsed < 60, detail.str()};
}

// 7. Plans fetched through the HTTP job flow equal direct driver runs.
Outcome ApiEquivalence() {
  const auto start = std::chrono::steady_clock::now();
  Store store(":memory:");
  store.PutWard("example", testing::ReadFile(testing::ExampleWardPath()));
  store.PutWard("large", testing::ReadFile(std::filesystem::path(
                             WARDFLOW_DATA_DIR) / "large_ward.kb"));
  PlannerService service(store, ServiceOptions{"127.0.0.1", 0, {}});
  httplib::Client client("127.0.0.1", service.Start());
  client.set_read_timeout(600, 0);

  struct Fixture {
    std::string id;
    std::function<httplib::Result()> create;
    json plan_body;
    PlanConfig config;
  };
  const auto csv = [&](const std::string& id, const std::string& file) {
    return [&client, id, file] {
      return client.Post(
          "/scenarios?id=" + id + "&ward=example",
          testing::ReadFile(std::filesystem::path(WARDFLOW_FIXTURE_DIR) / file),
          "text/csv");
    };
  };
  const auto generate = [&](const std::string& id, const std::string& ward,
                            int patients, int days, int seed) {
    return [&client, id, ward, patients, days, seed] {
      return client.Post("/scenarios/" + id + "/generate",
                         json{{"ward", ward},
                              {"patients", patients},
                              {"days", days},
                              {"seed", seed}}
                             .dump(),
                         "application/json");
    };
  };
  PlanConfig parallel;
  parallel.simulation.parallel_tasks = true;
  PlanConfig clear;
  clear.after_skip = AfterSkip::kClear;
  std::vector<Fixture> fixtures = {
      {"mixed-week", csv("mixed-week", "mixed_week.csv"), nullptr, {}},
      {"overload-day", csv("overload-day", "overload_day.csv"),
       {{"after_skip", "keep"}}, {}},
      {"gen-parallel", generate("gen-parallel", "example", 100, 30, 1),
       {{"parallel_tasks", true}}, parallel},
      {"gen-clear", generate("gen-clear", "example", 100, 30, 2),
       {{"after_skip", "clear"}}, clear},
      {"gen-large", generate("gen-large", "large", 500, 60, 1), nullptr, {}},
  };

  int identical = 0;
  std::string problems;
  for (const Fixture& fixture : fixtures) {
    const auto created = fixture.create();
    if (!created || created->status != 201) {
      problems += "; " + fixture.id + ": create failed";
      continue;
    }
    const auto started = client.Post(
        "/scenarios/" + fixture.id + "/plan",
        fixture.plan_body.is_null() ? "" : fixture.plan_body.dump(),
        "application/json");
    if (!started || started->status != 202) {
      problems += "; " + fixture.id + ": plan request failed";
      continue;
    }
    const std::string job = json::parse(started->body).at("job_id");
    json status;
    do {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      status = json::parse(client.Get("/jobs/" + job)->body);
    } while (status.at("status") == "running");
    const auto stored = client.Get("/plans/" + fixture.id);
    const Scenario scenario = store.ReadScenario(fixture.id);
    const std::string direct = PlanToDocument(
        BuildPlan(scenario, store.GetWard(scenario.ward_ref), fixture.config));
    if (status.at("status") == "done" && stored && stored->body == direct &&
        status.at("plan") == json::parse(direct)) {
      ++identical;
    } else {
      problems += "; " + fixture.id + ": API plan differs";
    }
  }
  service.Stop();
  std::ostringstream detail;
  detail << identical << "/" << fixtures.size()
         << " fixture plans byte-identical to direct runs in "
         << Fmt(Seconds(start)) << problems;
  return {identical == static_cast<int>(fixtures.size()), detail.str()};
}

}  // namespace
}  // namespace wardflow

int main() {
  using wardflow::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>>
      criteria = {
          {"oracle equivalence", wardflow::OracleEquivalence},
          {"allocation invariants", wardflow::AllocationInvariants},
          {"100x30 scale and replay", wardflow::RealisticScale},
          {"500x60 scaling smoke", wardflow::ScalingSmoke},
          {"simulator conservation", wardflow::SimulatorConservation},
          {"encoder soundness", wardflow::EncoderSoundness},
          {"API equivalence", wardflow::ApiEquivalence},
      };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " " << i + 1 << " "
              << criteria[i].first << ": " << outcome.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
