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

#include "wardflow/plan.h"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "wardflow/error.h"
#include "wardflow/store.h"

namespace wardflow {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

AllocationStatus ParseStatus(const std::string& name) {
  for (AllocationStatus status :
       {AllocationStatus::kFeasible, AllocationStatus::kInfeasible,
        AllocationStatus::kBudgetExceeded}) {
    if (StatusName(status) == name) return status;
  }
  throw ParseError(0, "unknown day status '" + name + "'");
}

}  // namespace

AllocationPlan BuildPlan(const Scenario& scenario, const KnowledgeBase& kb,
                         const PlanConfig& config,
                         const DayObserver& observer) {
  AllocationPlan plan;
  plan.scenario_id = scenario.id;
  plan.ward_id = kb.ward().id;
  plan.config = config;

  auto start = Clock::now();
  const BedNeedTimeline timeline = Simulate(scenario, kb, config.simulation);
  plan.times.simulation = SecondsSince(start);

  std::map<std::string, std::string> standing;
  for (int day = 1; day <= timeline.last_day(); ++day) {
    start = Clock::now();
    const DailyAllocationProblem problem =
        MakeProblem(day, timeline.On(day), kb.ward(), standing);
    const ConstraintSystem system = Encode(problem);
    plan.times.encoding += SecondsSince(start);

    start = Clock::now();
    DailyAllocation allocation;
    try {
      allocation = Solve(system, SolveOptions{config.budget});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetExceeded) throw;
      allocation = DailyAllocation{};
      allocation.day = day;
      allocation.status = AllocationStatus::kBudgetExceeded;
    }
    plan.times.solving += SecondsSince(start);

    if (observer) observer(problem, allocation);
    switch (allocation.status) {
      case AllocationStatus::kFeasible:
        standing = allocation.assignment;
        plan.summary.total_moves += static_cast<int>(allocation.moves.size());
        break;
      case AllocationStatus::kInfeasible:
        plan.summary.infeasible_days.push_back(day);
        if (config.after_skip == AfterSkip::kClear) standing.clear();
        break;
      case AllocationStatus::kBudgetExceeded:
        plan.summary.budget_exceeded_days.push_back(day);
        if (config.after_skip == AfterSkip::kClear) standing.clear();
        break;
    }
    plan.days.push_back(std::move(allocation));
  }
  plan.summary.total_days = timeline.last_day();
  return plan;
}

AllocationPlan RunPlan(Store& store, const std::string& scenario_id,
                       const PlanConfig& config) {
  const Scenario scenario = store.ReadScenario(scenario_id);
  const KnowledgeBase kb = store.GetWard(scenario.ward_ref);
  AllocationPlan plan = BuildPlan(scenario, kb, config);
  store.PutPlan(scenario_id, scenario_id, PlanToDocument(plan));
  return plan;
}

std::string PlanToDocument(const AllocationPlan& plan) {
  json days = json::array();
  for (const DailyAllocation& day : plan.days) {
    json placements = json::array();
    for (const auto& [patient, room] : day.assignment) {
      placements.push_back({{"patient_id", patient},
                            {"room_id", room},
                            {"gender", day.room_gender.at(room)},
                            {"moved", day.moves.count(patient) > 0}});
    }
    days.push_back({{"day", day.day},
                    {"status", StatusName(day.status)},
                    {"moves", day.moves.size()},
                    {"placements", std::move(placements)}});
  }
  json doc = {
      {"scenario_id", plan.scenario_id},
      {"ward_id", plan.ward_id},
      {"config",
       {{"parallel_tasks", plan.config.simulation.parallel_tasks},
        {"budget_ms", plan.config.budget.count()},
        {"after_skip",
         plan.config.after_skip == AfterSkip::kClear ? "clear" : "keep"}}},
      {"days", std::move(days)},
      {"summary",
       {{"total_days", plan.summary.total_days},
        {"infeasible_days", plan.summary.infeasible_days},
        {"budget_exceeded_days", plan.summary.budget_exceeded_days},
        {"total_moves", plan.summary.total_moves}}}};
  return doc.dump(2) + "\n";
}

AllocationPlan PlanFromDocument(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("malformed plan document: ") + e.what());
  }
  try {
    AllocationPlan plan;
    plan.scenario_id = doc.at("scenario_id").get<std::string>();
    plan.ward_id = doc.at("ward_id").get<std::string>();
    const json& config = doc.at("config");
    plan.config.simulation.parallel_tasks =
        config.at("parallel_tasks").get<bool>();
    plan.config.budget =
        std::chrono::milliseconds(config.at("budget_ms").get<int64_t>());
    plan.config.after_skip = config.at("after_skip").get<std::string>() ==
                                     "clear"
                                 ? AfterSkip::kClear
                                 : AfterSkip::kKeepStanding;
    for (const json& entry : doc.at("days")) {
      DailyAllocation day;
      day.day = entry.at("day").get<int>();
      day.status = ParseStatus(entry.at("status").get<std::string>());
      for (const json& placement : entry.at("placements")) {
        const std::string patient = placement.at("patient_id");
        const std::string room = placement.at("room_id");
        day.assignment[patient] = room;
        day.room_gender[room] = placement.at("gender").get<std::string>();
        if (placement.at("moved").get<bool>()) day.moves.insert(patient);
      }
      plan.days.push_back(std::move(day));
    }
    const json& summary = doc.at("summary");
    plan.summary.total_days = summary.at("total_days").get<int>();
    plan.summary.infeasible_days =
        summary.at("infeasible_days").get<std::vector<int>>();
    plan.summary.budget_exceeded_days =
        summary.at("budget_exceeded_days").get<std::vector<int>>();
    plan.summary.total_moves = summary.at("total_moves").get<int>();
    return plan;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("invalid plan document: ") + e.what());
  }
}

PlanDiff DiffPlans(const AllocationPlan& a, const AllocationPlan& b,
                   bool allow_disjoint) {
  std::set<std::string> patients_a;
  std::set<std::string> patients_b;
  for (const DailyAllocation& day : a.days) {
    for (const auto& [patient, room] : day.assignment) patients_a.insert(patient);
  }
  for (const DailyAllocation& day : b.days) {
    for (const auto& [patient, room] : day.assignment) patients_b.insert(patient);
  }
  const bool shares_patient = std::any_of(
      patients_a.begin(), patients_a.end(),
      [&](const std::string& id) { return patients_b.count(id) > 0; });
  if (!shares_patient && !patients_a.empty() && !patients_b.empty() &&
      !allow_disjoint) {
    throw Error(ErrorCode::kDisjointPlans,
                "plans for " + a.scenario_id + " and " + b.scenario_id +
                    " share no patients");
  }

  PlanDiff diff;
  diff.scenario_a = a.scenario_id;
  diff.scenario_b = b.scenario_id;
  diff.move_delta = b.summary.total_moves - a.summary.total_moves;
  const size_t last = std::max(a.days.size(), b.days.size());
  const auto feasible = [](const std::optional<AllocationStatus>& status) {
    return status == AllocationStatus::kFeasible;
  };
  for (size_t i = 0; i < last; ++i) {
    const DailyAllocation* day_a = i < a.days.size() ? &a.days[i] : nullptr;
    const DailyAllocation* day_b = i < b.days.size() ? &b.days[i] : nullptr;
    DayDiff day;
    day.day = static_cast<int>(i) + 1;
    if (day_a) day.status_a = day_a->status;
    if (day_b) day.status_b = day_b->status;

    std::map<std::string, std::pair<std::optional<std::string>,
                                    std::optional<std::string>>>
        rooms;
    if (day_a) {
      for (const auto& [patient, room] : day_a->assignment) {
        rooms[patient].first = room;
      }
    }
    if (day_b) {
      for (const auto& [patient, room] : day_b->assignment) {
        rooms[patient].second = room;
      }
    }
    for (const auto& [patient, pair] : rooms) {
      if (pair.first != pair.second) {
        day.changes.push_back({patient, pair.first, pair.second});
      }
    }
    if (day_a && !feasible(day.status_a) && feasible(day.status_b)) {
      diff.infeasible_only_in_a.push_back(day.day);
    }
    if (day_b && !feasible(day.status_b) && feasible(day.status_a)) {
      diff.infeasible_only_in_b.push_back(day.day);
    }
    if (day.status_a != day.status_b || !day.changes.empty()) {
      diff.days.push_back(std::move(day));
    }
  }
  return diff;
}

std::string DiffToDocument(const PlanDiff& diff) {
  const auto status = [](const std::optional<AllocationStatus>& s) -> json {
    if (!s) return nullptr;
    return std::string(StatusName(*s));
  };
  const auto room = [](const std::optional<std::string>& r) -> json {
    if (!r) return nullptr;
    return *r;
  };
  json days = json::array();
  for (const DayDiff& day : diff.days) {
    json changes = json::array();
    for (const PlacementChange& change : day.changes) {
      changes.push_back({{"patient_id", change.patient_id},
                         {"room_a", room(change.room_a)},
                         {"room_b", room(change.room_b)}});
    }
    days.push_back({{"day", day.day},
                    {"status_a", status(day.status_a)},
                    {"status_b", status(day.status_b)},
                    {"changes", std::move(changes)}});
  }
  json doc = {{"scenario_a", diff.scenario_a},
              {"scenario_b", diff.scenario_b},
              {"move_delta", diff.move_delta},
              {"infeasible_only_in_a", diff.infeasible_only_in_a},
              {"infeasible_only_in_b", diff.infeasible_only_in_b},
              {"days", std::move(days)}};
  return doc.dump(2) + "\n";
}

}  // namespace wardflow
