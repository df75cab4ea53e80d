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

#ifndef WARDFLOW_PLAN_H_
#define WARDFLOW_PLAN_H_

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wardflow/encoder.h"
#include "wardflow/knowledge.h"
#include "wardflow/patient_stream.h"
#include "wardflow/simulator.h"
#include "wardflow/solver.h"

namespace wardflow {

class Store;

// What the standing assignment becomes after a day without an allocation.
enum class AfterSkip {
  kKeepStanding,  // carry the last feasible assignment forward unchanged
  kClear,         // start the next day without a previous assignment
};

struct PlanConfig {
  SimulationOptions simulation;
  std::chrono::milliseconds budget{60'000};  // per day
  AfterSkip after_skip = AfterSkip::kKeepStanding;
};

struct PlanSummary {
  int total_days = 0;
  std::vector<int> infeasible_days;
  std::vector<int> budget_exceeded_days;
  int total_moves = 0;

  friend bool operator==(const PlanSummary&, const PlanSummary&) = default;
};

// Wall-clock seconds per phase. Not part of the persisted document.
struct PhaseTimes {
  double simulation = 0;
  double encoding = 0;
  double solving = 0;
};

struct AllocationPlan {
  std::string scenario_id;
  std::string ward_id;
  PlanConfig config;
  std::vector<DailyAllocation> days;  // day i + 1 at index i
  PlanSummary summary;
  PhaseTimes times;
};

// Called once per day with the problem handed to the solver and its outcome.
using DayObserver =
    std::function<void(const DailyAllocationProblem&, const DailyAllocation&)>;

// Simulates the scenario, then encodes and solves every day in order,
// threading the standing assignment from one feasible day to the next.
// Infeasible and over-budget days are recorded with an empty placement and
// do not change the standing assignment (unless AfterSkip::kClear).
AllocationPlan BuildPlan(const Scenario& scenario, const KnowledgeBase& kb,
                         const PlanConfig& config = {},
                         const DayObserver& observer = {});

// BuildPlan on stored inputs; the plan is persisted under the scenario id.
AllocationPlan RunPlan(Store& store, const std::string& scenario_id,
                       const PlanConfig& config = {});

// Stable JSON document; byte-identical for identical plans.
std::string PlanToDocument(const AllocationPlan& plan);
AllocationPlan PlanFromDocument(std::string_view document);

struct PlacementChange {
  std::string patient_id;
  std::optional<std::string> room_a;
  std::optional<std::string> room_b;

  friend bool operator==(const PlacementChange&,
                         const PlacementChange&) = default;
};

struct DayDiff {
  int day = 1;
  std::optional<AllocationStatus> status_a;  // nullopt: day absent in plan
  std::optional<AllocationStatus> status_b;
  std::vector<PlacementChange> changes;

  friend bool operator==(const DayDiff&, const DayDiff&) = default;
};

struct PlanDiff {
  std::string scenario_a;
  std::string scenario_b;
  std::vector<DayDiff> days;  // only days that differ
  int move_delta = 0;         // b - a
  std::vector<int> infeasible_only_in_a;
  std::vector<int> infeasible_only_in_b;

  bool Empty() const {
    return days.empty() && move_delta == 0 && infeasible_only_in_a.empty() &&
           infeasible_only_in_b.empty();
  }
};

// Per-day placement differences. Plans that share no patient at all are
// rejected with kDisjointPlans unless `allow_disjoint` is set, in which case
// the full diff is returned.
PlanDiff DiffPlans(const AllocationPlan& a, const AllocationPlan& b,
                   bool allow_disjoint = false);
std::string DiffToDocument(const PlanDiff& diff);

}  // namespace wardflow

#endif  // WARDFLOW_PLAN_H_
