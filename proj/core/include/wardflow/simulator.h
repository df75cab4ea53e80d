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

#ifndef WARDFLOW_SIMULATOR_H_
#define WARDFLOW_SIMULATOR_H_

#include <set>
#include <string>
#include <vector>

#include "wardflow/knowledge.h"
#include "wardflow/patient_stream.h"

namespace wardflow {

struct PackageTask {
  std::string task_id;
  int remaining_days = 1;
  Category required_category;

  friend bool operator==(const PackageTask&, const PackageTask&) = default;
};

// One patient's ongoing treatment: the tasks still to run plus the DAG.
struct Package {
  PatientRecord patient;
  std::vector<PackageTask> remaining;  // ordered by task id
  std::set<std::string> completed;
  std::vector<Dependency> dependencies;

  bool Empty() const { return remaining.empty(); }

  friend bool operator==(const Package&, const Package&) = default;
};

// All treatment tasks pending, none completed. Throws kUnknownDiagnosis.
Package MakePackage(const PatientRecord& patient, const KnowledgeBase& kb);

// Remaining tasks whose predecessors have all completed, by task id.
std::vector<std::string> ActiveTasks(const Package& package);

// A patient's bed requirement on one day: the strictest category among the
// tasks executing that day.
struct BedNeed {
  int day = 1;
  std::string patient_id;
  Category category;
  Gender gender = Gender::kMale;
  bool contagious = false;

  friend bool operator==(const BedNeed&, const BedNeed&) = default;
};

struct SimulationOptions {
  // false: each package executes only its first active task (smallest id).
  // true: every active task executes concurrently.
  bool parallel_tasks = false;
};

struct DayStep {
  std::vector<Package> packages;  // survivors, ordered by patient id
  std::vector<BedNeed> needs;     // ordered by patient id
};

// Advances one day: admits the day's arrivals (when day <= horizon), records a
// need per package, decrements executing tasks, completes those reaching zero
// and drops drained packages. Completed tasks release successors the next day.
DayStep StepDay(std::vector<Package> packages, int day,
                const Scenario& scenario, const KnowledgeBase& kb,
                const SimulationOptions& options = {});

// Day-indexed bed needs, day 1 through the last day with a live package.
class BedNeedTimeline {
 public:
  BedNeedTimeline() = default;
  explicit BedNeedTimeline(std::vector<std::vector<BedNeed>> days)
      : days_(std::move(days)) {}

  int last_day() const { return static_cast<int>(days_.size()); }
  bool empty() const { return days_.empty(); }
  // Needs on `day`, or an empty list outside [1, last_day()].
  const std::vector<BedNeed>& On(int day) const;

  friend bool operator==(const BedNeedTimeline&,
                         const BedNeedTimeline&) = default;

 private:
  std::vector<std::vector<BedNeed>> days_;
};

// Runs StepDay from day 1 until every package has drained, which can be past
// the scenario horizon.
BedNeedTimeline Simulate(const Scenario& scenario, const KnowledgeBase& kb,
                         const SimulationOptions& options = {});

// day,patient_id,category,gender,contagious
std::string TimelineToCsv(const BedNeedTimeline& timeline);

}  // namespace wardflow

#endif  // WARDFLOW_SIMULATOR_H_
