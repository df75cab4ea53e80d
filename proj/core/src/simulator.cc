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

#include "wardflow/simulator.h"

#include <algorithm>
#include <sstream>

#include "wardflow/error.h"

namespace wardflow {
namespace {

bool ByPatientId(const Package& a, const Package& b) {
  return a.patient.id < b.patient.id;
}

}  // namespace

Package MakePackage(const PatientRecord& patient, const KnowledgeBase& kb) {
  const Treatment& treatment = kb.TreatmentFor(patient.diagnosis);
  Package package;
  package.patient = patient;
  package.dependencies = treatment.dependencies;
  for (const TaskSpec& task : treatment.tasks) {
    package.remaining.push_back(
        {task.id, task.duration_days, task.required_category});
  }
  std::sort(package.remaining.begin(), package.remaining.end(),
            [](const PackageTask& a, const PackageTask& b) {
              return a.task_id < b.task_id;
            });
  return package;
}

std::vector<std::string> ActiveTasks(const Package& package) {
  std::vector<std::string> active;
  for (const PackageTask& task : package.remaining) {
    const bool ready = std::all_of(
        package.dependencies.begin(), package.dependencies.end(),
        [&](const Dependency& dep) {
          return dep.after != task.task_id || package.completed.count(dep.before);
        });
    if (ready) active.push_back(task.task_id);
  }
  return active;
}

DayStep StepDay(std::vector<Package> packages, int day,
                const Scenario& scenario, const KnowledgeBase& kb,
                const SimulationOptions& options) {
  if (day <= scenario.horizon_days) {
    for (const PatientRecord& patient : ArrivalsOn(scenario, day)) {
      packages.push_back(MakePackage(patient, kb));
    }
  }
  std::sort(packages.begin(), packages.end(), ByPatientId);

  DayStep step;
  for (Package& package : packages) {
    if (package.Empty()) continue;
    std::vector<std::string> executing = ActiveTasks(package);
    if (!options.parallel_tasks && executing.size() > 1) executing.resize(1);

    const Category* strictest = nullptr;
    for (const std::string& task_id : executing) {
      auto it = std::find_if(
          package.remaining.begin(), package.remaining.end(),
          [&](const PackageTask& task) { return task.task_id == task_id; });
      if (strictest == nullptr ||
          it->required_category.level < strictest->level) {
        strictest = &it->required_category;
      }
    }
    step.needs.push_back({day, package.patient.id, *strictest,
                          package.patient.gender, package.patient.contagious});

    for (const std::string& task_id : executing) {
      auto it = std::find_if(
          package.remaining.begin(), package.remaining.end(),
          [&](const PackageTask& task) { return task.task_id == task_id; });
      if (--it->remaining_days == 0) {
        package.completed.insert(it->task_id);
        package.remaining.erase(it);
      }
    }
    if (!package.Empty()) step.packages.push_back(std::move(package));
  }
  return step;
}

const std::vector<BedNeed>& BedNeedTimeline::On(int day) const {
  static const std::vector<BedNeed> kNone;
  if (day < 1 || day > last_day()) return kNone;
  return days_[day - 1];
}

BedNeedTimeline Simulate(const Scenario& scenario, const KnowledgeBase& kb,
                         const SimulationOptions& options) {
  int last_arrival = 0;
  for (const PatientRecord& patient : scenario.patients) {
    last_arrival = std::max(last_arrival, patient.arrival_day);
  }
  std::vector<std::vector<BedNeed>> days;
  std::vector<Package> packages;
  for (int day = 1; day <= last_arrival || !packages.empty(); ++day) {
    DayStep step = StepDay(std::move(packages), day, scenario, kb, options);
    packages = std::move(step.packages);
    days.push_back(std::move(step.needs));
  }
  return BedNeedTimeline(std::move(days));
}

std::string TimelineToCsv(const BedNeedTimeline& timeline) {
  std::ostringstream out;
  out << "day,patient_id,category,gender,contagious\n";
  for (int day = 1; day <= timeline.last_day(); ++day) {
    for (const BedNeed& need : timeline.On(day)) {
      out << need.day << "," << need.patient_id << "," << need.category.name
          << "," << GenderLabel(need.gender) << ","
          << (need.contagious ? "true" : "false") << "\n";
    }
  }
  return out.str();
}

}  // namespace wardflow
