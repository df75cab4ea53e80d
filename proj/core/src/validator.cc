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

#include "wardflow/validator.h"

#include <set>

namespace wardflow {

std::vector<std::string> PlacementViolations(
    const DailyAllocationProblem& problem,
    const std::map<std::string, std::string>& assignment) {
  std::vector<std::string> violations;
  std::map<std::string, const Room*> rooms;
  for (const Room& room : problem.rooms) rooms[room.id] = &room;
  std::map<std::string, const DailyPatient*> patients;
  for (const DailyPatient& patient : problem.patients) {
    patients[patient.id] = &patient;
  }

  std::map<std::string, std::vector<const DailyPatient*>> occupants;
  for (const DailyPatient& patient : problem.patients) {
    const auto it = assignment.find(patient.id);
    if (it == assignment.end()) {
      violations.push_back(patient.id + " is not placed");
      continue;
    }
    const auto room = rooms.find(it->second);
    if (room == rooms.end()) {
      violations.push_back(patient.id + " placed in unknown room " +
                           it->second);
      continue;
    }
    occupants[it->second].push_back(&patient);
    if (room->second->category.level > patient.need.level) {
      violations.push_back(patient.id + " needs " + patient.need.name +
                           " but room " + it->second + " is " +
                           room->second->category.name);
    }
  }
  for (const auto& [patient_id, room_id] : assignment) {
    if (!patients.count(patient_id)) {
      violations.push_back("placement for unknown patient " + patient_id);
    }
  }
  for (const auto& [room_id, list] : occupants) {
    const Room& room = *rooms.at(room_id);
    if (static_cast<int>(list.size()) > room.capacity) {
      violations.push_back("room " + room_id + " holds " +
                           std::to_string(list.size()) + " > capacity " +
                           std::to_string(room.capacity));
    }
    for (const DailyPatient* patient : list) {
      if (patient->gender != list.front()->gender) {
        violations.push_back("room " + room_id + " mixes genders");
        break;
      }
    }
    for (const DailyPatient* patient : list) {
      if (patient->contagious && list.size() > 1) {
        violations.push_back("contagious " + patient->id +
                             " shares room " + room_id);
      }
    }
  }
  return violations;
}

int CountMoves(const DailyAllocationProblem& problem,
               const std::map<std::string, std::string>& assignment) {
  int moves = 0;
  for (const DailyPatient& patient : problem.patients) {
    const auto before = problem.previous_assignment.find(patient.id);
    const auto now = assignment.find(patient.id);
    if (before != problem.previous_assignment.end() &&
        now != assignment.end() && before->second != now->second) {
      ++moves;
    }
  }
  return moves;
}

std::vector<std::string> ValidateAllocation(
    const DailyAllocationProblem& problem, const DailyAllocation& allocation,
    std::optional<int> minimum_moves) {
  if (allocation.status != AllocationStatus::kFeasible) {
    if (!allocation.assignment.empty() || !allocation.moves.empty()) {
      return {"non-feasible day carries a placement"};
    }
    return {};
  }
  std::vector<std::string> violations =
      PlacementViolations(problem, allocation.assignment);

  std::map<std::string, Gender> gender_of;
  for (const DailyPatient& patient : problem.patients) {
    gender_of[patient.id] = patient.gender;
  }
  std::map<std::string, std::string> expected_gender;
  for (const auto& [patient_id, room_id] : allocation.assignment) {
    if (gender_of.count(patient_id)) {
      expected_gender[room_id] = std::string(GenderLabel(gender_of[patient_id]));
    }
  }
  if (violations.empty() && expected_gender != allocation.room_gender) {
    violations.push_back("room genders disagree with occupants");
  }

  std::set<std::string> moved;
  for (const DailyPatient& patient : problem.patients) {
    const auto before = problem.previous_assignment.find(patient.id);
    const auto now = allocation.assignment.find(patient.id);
    if (before != problem.previous_assignment.end() &&
        now != allocation.assignment.end() && before->second != now->second) {
      moved.insert(patient.id);
    }
  }
  if (moved != allocation.moves) {
    violations.push_back("reported moves disagree with the placement");
  }
  if (minimum_moves && static_cast<int>(moved.size()) != *minimum_moves) {
    violations.push_back("move count " + std::to_string(moved.size()) +
                         " is not the minimum " +
                         std::to_string(*minimum_moves));
  }
  return violations;
}

}  // namespace wardflow
