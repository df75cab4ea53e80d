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

#include "wardflow/oracle.h"

#include <algorithm>
#include <limits>

#include "wardflow/error.h"
#include "wardflow/validator.h"

namespace wardflow {

DailyAllocation OracleSolve(const DailyAllocationProblem& input) {
  if (input.patients.size() > static_cast<size_t>(kOracleMaxPatients) ||
      input.rooms.size() > static_cast<size_t>(kOracleMaxRooms)) {
    throw Error(ErrorCode::kBoundExceeded,
                "oracle handles at most " + std::to_string(kOracleMaxPatients) +
                    " patients and " + std::to_string(kOracleMaxRooms) +
                    " rooms");
  }
  std::vector<DailyPatient> patients = input.patients;
  std::sort(patients.begin(), patients.end(),
            [](const DailyPatient& a, const DailyPatient& b) {
              return a.id < b.id;
            });
  std::vector<std::string> room_ids;
  for (const Room& room : input.rooms) room_ids.push_back(room.id);
  std::sort(room_ids.begin(), room_ids.end());

  DailyAllocation best;
  best.day = input.day;
  best.status = AllocationStatus::kInfeasible;
  if (room_ids.empty()) {
    if (patients.empty()) best.status = AllocationStatus::kFeasible;
    return best;
  }

  const size_t n = patients.size();
  const size_t k = room_ids.size();
  std::vector<size_t> digits(n, 0);
  int best_moves = std::numeric_limits<int>::max();
  std::map<std::string, std::string> candidate;
  while (true) {
    candidate.clear();
    for (size_t i = 0; i < n; ++i) {
      candidate[patients[i].id] = room_ids[digits[i]];
    }
    if (PlacementViolations(input, candidate).empty()) {
      const int moves = CountMoves(input, candidate);
      if (moves < best_moves) {
        best_moves = moves;
        best.assignment = candidate;
      }
    }
    // Odometer with the last patient as the fastest digit: lexicographic.
    size_t i = n;
    while (i > 0 && ++digits[i - 1] == k) digits[--i] = 0;
    if (i == 0) break;
  }
  if (best_moves == std::numeric_limits<int>::max()) return best;

  best.status = AllocationStatus::kFeasible;
  for (const DailyPatient& patient : patients) {
    const std::string& room = best.assignment.at(patient.id);
    best.room_gender[room] = std::string(GenderLabel(patient.gender));
    const auto before = input.previous_assignment.find(patient.id);
    if (before != input.previous_assignment.end() && before->second != room) {
      best.moves.insert(patient.id);
    }
  }
  return best;
}

}  // namespace wardflow
