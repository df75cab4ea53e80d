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

#ifndef WARDFLOW_VALIDATOR_H_
#define WARDFLOW_VALIDATOR_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wardflow/encoder.h"
#include "wardflow/solver.h"

namespace wardflow {

// Checks a patient -> room map against the ward rules directly: every patient
// placed exactly once in a known room, occupancy within capacity, one gender
// per room, contagious patients alone, and room category no looser than the
// patient's need. Returns one message per violation.
std::vector<std::string> PlacementViolations(
    const DailyAllocationProblem& problem,
    const std::map<std::string, std::string>& assignment);

// Patients whose room differs from the previous assignment.
int CountMoves(const DailyAllocationProblem& problem,
               const std::map<std::string, std::string>& assignment);

// All invariants of a Feasible DailyAllocation, including that the reported
// room genders and move set agree with the placement. When `minimum_moves`
// is given the move count must equal it. Non-feasible allocations must have
// an empty placement.
std::vector<std::string> ValidateAllocation(
    const DailyAllocationProblem& problem, const DailyAllocation& allocation,
    std::optional<int> minimum_moves = std::nullopt);

}  // namespace wardflow

#endif  // WARDFLOW_VALIDATOR_H_
