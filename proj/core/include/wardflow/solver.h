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

#ifndef WARDFLOW_SOLVER_H_
#define WARDFLOW_SOLVER_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "wardflow/encoder.h"

namespace wardflow {

enum class AllocationStatus { kFeasible, kInfeasible, kBudgetExceeded };

std::string_view StatusName(AllocationStatus status);

struct DailyAllocation {
  int day = 1;
  AllocationStatus status = AllocationStatus::kInfeasible;
  std::map<std::string, std::string> assignment;   // patient -> room
  std::map<std::string, std::string> room_gender;  // occupied rooms only
  std::set<std::string> moves;                     // patients with room != v

  friend bool operator==(const DailyAllocation&,
                         const DailyAllocation&) = default;
};

struct SolveOptions {
  std::chrono::milliseconds budget{60'000};
};

struct SolveStats {
  int64_t nodes = 0;
  int minimum_moves = -1;
};

// Exact minimum-move allocation for an encoded day. Among optimal allocations
// the one whose room vector (patients by id, rooms by id) is lexicographically
// smallest is returned. Throws Error(kBudgetExceeded) when the budget runs out
// before the answer is proven.
DailyAllocation Solve(const ConstraintSystem& system,
                      const SolveOptions& options = {},
                      SolveStats* stats = nullptr);

}  // namespace wardflow

#endif  // WARDFLOW_SOLVER_H_
