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

#ifndef WARDFLOW_ORACLE_H_
#define WARDFLOW_ORACLE_H_

#include "wardflow/encoder.h"
#include "wardflow/solver.h"

namespace wardflow {

inline constexpr int kOracleMaxPatients = 8;
inline constexpr int kOracleMaxRooms = 5;

// Exhaustive reference solver. Enumerates every patient -> room map in
// lexicographic order (patients by id, rooms by id), keeps those passing
// PlacementViolations, and returns the first one with the fewest moves.
// Throws Error(kBoundExceeded) beyond the enumeration bounds.
DailyAllocation OracleSolve(const DailyAllocationProblem& problem);

}  // namespace wardflow

#endif  // WARDFLOW_ORACLE_H_
