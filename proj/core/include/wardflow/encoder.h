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

#ifndef WARDFLOW_ENCODER_H_
#define WARDFLOW_ENCODER_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wardflow/knowledge.h"
#include "wardflow/patient_stream.h"
#include "wardflow/simulator.h"

namespace wardflow {

struct DailyPatient {
  std::string id;
  Gender gender = Gender::kMale;
  bool contagious = false;
  Category need;

  friend bool operator==(const DailyPatient&, const DailyPatient&) = default;
};

// One day's allocation question: who needs a bed today, the rooms, and the
// standing assignment v (patient id -> room id).
struct DailyAllocationProblem {
  int day = 1;
  std::vector<DailyPatient> patients;
  std::vector<Room> rooms;
  std::map<std::string, std::string> previous_assignment;

  friend bool operator==(const DailyAllocationProblem&,
                         const DailyAllocationProblem&) = default;
};

// Builds the day-`day` problem from the day's needs. Entries of `previous`
// for patients not present today are dropped.
DailyAllocationProblem MakeProblem(int day, std::span<const BedNeed> needs,
                                   const Ward& ward,
                                   const std::map<std::string, std::string>&
                                       previous);

// Patients sorted by id, rooms sorted by id, v restricted to today's patients.
// Throws kValidation when v names an unknown room or ids repeat.
DailyAllocationProblem Normalize(DailyAllocationProblem problem);

using Var = int;

enum class VarKind {
  kAssign,      // a[p,r] in {0,1}
  kRoomGender,  // g[r] over the gender labels
  kMove,        // c[p] in {0,1}
};

struct Variable {
  VarKind kind = VarKind::kAssign;
  std::string name;
  int patient = -1;
  int room = -1;
};

// sum(vars) == 1
struct ExactlyOne {
  std::vector<Var> vars;
};

// sum(vars) <= bound
struct AtMost {
  std::vector<Var> vars;
  int bound = 0;
};

// assign -> room_gender == gender
struct GenderLink {
  Var assign = 0;
  Var room_gender = 0;
  int gender = 0;  // index into ConstraintSystem::gender_labels
};

// assign -> !excluded[i] for all i
struct Isolation {
  Var assign = 0;
  std::vector<Var> excluded;
};

// !assign
struct Forbidden {
  Var assign = 0;
};

// stay | moved
struct ChangeClause {
  Var stay = 0;
  Var moved = 0;
};

// A value per variable: 0/1 for booleans, a gender label index for g[r].
using Valuation = std::vector<int>;

// The day's formula: the conjunction of every constraint list below, plus the
// objective "minimize the sum of the move variables".
struct ConstraintSystem {
  int day = 1;
  std::vector<std::string> patient_ids;  // sorted
  std::vector<std::string> room_ids;     // sorted
  std::vector<std::string> gender_labels;
  std::vector<Variable> variables;

  std::vector<std::vector<Var>> assign;   // [patient][room]
  std::vector<Var> room_gender;           // [room]
  std::vector<std::optional<Var>> moved;  // [patient], set iff v(p) defined
  std::vector<int> previous_room;         // [patient], -1 if none

  std::vector<ExactlyOne> patient_constraints;      // each patient one room
  std::vector<AtMost> room_constraints;             // room capacity
  std::vector<GenderLink> gender_constraints;       // homogeneous rooms
  std::vector<Isolation> contagious_constraints;    // contagious alone
  std::vector<Forbidden> category_constraints;      // unsuitable rooms
  std::vector<ChangeClause> change_constraints;     // stay or count a move
  std::vector<Var> objective;

  int num_variables() const { return static_cast<int>(variables.size()); }
  int Domain(Var var) const;

  // True iff every hard constraint holds under `values`.
  bool Satisfied(const Valuation& values) const;
  // Sum of the objective variables.
  int Objective(const Valuation& values) const;
};

ConstraintSystem Encode(const DailyAllocationProblem& problem);

// Line-oriented text form, one constraint per line with named variables.
std::string DumpConstraintSystem(const ConstraintSystem& system);

}  // namespace wardflow

#endif  // WARDFLOW_ENCODER_H_
