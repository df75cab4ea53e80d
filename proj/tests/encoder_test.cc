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

#include "wardflow/encoder.h"

#include <gtest/gtest.h>

#include "test_support.h"
#include "wardflow/error.h"

namespace wardflow {
namespace {

using ::wardflow::testing::kHighMonitoring;
using ::wardflow::testing::kIntermediate;
using ::wardflow::testing::kStandard;

DailyAllocationProblem TwoByTwo() {
  DailyAllocationProblem problem;
  problem.day = 3;
  problem.patients = {{"P2", Gender::kFemale, true, kIntermediate},
                      {"P1", Gender::kMale, false, kStandard}};
  problem.rooms = {{"R2", 1, kIntermediate}, {"R1", 2, kStandard}};
  return problem;
}

TEST(EncodeTest, CountsWithoutPreviousAssignment) {
  const ConstraintSystem system = Encode(TwoByTwo());
  int assign = 0, gender = 0, move = 0;
  for (const Variable& var : system.variables) {
    assign += var.kind == VarKind::kAssign;
    gender += var.kind == VarKind::kRoomGender;
    move += var.kind == VarKind::kMove;
  }
  EXPECT_EQ(assign, 4);
  EXPECT_EQ(gender, 2);
  EXPECT_EQ(move, 0);
  EXPECT_EQ(system.patient_constraints.size(), 2u);
  EXPECT_EQ(system.room_constraints.size(), 2u);
  EXPECT_EQ(system.gender_constraints.size(), 4u);
  EXPECT_EQ(system.contagious_constraints.size(), 2u);
  EXPECT_TRUE(system.change_constraints.empty());
  EXPECT_TRUE(system.objective.empty());
}

TEST(EncodeTest, ReturningPatientGetsChangeClause) {
  DailyAllocationProblem problem = TwoByTwo();
  problem.previous_assignment = {{"P1", "R1"}};
  const ConstraintSystem system = Encode(problem);
  ASSERT_EQ(system.change_constraints.size(), 1u);
  const ChangeClause& clause = system.change_constraints[0];
  EXPECT_EQ(system.variables[clause.stay].name, "a[P1,R1]");
  EXPECT_EQ(system.variables[clause.moved].name, "c[P1]");
  ASSERT_EQ(system.objective.size(), 1u);
  EXPECT_EQ(system.objective[0], clause.moved);
}

TEST(EncodeTest, DischargedPatientsLeaveNoTrace) {
  DailyAllocationProblem problem = TwoByTwo();
  problem.previous_assignment = {{"P9", "R1"}};
  EXPECT_TRUE(Encode(problem).objective.empty());
}

TEST(EncodeTest, UnknownPreviousRoomRejected) {
  DailyAllocationProblem problem = TwoByTwo();
  problem.previous_assignment = {{"P1", "R7"}};
  EXPECT_THROW(Encode(problem), Error);
}

TEST(EncodeTest, DuplicateIdsRejected) {
  DailyAllocationProblem problem = TwoByTwo();
  problem.patients.push_back(problem.patients[0]);
  EXPECT_THROW(Encode(problem), Error);
}

TEST(EncodeTest, CategoryForbidsLooserRooms) {
  DailyAllocationProblem problem;
  problem.patients = {{"P1", Gender::kMale, false, kHighMonitoring}};
  problem.rooms = {{"R1", 1, kHighMonitoring},
                   {"R2", 1, kIntermediate},
                   {"R3", 1, kStandard}};
  const ConstraintSystem system = Encode(problem);
  ASSERT_EQ(system.category_constraints.size(), 2u);
  EXPECT_EQ(system.variables[system.category_constraints[0].assign].name,
            "a[P1,R2]");
  EXPECT_EQ(system.variables[system.category_constraints[1].assign].name,
            "a[P1,R3]");
}

TEST(EncodeTest, ObjectiveCountsMoveVariables) {
  DailyAllocationProblem problem = TwoByTwo();
  problem.previous_assignment = {{"P1", "R1"}, {"P2", "R2"}};
  const ConstraintSystem system = Encode(problem);
  Valuation values(system.num_variables(), 0);
  EXPECT_EQ(system.Objective(values), 0);
  for (Var var : system.objective) values[var] = 1;
  EXPECT_EQ(system.Objective(values), 2);
}

TEST(EncodeTest, SatisfiedMatchesHandPlacement) {
  DailyAllocationProblem problem = TwoByTwo();
  problem.previous_assignment = {{"P1", "R1"}};
  const ConstraintSystem system = Encode(problem);
  // P1 (index 0) stays in R1, P2 isolated in R2.
  Valuation values(system.num_variables(), 0);
  values[system.assign[0][0]] = 1;
  values[system.assign[1][1]] = 1;
  const auto label = [&](std::string_view g) {
    return static_cast<int>(std::find(system.gender_labels.begin(),
                                      system.gender_labels.end(), g) -
                            system.gender_labels.begin());
  };
  values[system.room_gender[0]] = label("M");
  values[system.room_gender[1]] = label("F");
  EXPECT_TRUE(system.Satisfied(values));
  EXPECT_EQ(system.Objective(values), 0);

  // P2 joining P1 breaks isolation, gender and category at once.
  values[system.assign[1][1]] = 0;
  values[system.assign[1][0]] = 1;
  EXPECT_FALSE(system.Satisfied(values));
}

TEST(DumpTest, Golden) {
  DailyAllocationProblem problem = TwoByTwo();
  problem.previous_assignment = {{"P1", "R1"}};
  EXPECT_EQ(DumpConstraintSystem(Encode(problem)),
            "# wardflow constraint system v1\n"
            "day 3\n"
            "patients P1 P2\n"
            "rooms R1 R2\n"
            "genders F M\n"
            "var a[P1,R1] bool\n"
            "var a[P1,R2] bool\n"
            "var a[P2,R1] bool\n"
            "var a[P2,R2] bool\n"
            "var g[R1] {F,M}\n"
            "var g[R2] {F,M}\n"
            "var c[P1] bool\n"
            "exactly_one a[P1,R1] a[P1,R2]\n"
            "exactly_one a[P2,R1] a[P2,R2]\n"
            "at_most 2 a[P1,R1] a[P2,R1]\n"
            "at_most 1 a[P1,R2] a[P2,R2]\n"
            "gender a[P1,R1] -> g[R1]=M\n"
            "gender a[P1,R2] -> g[R2]=M\n"
            "gender a[P2,R1] -> g[R1]=F\n"
            "gender a[P2,R2] -> g[R2]=F\n"
            "isolate a[P2,R1] -> !a[P1,R1]\n"
            "isolate a[P2,R2] -> !a[P1,R2]\n"
            "forbid a[P2,R1]\n"
            "change a[P1,R1] | c[P1]\n"
            "minimize c[P1]\n");
}

TEST(DumpTest, EmptyDay) {
  DailyAllocationProblem problem;
  problem.rooms = {{"R1", 1, kStandard}};
  EXPECT_EQ(DumpConstraintSystem(Encode(problem)),
            "# wardflow constraint system v1\n"
            "day 1\n"
            "patients\n"
            "rooms R1\n"
            "genders F M\n"
            "var g[R1] {F,M}\n"
            "minimize 0\n");
}

TEST(MakeProblemTest, DropsAbsentPatientsFromPrevious) {
  const Ward ward{"w", {{"R1", 2, kStandard}}};
  const std::vector<BedNeed> needs = {
      {4, "P1", kStandard, Gender::kFemale, false}};
  const DailyAllocationProblem problem =
      MakeProblem(4, needs, ward, {{"P1", "R1"}, {"P0", "R1"}});
  EXPECT_EQ(problem.day, 4);
  ASSERT_EQ(problem.patients.size(), 1u);
  EXPECT_EQ(problem.patients[0].need, kStandard);
  EXPECT_EQ(problem.previous_assignment,
            (std::map<std::string, std::string>{{"P1", "R1"}}));
}

// Exhaustive check over every valuation for instances up to 2 patients and
// 2 rooms; the acceptance binary extends this to 3 patients.
TEST(SoundnessTest, SmallInstancesExhaustive) {
  int64_t mismatches = 0;
  const int64_t instances = testing::ForEachSmallProblem(
      2, 2, 2, [&](const DailyAllocationProblem& problem) {
        mismatches += testing::SoundnessMismatches(problem);
      });
  EXPECT_GT(instances, 1000);
  EXPECT_EQ(mismatches, 0);
}

}  // namespace
}  // namespace wardflow
