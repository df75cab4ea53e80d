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

#include <algorithm>
#include <set>
#include <sstream>

#include "wardflow/error.h"

namespace wardflow {

DailyAllocationProblem MakeProblem(
    int day, std::span<const BedNeed> needs, const Ward& ward,
    const std::map<std::string, std::string>& previous) {
  DailyAllocationProblem problem;
  problem.day = day;
  problem.rooms = ward.rooms;
  for (const BedNeed& need : needs) {
    problem.patients.push_back(
        {need.patient_id, need.gender, need.contagious, need.category});
    if (auto it = previous.find(need.patient_id); it != previous.end()) {
      problem.previous_assignment.insert(*it);
    }
  }
  return Normalize(std::move(problem));
}

DailyAllocationProblem Normalize(DailyAllocationProblem problem) {
  std::sort(problem.patients.begin(), problem.patients.end(),
            [](const DailyPatient& a, const DailyPatient& b) {
              return a.id < b.id;
            });
  std::sort(problem.rooms.begin(), problem.rooms.end(),
            [](const Room& a, const Room& b) { return a.id < b.id; });
  for (size_t i = 1; i < problem.patients.size(); ++i) {
    if (problem.patients[i - 1].id == problem.patients[i].id) {
      throw Error(ErrorCode::kDuplicateId,
                  "patient " + problem.patients[i].id + " listed twice");
    }
  }
  for (size_t i = 1; i < problem.rooms.size(); ++i) {
    if (problem.rooms[i - 1].id == problem.rooms[i].id) {
      throw Error(ErrorCode::kDuplicateId,
                  "room " + problem.rooms[i].id + " listed twice");
    }
  }
  std::set<std::string> present;
  for (const DailyPatient& patient : problem.patients) {
    present.insert(patient.id);
  }
  std::map<std::string, std::string> kept;
  for (const auto& [patient_id, room_id] : problem.previous_assignment) {
    if (!present.count(patient_id)) continue;
    const bool known = std::any_of(
        problem.rooms.begin(), problem.rooms.end(),
        [&](const Room& room) { return room.id == room_id; });
    if (!known) {
      throw Error(ErrorCode::kValidation, "previous assignment of " +
                                              patient_id +
                                              " names unknown room " + room_id);
    }
    kept.emplace(patient_id, room_id);
  }
  problem.previous_assignment = std::move(kept);
  return problem;
}

int ConstraintSystem::Domain(Var var) const {
  return variables[var].kind == VarKind::kRoomGender
             ? static_cast<int>(gender_labels.size())
             : 2;
}

bool ConstraintSystem::Satisfied(const Valuation& values) const {
  for (const ExactlyOne& c : patient_constraints) {
    int sum = 0;
    for (Var v : c.vars) sum += values[v];
    if (sum != 1) return false;
  }
  for (const AtMost& c : room_constraints) {
    int sum = 0;
    for (Var v : c.vars) sum += values[v];
    if (sum > c.bound) return false;
  }
  for (const GenderLink& c : gender_constraints) {
    if (values[c.assign] && values[c.room_gender] != c.gender) return false;
  }
  for (const Isolation& c : contagious_constraints) {
    if (!values[c.assign]) continue;
    for (Var v : c.excluded) {
      if (values[v]) return false;
    }
  }
  for (const Forbidden& c : category_constraints) {
    if (values[c.assign]) return false;
  }
  for (const ChangeClause& c : change_constraints) {
    if (!values[c.stay] && !values[c.moved]) return false;
  }
  return true;
}

int ConstraintSystem::Objective(const Valuation& values) const {
  int sum = 0;
  for (Var v : objective) sum += values[v];
  return sum;
}

ConstraintSystem Encode(const DailyAllocationProblem& input) {
  const DailyAllocationProblem problem = Normalize(input);
  const int num_patients = static_cast<int>(problem.patients.size());
  const int num_rooms = static_cast<int>(problem.rooms.size());

  ConstraintSystem system;
  system.day = problem.day;
  for (Gender gender : kAllGenders) {
    system.gender_labels.emplace_back(GenderLabel(gender));
  }
  const auto gender_index = [&](Gender gender) {
    const auto it = std::find(system.gender_labels.begin(),
                              system.gender_labels.end(), GenderLabel(gender));
    return static_cast<int>(it - system.gender_labels.begin());
  };
  for (const DailyPatient& patient : problem.patients) {
    system.patient_ids.push_back(patient.id);
  }
  std::map<std::string, int> room_index;
  for (const Room& room : problem.rooms) {
    room_index[room.id] = static_cast<int>(system.room_ids.size());
    system.room_ids.push_back(room.id);
  }

  const auto add_var = [&](VarKind kind, std::string name, int patient,
                           int room) {
    system.variables.push_back({kind, std::move(name), patient, room});
    return static_cast<Var>(system.variables.size() - 1);
  };
  system.assign.assign(num_patients, std::vector<Var>(num_rooms));
  for (int p = 0; p < num_patients; ++p) {
    for (int r = 0; r < num_rooms; ++r) {
      system.assign[p][r] = add_var(
          VarKind::kAssign,
          "a[" + system.patient_ids[p] + "," + system.room_ids[r] + "]", p, r);
    }
  }
  for (int r = 0; r < num_rooms; ++r) {
    system.room_gender.push_back(add_var(
        VarKind::kRoomGender, "g[" + system.room_ids[r] + "]", -1, r));
  }
  system.moved.assign(num_patients, std::nullopt);
  system.previous_room.assign(num_patients, -1);
  for (int p = 0; p < num_patients; ++p) {
    const auto it = problem.previous_assignment.find(system.patient_ids[p]);
    if (it == problem.previous_assignment.end()) continue;
    system.previous_room[p] = room_index.at(it->second);
    system.moved[p] =
        add_var(VarKind::kMove, "c[" + system.patient_ids[p] + "]", p, -1);
  }

  // Each patient occupies exactly one room.
  for (int p = 0; p < num_patients; ++p) {
    system.patient_constraints.push_back({system.assign[p]});
  }
  // Occupancy within the room's bed bays.
  for (int r = 0; r < num_rooms; ++r) {
    AtMost capacity{{}, problem.rooms[r].capacity};
    for (int p = 0; p < num_patients; ++p) {
      capacity.vars.push_back(system.assign[p][r]);
    }
    if (!capacity.vars.empty()) {
      system.room_constraints.push_back(std::move(capacity));
    }
  }
  for (int p = 0; p < num_patients; ++p) {
    const DailyPatient& patient = problem.patients[p];
    for (int r = 0; r < num_rooms; ++r) {
      const Var a = system.assign[p][r];
      system.gender_constraints.push_back(
          {a, system.room_gender[r], gender_index(patient.gender)});
      if (patient.contagious) {
        Isolation isolation{a, {}};
        for (int q = 0; q < num_patients; ++q) {
          if (q != p) isolation.excluded.push_back(system.assign[q][r]);
        }
        if (!isolation.excluded.empty()) {
          system.contagious_constraints.push_back(std::move(isolation));
        }
      }
      if (!CategoryLeq(problem.rooms[r].category, patient.need)) {
        system.category_constraints.push_back({a});
      }
    }
  }
  for (int p = 0; p < num_patients; ++p) {
    if (!system.moved[p]) continue;
    system.change_constraints.push_back(
        {system.assign[p][system.previous_room[p]], *system.moved[p]});
    system.objective.push_back(*system.moved[p]);
  }
  return system;
}

std::string DumpConstraintSystem(const ConstraintSystem& system) {
  std::ostringstream out;
  const auto name = [&](Var v) -> const std::string& {
    return system.variables[v].name;
  };
  out << "# wardflow constraint system v1\n";
  out << "day " << system.day << "\n";
  out << "patients";
  for (const std::string& id : system.patient_ids) out << " " << id;
  out << "\nrooms";
  for (const std::string& id : system.room_ids) out << " " << id;
  out << "\ngenders";
  for (const std::string& label : system.gender_labels) out << " " << label;
  out << "\n";
  for (const Variable& var : system.variables) {
    out << "var " << var.name;
    if (var.kind == VarKind::kRoomGender) {
      out << " {";
      for (size_t i = 0; i < system.gender_labels.size(); ++i) {
        out << (i ? "," : "") << system.gender_labels[i];
      }
      out << "}\n";
    } else {
      out << " bool\n";
    }
  }
  for (const ExactlyOne& c : system.patient_constraints) {
    out << "exactly_one";
    for (Var v : c.vars) out << " " << name(v);
    out << "\n";
  }
  for (const AtMost& c : system.room_constraints) {
    out << "at_most " << c.bound;
    for (Var v : c.vars) out << " " << name(v);
    out << "\n";
  }
  for (const GenderLink& c : system.gender_constraints) {
    out << "gender " << name(c.assign) << " -> " << name(c.room_gender) << "="
        << system.gender_labels[c.gender] << "\n";
  }
  for (const Isolation& c : system.contagious_constraints) {
    out << "isolate " << name(c.assign) << " ->";
    for (Var v : c.excluded) out << " !" << name(v);
    out << "\n";
  }
  for (const Forbidden& c : system.category_constraints) {
    out << "forbid " << name(c.assign) << "\n";
  }
  for (const ChangeClause& c : system.change_constraints) {
    out << "change " << name(c.stay) << " | " << name(c.moved) << "\n";
  }
  out << "minimize";
  if (system.objective.empty()) out << " 0";
  for (Var v : system.objective) out << " " << name(v);
  out << "\n";
  return out.str();
}

}  // namespace wardflow
