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

#ifndef WARDFLOW_PATIENT_STREAM_H_
#define WARDFLOW_PATIENT_STREAM_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wardflow/knowledge.h"

namespace wardflow {

// The solver treats gender as an opaque label and only compares for equality.
enum class Gender { kMale, kFemale };

inline constexpr Gender kAllGenders[] = {Gender::kFemale, Gender::kMale};

// "M" / "F".
std::string_view GenderLabel(Gender gender);
std::optional<Gender> ParseGender(std::string_view label);

struct PatientRecord {
  std::string id;
  Gender gender = Gender::kMale;
  bool contagious = false;
  std::string diagnosis;
  int arrival_day = 1;  // day 1 is the first simulated day

  friend bool operator==(const PatientRecord&, const PatientRecord&) = default;
};

// A timed stream of admitted patients against one ward.
struct Scenario {
  std::string id;
  std::string ward_ref;
  std::vector<PatientRecord> patients;
  int horizon_days = 1;
  // Optimistic-concurrency version assigned by the store; 0 = never stored.
  int64_t version = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Checks id uniqueness, arrival_day in [1, horizon_days] and, when `kb` is
// given, that every diagnosis resolves. Throws Error.
void ValidateScenario(const Scenario& scenario, const KnowledgeBase* kb);

// Reads the patient CSV
//
//   patient_id,gender,contagious,diagnosis,arrival_day
//
// Errors carry the 1-based CSV line (header = line 1). The horizon defaults to
// the latest arrival day (1 for an empty stream).
Scenario ParsePatientCsv(std::string_view csv, std::string scenario_id,
                         std::string ward_ref, const KnowledgeBase* kb,
                         std::optional<int> horizon_days = std::nullopt);
std::string PatientsToCsv(const Scenario& scenario);

// Patients with arrival_day == day, ordered by id. Throws kOutOfRange unless
// 1 <= day <= horizon_days.
std::vector<PatientRecord> ArrivalsOn(const Scenario& scenario, int day);

// JSON document used by the store and the HTTP API.
std::string ScenarioToJson(const Scenario& scenario);
Scenario ScenarioFromJson(std::string_view json);

struct GeneratorOptions {
  std::string scenario_id = "generated";
  std::string ward_ref = "default";
  int patients = 100;
  int days = 30;
  uint64_t seed = 1;
  double contagion_rate = 0.05;
};

// Seeded synthetic stream: uniform arrival days over [1, days], fair gender
// split, Bernoulli(contagion_rate) contagion and a uniform diagnosis mix over
// the knowledge base's diagnoses. Ids are P0001.. in generation order.
Scenario GenerateScenario(const KnowledgeBase& kb,
                          const GeneratorOptions& options);

}  // namespace wardflow

#endif  // WARDFLOW_PATIENT_STREAM_H_
