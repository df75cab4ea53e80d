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

#include "wardflow/patient_stream.h"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "text_util.h"
#include "wardflow/error.h"

namespace wardflow {
namespace {

using internal::ParseInt;
using internal::Split;
using internal::Trim;
using nlohmann::json;

constexpr std::string_view kCsvHeader =
    "patient_id,gender,contagious,diagnosis,arrival_day";

Error RowError(ErrorCode code, int line, const std::string& message) {
  return Error(code, "row " + std::to_string(line) + ": " + message);
}

}  // namespace

std::string_view GenderLabel(Gender gender) {
  return gender == Gender::kMale ? "M" : "F";
}

std::optional<Gender> ParseGender(std::string_view label) {
  if (label == "M") return Gender::kMale;
  if (label == "F") return Gender::kFemale;
  return std::nullopt;
}

void ValidateScenario(const Scenario& scenario, const KnowledgeBase* kb) {
  if (scenario.id.empty()) {
    throw Error(ErrorCode::kValidation, "scenario id must not be empty");
  }
  if (scenario.horizon_days < 1) {
    throw Error(ErrorCode::kValidation,
                "scenario " + scenario.id + ": horizon must be positive");
  }
  std::set<std::string> ids;
  for (const PatientRecord& patient : scenario.patients) {
    if (patient.id.empty()) {
      throw Error(ErrorCode::kValidation, "patient with empty id");
    }
    if (!ids.insert(patient.id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate patient id " + patient.id);
    }
    if (patient.arrival_day < 1 ||
        patient.arrival_day > scenario.horizon_days) {
      throw Error(ErrorCode::kValidation,
                  "patient " + patient.id + ": arrival day " +
                      std::to_string(patient.arrival_day) +
                      " outside [1, " + std::to_string(scenario.horizon_days) +
                      "]");
    }
    if (kb != nullptr && !kb->HasDiagnosis(patient.diagnosis)) {
      throw Error(ErrorCode::kUnknownDiagnosis,
                  "patient " + patient.id + ": unknown diagnosis '" +
                      patient.diagnosis + "'");
    }
  }
}

Scenario ParsePatientCsv(std::string_view csv, std::string scenario_id,
                         std::string ward_ref, const KnowledgeBase* kb,
                         std::optional<int> horizon_days) {
  const std::vector<std::string_view> lines = internal::Lines(csv);
  if (lines.empty() || Trim(lines[0]) != kCsvHeader) {
    throw ParseError(1, "expected header '" + std::string(kCsvHeader) + "'");
  }
  Scenario scenario;
  scenario.id = std::move(scenario_id);
  scenario.ward_ref = std::move(ward_ref);
  std::set<std::string> ids;
  int latest = 1;
  for (size_t i = 1; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    if (Trim(lines[i]).empty()) continue;
    const std::vector<std::string_view> fields = Split(Trim(lines[i]), ',');
    if (fields.size() != 5) {
      throw ParseError(line, "expected 5 fields, got " +
                                 std::to_string(fields.size()));
    }
    PatientRecord patient;
    patient.id = std::string(Trim(fields[0]));
    if (patient.id.empty()) throw ParseError(line, "empty patient_id");
    const auto gender = ParseGender(Trim(fields[1]));
    if (!gender) throw ParseError(line, "gender must be M or F");
    patient.gender = *gender;
    const std::string_view contagious = Trim(fields[2]);
    if (contagious != "true" && contagious != "false") {
      throw ParseError(line, "contagious must be true or false");
    }
    patient.contagious = contagious == "true";
    patient.diagnosis = std::string(Trim(fields[3]));
    const auto arrival = ParseInt(Trim(fields[4]));
    if (!arrival || *arrival < 1) {
      throw ParseError(line, "arrival_day must be an integer >= 1");
    }
    patient.arrival_day = *arrival;
    if (!ids.insert(patient.id).second) {
      throw RowError(ErrorCode::kDuplicateId, line,
                     "duplicate patient id " + patient.id);
    }
    if (kb != nullptr && !kb->HasDiagnosis(patient.diagnosis)) {
      throw RowError(ErrorCode::kUnknownDiagnosis, line,
                     "unknown diagnosis '" + patient.diagnosis + "'");
    }
    latest = std::max(latest, patient.arrival_day);
    scenario.patients.push_back(std::move(patient));
  }
  scenario.horizon_days = horizon_days.value_or(latest);
  ValidateScenario(scenario, kb);
  return scenario;
}

std::string PatientsToCsv(const Scenario& scenario) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const PatientRecord& patient : scenario.patients) {
    out << patient.id << "," << GenderLabel(patient.gender) << ","
        << (patient.contagious ? "true" : "false") << "," << patient.diagnosis
        << "," << patient.arrival_day << "\n";
  }
  return out.str();
}

std::vector<PatientRecord> ArrivalsOn(const Scenario& scenario, int day) {
  if (day < 1 || day > scenario.horizon_days) {
    throw Error(ErrorCode::kOutOfRange,
                "day " + std::to_string(day) + " outside [1, " +
                    std::to_string(scenario.horizon_days) + "]");
  }
  std::vector<PatientRecord> arrivals;
  for (const PatientRecord& patient : scenario.patients) {
    if (patient.arrival_day == day) arrivals.push_back(patient);
  }
  std::sort(arrivals.begin(), arrivals.end(),
            [](const PatientRecord& a, const PatientRecord& b) {
              return a.id < b.id;
            });
  return arrivals;
}

std::string ScenarioToJson(const Scenario& scenario) {
  json patients = json::array();
  for (const PatientRecord& patient : scenario.patients) {
    patients.push_back({{"id", patient.id},
                        {"gender", GenderLabel(patient.gender)},
                        {"contagious", patient.contagious},
                        {"diagnosis", patient.diagnosis},
                        {"arrival_day", patient.arrival_day}});
  }
  json doc = {{"id", scenario.id},
              {"ward", scenario.ward_ref},
              {"horizon_days", scenario.horizon_days},
              {"version", scenario.version},
              {"patients", std::move(patients)}};
  return doc.dump(2) + "\n";
}

Scenario ScenarioFromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("malformed scenario JSON: ") + e.what());
  }
  try {
    Scenario scenario;
    scenario.id = doc.at("id").get<std::string>();
    scenario.ward_ref = doc.at("ward").get<std::string>();
    scenario.horizon_days = doc.at("horizon_days").get<int>();
    scenario.version = doc.value("version", int64_t{0});
    for (const json& entry : doc.at("patients")) {
      PatientRecord patient;
      patient.id = entry.at("id").get<std::string>();
      const auto gender = ParseGender(entry.at("gender").get<std::string>());
      if (!gender) {
        throw ParseError(0, "patient " + patient.id + ": gender must be M or F");
      }
      patient.gender = *gender;
      patient.contagious = entry.at("contagious").get<bool>();
      patient.diagnosis = entry.at("diagnosis").get<std::string>();
      patient.arrival_day = entry.at("arrival_day").get<int>();
      scenario.patients.push_back(std::move(patient));
    }
    return scenario;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("invalid scenario document: ") + e.what());
  }
}

Scenario GenerateScenario(const KnowledgeBase& kb,
                          const GeneratorOptions& options) {
  if (options.patients < 0 || options.days < 1) {
    throw Error(ErrorCode::kValidation,
                "generator needs patients >= 0 and days >= 1");
  }
  if (options.contagion_rate < 0.0 || options.contagion_rate > 1.0) {
    throw Error(ErrorCode::kValidation, "contagion rate must lie in [0, 1]");
  }
  if (kb.diagnoses().empty()) {
    throw Error(ErrorCode::kValidation, "knowledge base has no diagnoses");
  }
  std::vector<std::string> diagnoses;
  for (const auto& [label, treatment] : kb.diagnoses()) {
    diagnoses.push_back(label);
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> arrival(1, options.days);
  std::uniform_int_distribution<size_t> diagnosis(0, diagnoses.size() - 1);
  std::bernoulli_distribution male(0.5);
  std::bernoulli_distribution contagious(options.contagion_rate);

  Scenario scenario;
  scenario.id = options.scenario_id;
  scenario.ward_ref = options.ward_ref;
  scenario.horizon_days = options.days;
  const int width = options.patients >= 10000 ? 6 : 4;
  for (int i = 1; i <= options.patients; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "P%0*d", width, i);
    PatientRecord patient;
    patient.id = id;
    patient.arrival_day = arrival(rng);
    patient.gender = male(rng) ? Gender::kMale : Gender::kFemale;
    patient.contagious = contagious(rng);
    patient.diagnosis = diagnoses[diagnosis(rng)];
    scenario.patients.push_back(std::move(patient));
  }
  return scenario;
}

}  // namespace wardflow
