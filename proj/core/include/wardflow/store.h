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

#ifndef WARDFLOW_STORE_H_
#define WARDFLOW_STORE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "wardflow/knowledge.h"
#include "wardflow/patient_stream.h"

struct sqlite3;

namespace wardflow {

// Local data store: ward knowledge documents, scenarios and persisted plans in
// one SQLite file. Readers share a lock; every write is a single transaction
// under an exclusive lock. Thread-safe.
class Store {
 public:
  // `path` may be ":memory:". Creates the schema on first use.
  explicit Store(const std::string& path);
  // Opens <dir>/wardflow.db, creating `dir` if needed.
  static std::unique_ptr<Store> OpenDirectory(const std::filesystem::path& dir);

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;
  ~Store();

  // Wards. The document is validated with LoadKnowledge before it is stored.
  int64_t PutWard(const std::string& ward_id, const std::string& document);
  std::string GetWardDocument(const std::string& ward_id) const;
  KnowledgeBase GetWard(const std::string& ward_id) const;
  bool HasWard(const std::string& ward_id) const;

  // Scenarios. All writes validate against the referenced ward, which must
  // exist. Returned scenarios carry their new version.
  Scenario CreateScenario(Scenario scenario);
  Scenario ReadScenario(const std::string& scenario_id) const;
  // Rejects with kVersionConflict unless `scenario.version` equals the stored
  // version.
  Scenario UpdateScenario(Scenario scenario);
  // Create-or-replace without a version check (ingest, generator).
  Scenario PutScenario(Scenario scenario);
  // Also deletes the scenario's stored plan.
  void DeleteScenario(const std::string& scenario_id);
  std::vector<std::string> ListScenarios() const;

  // Parses the CSV against the ward's knowledge base and stores the result.
  Scenario IngestPatients(const std::string& csv,
                          const std::string& scenario_id,
                          const std::string& ward_ref,
                          std::optional<int> horizon_days = std::nullopt);

  // Plans are keyed by id; a plan belongs to one scenario.
  void PutPlan(const std::string& plan_id, const std::string& scenario_id,
               const std::string& document);
  std::string GetPlan(const std::string& plan_id) const;
  bool HasPlan(const std::string& plan_id) const;

 private:
  Scenario WriteScenario(Scenario scenario, bool must_exist, bool must_not_exist,
                         bool check_version);

  sqlite3* db_ = nullptr;
  mutable std::shared_mutex mutex_;
};

}  // namespace wardflow

#endif  // WARDFLOW_STORE_H_
