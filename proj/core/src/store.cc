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

#include "wardflow/store.h"

#include <sqlite3.h>

#include <mutex>

#include "wardflow/error.h"

namespace wardflow {
namespace {

constexpr const char* kSchema = R"sql(
PRAGMA foreign_keys = ON;
CREATE TABLE IF NOT EXISTS wards (
  id TEXT PRIMARY KEY,
  document TEXT NOT NULL,
  version INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS scenarios (
  id TEXT PRIMARY KEY,
  payload TEXT NOT NULL,
  version INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS plans (
  id TEXT PRIMARY KEY,
  scenario_id TEXT NOT NULL REFERENCES scenarios(id) ON DELETE CASCADE,
  document TEXT NOT NULL
);
)sql";

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw std::runtime_error(std::string("sqlite prepare: ") +
                               sqlite3_errmsg(db));
    }
  }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  ~Statement() { sqlite3_finalize(stmt_); }

  Statement& Bind(int index, const std::string& text) {
    sqlite3_bind_text(stmt_, index, text.data(), static_cast<int>(text.size()),
                      SQLITE_TRANSIENT);
    return *this;
  }
  Statement& Bind(int index, int64_t value) {
    sqlite3_bind_int64(stmt_, index, value);
    return *this;
  }

  // True while rows remain.
  bool Step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw std::runtime_error(std::string("sqlite step: ") +
                             sqlite3_errmsg(db_));
  }

  std::string Text(int column) const {
    const auto* data =
        reinterpret_cast<const char*>(sqlite3_column_text(stmt_, column));
    const int size = sqlite3_column_bytes(stmt_, column);
    return data ? std::string(data, size) : std::string();
  }
  int64_t Int(int column) const { return sqlite3_column_int64(stmt_, column); }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

void Exec(sqlite3* db, const char* sql) {
  char* message = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &message) != SQLITE_OK) {
    std::string text = message ? message : "unknown";
    sqlite3_free(message);
    throw std::runtime_error("sqlite exec: " + text);
  }
}

// Rolls back unless committed.
class Transaction {
 public:
  explicit Transaction(sqlite3* db) : db_(db) { Exec(db_, "BEGIN IMMEDIATE"); }
  ~Transaction() {
    if (!done_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void Commit() {
    Exec(db_, "COMMIT");
    done_ = true;
  }

 private:
  sqlite3* db_;
  bool done_ = false;
};

}  // namespace

Store::Store(const std::string& path) {
  const int flags =
      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX;
  if (sqlite3_open_v2(path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
    std::string message = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw std::runtime_error("cannot open store " + path + ": " + message);
  }
  sqlite3_busy_timeout(db_, 5000);
  Exec(db_, kSchema);
}

std::unique_ptr<Store> Store::OpenDirectory(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  return std::make_unique<Store>((dir / "wardflow.db").string());
}

Store::~Store() { sqlite3_close(db_); }

int64_t Store::PutWard(const std::string& ward_id,
                       const std::string& document) {
  LoadKnowledge(document, ward_id);
  std::unique_lock lock(mutex_);
  Transaction txn(db_);
  int64_t version = 1;
  {
    Statement select(db_, "SELECT version FROM wards WHERE id = ?1");
    select.Bind(1, ward_id);
    if (select.Step()) version = select.Int(0) + 1;
  }
  Statement upsert(db_,
                   "INSERT INTO wards (id, document, version) VALUES (?1, ?2, "
                   "?3) ON CONFLICT(id) DO UPDATE SET document = ?2, "
                   "version = ?3");
  upsert.Bind(1, ward_id).Bind(2, document).Bind(3, version);
  upsert.Step();
  txn.Commit();
  return version;
}

std::string Store::GetWardDocument(const std::string& ward_id) const {
  std::shared_lock lock(mutex_);
  Statement select(db_, "SELECT document FROM wards WHERE id = ?1");
  select.Bind(1, ward_id);
  if (!select.Step()) throw NotFoundError("ward", ward_id);
  return select.Text(0);
}

KnowledgeBase Store::GetWard(const std::string& ward_id) const {
  return LoadKnowledge(GetWardDocument(ward_id), ward_id);
}

bool Store::HasWard(const std::string& ward_id) const {
  std::shared_lock lock(mutex_);
  Statement select(db_, "SELECT 1 FROM wards WHERE id = ?1");
  select.Bind(1, ward_id);
  return select.Step();
}

Scenario Store::WriteScenario(Scenario scenario, bool must_exist,
                              bool must_not_exist, bool check_version) {
  const KnowledgeBase kb = GetWard(scenario.ward_ref);
  ValidateScenario(scenario, &kb);

  std::unique_lock lock(mutex_);
  Transaction txn(db_);
  std::optional<int64_t> stored_version;
  {
    Statement select(db_, "SELECT version FROM scenarios WHERE id = ?1");
    select.Bind(1, scenario.id);
    if (select.Step()) stored_version = select.Int(0);
  }
  if (must_exist && !stored_version) {
    throw NotFoundError("scenario", scenario.id);
  }
  if (must_not_exist && stored_version) {
    throw Error(ErrorCode::kVersionConflict,
                "scenario '" + scenario.id + "' already exists");
  }
  if (check_version && stored_version && *stored_version != scenario.version) {
    throw Error(ErrorCode::kVersionConflict,
                "scenario '" + scenario.id + "' is at version " +
                    std::to_string(*stored_version) + ", update was based on " +
                    std::to_string(scenario.version));
  }
  scenario.version = stored_version.value_or(0) + 1;
  Statement upsert(db_,
                   "INSERT INTO scenarios (id, payload, version) VALUES (?1, "
                   "?2, ?3) ON CONFLICT(id) DO UPDATE SET payload = ?2, "
                   "version = ?3");
  upsert.Bind(1, scenario.id)
      .Bind(2, ScenarioToJson(scenario))
      .Bind(3, scenario.version);
  upsert.Step();
  txn.Commit();
  return scenario;
}

Scenario Store::CreateScenario(Scenario scenario) {
  return WriteScenario(std::move(scenario), false, true, false);
}

Scenario Store::UpdateScenario(Scenario scenario) {
  return WriteScenario(std::move(scenario), true, false, true);
}

Scenario Store::PutScenario(Scenario scenario) {
  return WriteScenario(std::move(scenario), false, false, false);
}

Scenario Store::ReadScenario(const std::string& scenario_id) const {
  std::shared_lock lock(mutex_);
  Statement select(db_, "SELECT payload FROM scenarios WHERE id = ?1");
  select.Bind(1, scenario_id);
  if (!select.Step()) throw NotFoundError("scenario", scenario_id);
  return ScenarioFromJson(select.Text(0));
}

void Store::DeleteScenario(const std::string& scenario_id) {
  std::unique_lock lock(mutex_);
  Transaction txn(db_);
  Statement remove(db_, "DELETE FROM scenarios WHERE id = ?1");
  remove.Bind(1, scenario_id);
  remove.Step();
  if (sqlite3_changes(db_) == 0) throw NotFoundError("scenario", scenario_id);
  txn.Commit();
}

std::vector<std::string> Store::ListScenarios() const {
  std::shared_lock lock(mutex_);
  Statement select(db_, "SELECT id FROM scenarios ORDER BY id");
  std::vector<std::string> ids;
  while (select.Step()) ids.push_back(select.Text(0));
  return ids;
}

Scenario Store::IngestPatients(const std::string& csv,
                               const std::string& scenario_id,
                               const std::string& ward_ref,
                               std::optional<int> horizon_days) {
  const KnowledgeBase kb = GetWard(ward_ref);
  Scenario scenario =
      ParsePatientCsv(csv, scenario_id, ward_ref, &kb, horizon_days);
  return PutScenario(std::move(scenario));
}

void Store::PutPlan(const std::string& plan_id, const std::string& scenario_id,
                    const std::string& document) {
  std::unique_lock lock(mutex_);
  Transaction txn(db_);
  {
    Statement select(db_, "SELECT 1 FROM scenarios WHERE id = ?1");
    select.Bind(1, scenario_id);
    if (!select.Step()) throw NotFoundError("scenario", scenario_id);
  }
  Statement upsert(db_,
                   "INSERT INTO plans (id, scenario_id, document) VALUES (?1, "
                   "?2, ?3) ON CONFLICT(id) DO UPDATE SET scenario_id = ?2, "
                   "document = ?3");
  upsert.Bind(1, plan_id).Bind(2, scenario_id).Bind(3, document);
  upsert.Step();
  txn.Commit();
}

std::string Store::GetPlan(const std::string& plan_id) const {
  std::shared_lock lock(mutex_);
  Statement select(db_, "SELECT document FROM plans WHERE id = ?1");
  select.Bind(1, plan_id);
  if (!select.Step()) throw NotFoundError("plan", plan_id);
  return select.Text(0);
}

bool Store::HasPlan(const std::string& plan_id) const {
  std::shared_lock lock(mutex_);
  Statement select(db_, "SELECT 1 FROM plans WHERE id = ?1");
  select.Bind(1, plan_id);
  return select.Step();
}

}  // namespace wardflow
