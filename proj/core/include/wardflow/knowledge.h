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

#ifndef WARDFLOW_KNOWLEDGE_H_
#define WARDFLOW_KNOWLEDGE_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wardflow {

// A bed bay category. Lower level means stricter care (HighMonitoring = 0).
struct Category {
  std::string name;
  int level = 0;

  friend bool operator==(const Category&, const Category&) = default;
};

// True iff `a` is at least as strict as `b`. A room of category `a` can
// serve a patient whose need is `b` exactly when CategoryLeq(a, b).
inline bool CategoryLeq(const Category& a, const Category& b) {
  return a.level <= b.level;
}

struct Room {
  std::string id;
  int capacity = 1;
  Category category;

  friend bool operator==(const Room&, const Room&) = default;
};

struct Ward {
  std::string id;
  std::vector<Room> rooms;

  int TotalCapacity() const;
  const Room* FindRoom(std::string_view room_id) const;

  friend bool operator==(const Ward&, const Ward&) = default;
};

struct TaskSpec {
  std::string id;
  int duration_days = 1;
  Category required_category;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

// `after` may only start once `before` has completed.
struct Dependency {
  std::string before;
  std::string after;

  friend bool operator==(const Dependency&, const Dependency&) = default;
};

struct Treatment {
  std::string id;
  std::vector<TaskSpec> tasks;
  std::vector<Dependency> dependencies;

  const TaskSpec* FindTask(std::string_view task_id) const;

  // Kahn's algorithm, smallest task id first among ready tasks. Requires the
  // dependency relation to be acyclic.
  std::vector<std::string> TopologicalOrder() const;

  friend bool operator==(const Treatment&, const Treatment&) = default;
};

// Ward structure plus treatment definitions. Immutable once constructed; the
// constructor enforces every cross-reference and the DAG property.
class KnowledgeBase {
 public:
  KnowledgeBase(std::vector<Category> categories, Ward ward,
                std::vector<Treatment> treatments,
                std::map<std::string, std::string> diagnoses);

  // Sorted by level.
  const std::vector<Category>& categories() const { return categories_; }
  const Ward& ward() const { return ward_; }
  const std::map<std::string, Treatment>& treatments() const {
    return treatments_;
  }
  // diagnosis label -> treatment id
  const std::map<std::string, std::string>& diagnoses() const {
    return diagnoses_;
  }

  // Throws Error(kValidation) for unregistered names.
  const Category& CategoryNamed(std::string_view name) const;

  // Throws Error(kUnknownDiagnosis) naming the label.
  const Treatment& TreatmentFor(std::string_view diagnosis) const;

  bool HasDiagnosis(std::string_view diagnosis) const;

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;

 private:
  std::vector<Category> categories_;
  Ward ward_;
  std::map<std::string, Treatment> treatments_;
  std::map<std::string, std::string> diagnoses_;
};

// Parses a knowledge document:
//
//   categories: HighMonitoring=0, Intermediate=1, Standard=2
//   room <room_id> capacity=<int> category=<name>
//   treatment <treatment_id>:
//     task <task_id> duration=<int>d category=<name>
//     dep <task_id> -> <task_id>
//   diagnosis <label> -> <treatment_id>
//
// `#` starts a comment. Task and dep lines must be indented and belong to the
// nearest preceding treatment header. Anything else is a ParseError; broken
// references, duplicates and cycles raise Error(kValidation).
KnowledgeBase LoadKnowledge(std::string_view document, std::string ward_id);
KnowledgeBase LoadKnowledgeFile(const std::filesystem::path& path,
                                std::string ward_id);

// Canonical document form; LoadKnowledge(SerializeKnowledge(kb), id) == kb.
std::string SerializeKnowledge(const KnowledgeBase& kb);

}  // namespace wardflow

#endif  // WARDFLOW_KNOWLEDGE_H_
