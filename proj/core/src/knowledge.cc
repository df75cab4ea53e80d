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

#include "wardflow/knowledge.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

#include "text_util.h"
#include "wardflow/error.h"

namespace wardflow {
namespace {

using internal::ParseInt;
using internal::Split;
using internal::Tokenize;
using internal::Trim;

Error Invalid(const std::string& message) {
  return Error(ErrorCode::kValidation, message);
}

// Returns the first dependency cycle found as "a -> b -> a", or nullopt.
std::optional<std::string> FindCycle(const Treatment& treatment) {
  std::map<std::string, std::vector<std::string>> successors;
  for (const Dependency& dep : treatment.dependencies) {
    successors[dep.before].push_back(dep.after);
  }
  enum class Mark { kNone, kOnStack, kDone };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::optional<std::string> cycle;

  std::function<bool(const std::string&)> visit = [&](const std::string& id) {
    mark[id] = Mark::kOnStack;
    stack.push_back(id);
    for (const std::string& next : successors[id]) {
      if (mark[next] == Mark::kOnStack) {
        auto it = std::find(stack.begin(), stack.end(), next);
        std::string text;
        for (; it != stack.end(); ++it) text += *it + " -> ";
        cycle = text + next;
        return true;
      }
      if (mark[next] == Mark::kNone && visit(next)) return true;
    }
    stack.pop_back();
    mark[id] = Mark::kDone;
    return false;
  };
  for (const TaskSpec& task : treatment.tasks) {
    if (mark[task.id] == Mark::kNone && visit(task.id)) return cycle;
  }
  return std::nullopt;
}

}  // namespace

int Ward::TotalCapacity() const {
  return std::accumulate(
      rooms.begin(), rooms.end(), 0,
      [](int sum, const Room& room) { return sum + room.capacity; });
}

const Room* Ward::FindRoom(std::string_view room_id) const {
  for (const Room& room : rooms) {
    if (room.id == room_id) return &room;
  }
  return nullptr;
}

const TaskSpec* Treatment::FindTask(std::string_view task_id) const {
  for (const TaskSpec& task : tasks) {
    if (task.id == task_id) return &task;
  }
  return nullptr;
}

std::vector<std::string> Treatment::TopologicalOrder() const {
  std::map<std::string, int> in_degree;
  std::map<std::string, std::vector<std::string>> successors;
  for (const TaskSpec& task : tasks) in_degree[task.id] = 0;
  for (const Dependency& dep : dependencies) {
    ++in_degree[dep.after];
    successors[dep.before].push_back(dep.after);
  }
  std::priority_queue<std::string, std::vector<std::string>,
                      std::greater<std::string>>
      ready;
  for (const auto& [id, degree] : in_degree) {
    if (degree == 0) ready.push(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string id = ready.top();
    ready.pop();
    for (const std::string& next : successors[id]) {
      if (--in_degree[next] == 0) ready.push(next);
    }
    order.push_back(std::move(id));
  }
  return order;
}

KnowledgeBase::KnowledgeBase(std::vector<Category> categories, Ward ward,
                             std::vector<Treatment> treatments,
                             std::map<std::string, std::string> diagnoses)
    : categories_(std::move(categories)),
      ward_(std::move(ward)),
      diagnoses_(std::move(diagnoses)) {
  if (categories_.empty()) throw Invalid("no bed bay categories declared");
  std::sort(categories_.begin(), categories_.end(),
            [](const Category& a, const Category& b) {
              return a.level < b.level;
            });
  std::set<std::string> names;
  for (size_t i = 0; i < categories_.size(); ++i) {
    const Category& category = categories_[i];
    if (category.level < 0) {
      throw Invalid("category " + category.name + ": negative level");
    }
    if (!names.insert(category.name).second) {
      throw Invalid("category " + category.name + ": declared twice");
    }
    if (i > 0 && categories_[i - 1].level == category.level) {
      throw Invalid("categories " + categories_[i - 1].name + " and " +
                    category.name + " share level " +
                    std::to_string(category.level));
    }
  }
  const auto check_category = [&](const Category& category,
                                  const std::string& owner) {
    const Category& registered = CategoryNamed(category.name);
    if (registered.level != category.level) {
      throw Invalid(owner + ": category " + category.name +
                    " has a level that disagrees with the registry");
    }
  };

  if (ward_.rooms.empty()) throw Invalid("ward " + ward_.id + " has no rooms");
  std::set<std::string> room_ids;
  for (const Room& room : ward_.rooms) {
    if (!room_ids.insert(room.id).second) {
      throw Invalid("room " + room.id + ": duplicate room id");
    }
    if (room.capacity < 1) {
      throw Invalid("room " + room.id + ": capacity must be at least 1");
    }
    check_category(room.category, "room " + room.id);
  }

  for (Treatment& treatment : treatments) {
    const std::string owner = "treatment " + treatment.id;
    if (treatment.tasks.empty()) throw Invalid(owner + ": has no tasks");
    std::set<std::string> task_ids;
    for (const TaskSpec& task : treatment.tasks) {
      if (!task_ids.insert(task.id).second) {
        throw Invalid(owner + ": duplicate task " + task.id);
      }
      if (task.duration_days < 1) {
        throw Invalid(owner + ": task " + task.id +
                      " must last at least one day");
      }
      check_category(task.required_category, owner + " task " + task.id);
    }
    for (const Dependency& dep : treatment.dependencies) {
      for (const std::string* id : {&dep.before, &dep.after}) {
        if (!task_ids.count(*id)) {
          throw Invalid(owner + ": dependency references unknown task " + *id);
        }
      }
    }
    if (auto cycle = FindCycle(treatment)) {
      throw Invalid(owner + ": dependency cycle " + *cycle);
    }
    const std::string id = treatment.id;
    if (!treatments_.emplace(id, std::move(treatment)).second) {
      throw Invalid("treatment " + id + ": duplicate treatment id");
    }
  }

  for (const auto& [label, treatment_id] : diagnoses_) {
    if (!treatments_.count(treatment_id)) {
      throw Invalid("diagnosis " + label + ": unknown treatment " +
                    treatment_id);
    }
  }
}

const Category& KnowledgeBase::CategoryNamed(std::string_view name) const {
  for (const Category& category : categories_) {
    if (category.name == name) return category;
  }
  throw Invalid("unknown category '" + std::string(name) + "'");
}

const Treatment& KnowledgeBase::TreatmentFor(std::string_view diagnosis) const {
  const auto it = diagnoses_.find(std::string(diagnosis));
  if (it == diagnoses_.end()) {
    throw Error(ErrorCode::kUnknownDiagnosis,
                "unknown diagnosis '" + std::string(diagnosis) + "'");
  }
  return treatments_.at(it->second);
}

bool KnowledgeBase::HasDiagnosis(std::string_view diagnosis) const {
  return diagnoses_.count(std::string(diagnosis)) > 0;
}

namespace {

struct RawCategoryRef {
  std::string name;
  std::string owner;
};

// Splits "key=value"; throws on a missing '='.
std::pair<std::string_view, std::string_view> KeyValue(std::string_view token,
                                                       int line) {
  const size_t eq = token.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ParseError(line, "expected key=value, got '" + std::string(token) +
                               "'");
  }
  return {token.substr(0, eq), token.substr(eq + 1)};
}

int IntField(std::string_view text, int line, std::string_view what) {
  const auto value = ParseInt(text);
  if (!value) {
    throw ParseError(line, "invalid " + std::string(what) + " '" +
                               std::string(text) + "'");
  }
  return *value;
}

}  // namespace

KnowledgeBase LoadKnowledge(std::string_view document, std::string ward_id) {
  std::vector<Category> categories;
  bool saw_categories = false;
  Ward ward{std::move(ward_id), {}};
  std::vector<Treatment> treatments;
  std::map<std::string, std::string> diagnoses;
  std::vector<std::pair<std::string, RawCategoryRef>> room_refs;
  std::vector<std::pair<std::pair<size_t, size_t>, RawCategoryRef>> task_refs;
  std::optional<size_t> open_treatment;

  int line_no = 0;
  for (std::string_view raw : internal::Lines(document)) {
    ++line_no;
    const size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (Trim(raw).empty()) continue;
    const bool indented = raw.front() == ' ' || raw.front() == '\t';
    const std::vector<std::string_view> tokens = Tokenize(Trim(raw));
    const std::string_view keyword = tokens.front();

    if (indented) {
      if (!open_treatment) {
        throw ParseError(line_no, "indented line outside a treatment block");
      }
      Treatment& treatment = treatments[*open_treatment];
      if (keyword == "task") {
        if (tokens.size() != 4) {
          throw ParseError(line_no,
                           "expected: task <id> duration=<n>d category=<name>");
        }
        TaskSpec task;
        task.id = std::string(tokens[1]);
        std::optional<std::string> category;
        bool saw_duration = false;
        for (size_t i = 2; i < tokens.size(); ++i) {
          const auto [key, value] = KeyValue(tokens[i], line_no);
          if (key == "duration" && !saw_duration) {
            if (value.empty() || value.back() != 'd') {
              throw ParseError(line_no, "duration must be written as <n>d");
            }
            task.duration_days = IntField(value.substr(0, value.size() - 1),
                                             line_no, "duration");
            saw_duration = true;
          } else if (key == "category" && !category) {
            category = std::string(value);
          } else {
            throw ParseError(line_no,
                             "unexpected key '" + std::string(key) + "'");
          }
        }
        if (!saw_duration || !category) {
          throw ParseError(line_no, "task needs both duration and category");
        }
        task_refs.push_back(
            {{*open_treatment, treatment.tasks.size()},
             {*category, "treatment " + treatment.id + " task " + task.id}});
        treatment.tasks.push_back(std::move(task));
      } else if (keyword == "dep") {
        if (tokens.size() != 4 || tokens[2] != "->") {
          throw ParseError(line_no, "expected: dep <task_id> -> <task_id>");
        }
        treatment.dependencies.push_back(
            {std::string(tokens[1]), std::string(tokens[3])});
      } else {
        throw ParseError(line_no, "unknown key '" + std::string(keyword) +
                                      "' in treatment block");
      }
      continue;
    }

    open_treatment.reset();
    if (keyword == "categories:") {
      if (saw_categories) {
        throw ParseError(line_no, "categories declared twice");
      }
      saw_categories = true;
      const std::string_view rest = Trim(Trim(raw).substr(keyword.size()));
      for (std::string_view entry : Split(rest, ',')) {
        entry = Trim(entry);
        const auto [name, level] = KeyValue(entry, line_no);
        categories.push_back({std::string(Trim(name)),
                              IntField(Trim(level), line_no, "level")});
      }
    } else if (keyword == "room") {
      if (tokens.size() != 4) {
        throw ParseError(line_no,
                         "expected: room <id> capacity=<n> category=<name>");
      }
      Room room;
      room.id = std::string(tokens[1]);
      std::optional<std::string> category;
      bool saw_capacity = false;
      for (size_t i = 2; i < tokens.size(); ++i) {
        const auto [key, value] = KeyValue(tokens[i], line_no);
        if (key == "capacity" && !saw_capacity) {
          room.capacity = IntField(value, line_no, "capacity");
          saw_capacity = true;
        } else if (key == "category" && !category) {
          category = std::string(value);
        } else {
          throw ParseError(line_no,
                           "unexpected key '" + std::string(key) + "'");
        }
      }
      if (!saw_capacity || !category) {
        throw ParseError(line_no, "room needs both capacity and category");
      }
      room_refs.push_back({room.id, {*category, "room " + room.id}});
      ward.rooms.push_back(std::move(room));
    } else if (keyword == "treatment") {
      if (tokens.size() != 2 || tokens[1].size() < 2 ||
          tokens[1].back() != ':') {
        throw ParseError(line_no, "expected: treatment <id>:");
      }
      Treatment treatment;
      treatment.id = std::string(tokens[1].substr(0, tokens[1].size() - 1));
      treatments.push_back(std::move(treatment));
      open_treatment = treatments.size() - 1;
    } else if (keyword == "diagnosis") {
      if (tokens.size() != 4 || tokens[2] != "->") {
        throw ParseError(line_no, "expected: diagnosis <label> -> <treatment>");
      }
      const std::string label(tokens[1]);
      if (!diagnoses.emplace(label, std::string(tokens[3])).second) {
        throw Error(ErrorCode::kValidation,
                    "diagnosis " + label + ": mapped twice");
      }
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(keyword) + "'");
    }
  }

  const auto resolve = [&](const RawCategoryRef& ref) {
    for (const Category& category : categories) {
      if (category.name == ref.name) return category;
    }
    throw Error(ErrorCode::kValidation,
                ref.owner + ": unknown category '" + ref.name + "'");
  };
  for (size_t i = 0; i < room_refs.size(); ++i) {
    ward.rooms[i].category = resolve(room_refs[i].second);
  }
  for (const auto& [where, ref] : task_refs) {
    treatments[where.first].tasks[where.second].required_category =
        resolve(ref);
  }
  return KnowledgeBase(std::move(categories), std::move(ward),
                       std::move(treatments), std::move(diagnoses));
}

KnowledgeBase LoadKnowledgeFile(const std::filesystem::path& path,
                                std::string ward_id) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return LoadKnowledge(text.str(), std::move(ward_id));
}

std::string SerializeKnowledge(const KnowledgeBase& kb) {
  std::ostringstream out;
  out << "categories: ";
  for (size_t i = 0; i < kb.categories().size(); ++i) {
    const Category& category = kb.categories()[i];
    out << (i ? ", " : "") << category.name << "=" << category.level;
  }
  out << "\n";
  for (const Room& room : kb.ward().rooms) {
    out << "room " << room.id << " capacity=" << room.capacity
        << " category=" << room.category.name << "\n";
  }
  for (const auto& [id, treatment] : kb.treatments()) {
    out << "treatment " << id << ":\n";
    for (const TaskSpec& task : treatment.tasks) {
      out << "  task " << task.id << " duration=" << task.duration_days
          << "d category=" << task.required_category.name << "\n";
    }
    for (const Dependency& dep : treatment.dependencies) {
      out << "  dep " << dep.before << " -> " << dep.after << "\n";
    }
  }
  for (const auto& [label, treatment_id] : kb.diagnoses()) {
    out << "diagnosis " << label << " -> " << treatment_id << "\n";
  }
  return out.str();
}

}  // namespace wardflow
