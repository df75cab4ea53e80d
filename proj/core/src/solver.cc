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

#include "wardflow/solver.h"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wardflow/error.h"

namespace wardflow {

std::string_view StatusName(AllocationStatus status) {
  switch (status) {
    case AllocationStatus::kFeasible:
      return "Feasible";
    case AllocationStatus::kInfeasible:
      return "Infeasible";
    case AllocationStatus::kBudgetExceeded:
      return "BudgetExceeded";
  }
  return "Unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

// The encoded constraint lists reduced to per-patient and per-room tables.
struct Model {
  int num_patients = 0;
  int num_rooms = 0;
  int num_genders = 0;
  std::vector<int> capacity;                // [room]
  std::vector<std::vector<char>> allowed;   // [patient][room]
  std::vector<int> gender;                  // [patient]
  std::vector<char> isolated;               // [patient]
  std::vector<int> preferred;               // [patient], -1 if none
};

Model Compile(const ConstraintSystem& system) {
  Model model;
  model.num_patients = static_cast<int>(system.patient_ids.size());
  model.num_rooms = static_cast<int>(system.room_ids.size());
  model.num_genders = static_cast<int>(system.gender_labels.size());
  model.capacity.assign(model.num_rooms, model.num_patients);
  model.allowed.assign(model.num_patients,
                       std::vector<char>(model.num_rooms, 1));
  model.gender.assign(model.num_patients, -1);
  model.isolated.assign(model.num_patients, 0);
  model.preferred.assign(model.num_patients, -1);

  const auto assign_var = [&](Var v) -> const Variable& {
    const Variable& var = system.variables.at(v);
    if (var.kind != VarKind::kAssign) {
      throw std::logic_error("expected an assignment variable: " + var.name);
    }
    return var;
  };

  std::vector<int> exactly_one(model.num_patients, 0);
  for (const ExactlyOne& c : system.patient_constraints) {
    if (c.vars.size() != static_cast<size_t>(model.num_rooms)) {
      throw std::logic_error("patient constraint does not span all rooms");
    }
    int patient = assign_var(c.vars.front()).patient;
    for (Var v : c.vars) {
      if (assign_var(v).patient != patient) {
        throw std::logic_error("patient constraint mixes patients");
      }
    }
    ++exactly_one[patient];
  }
  for (int p = 0; p < model.num_patients; ++p) {
    if (exactly_one[p] != 1) {
      throw std::logic_error("patient " + system.patient_ids[p] +
                             " lacks an exactly-one constraint");
    }
  }
  for (const AtMost& c : system.room_constraints) {
    if (c.vars.empty()) continue;
    const int room = assign_var(c.vars.front()).room;
    for (Var v : c.vars) {
      if (assign_var(v).room != room) {
        throw std::logic_error("capacity constraint mixes rooms");
      }
    }
    model.capacity[room] = std::min(model.capacity[room], c.bound);
  }
  for (const GenderLink& c : system.gender_constraints) {
    const int patient = assign_var(c.assign).patient;
    if (model.gender[patient] >= 0 && model.gender[patient] != c.gender) {
      throw std::logic_error("patient " + system.patient_ids[patient] +
                             " linked to two genders");
    }
    model.gender[patient] = c.gender;
  }
  for (int p = 0; p < model.num_patients; ++p) {
    if (model.gender[p] < 0 && model.num_rooms > 0) {
      throw std::logic_error("patient " + system.patient_ids[p] +
                             " has no gender link");
    }
  }
  for (const Isolation& c : system.contagious_constraints) {
    model.isolated[assign_var(c.assign).patient] = 1;
  }
  for (const Forbidden& c : system.category_constraints) {
    const Variable& var = assign_var(c.assign);
    model.allowed[var.patient][var.room] = 0;
  }
  for (const ChangeClause& c : system.change_constraints) {
    const Variable& var = assign_var(c.stay);
    model.preferred[var.patient] = var.room;
  }
  return model;
}

// Min-cost flow by successive shortest paths (SPFA). Costs are 0/1 per unit,
// networks have a few hundred nodes.
class FlowNetwork {
 public:
  void Reset(int nodes) {
    edges_.clear();
    adjacency_.assign(nodes, {});
  }

  int AddEdge(int from, int to, int capacity, int cost) {
    adjacency_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, capacity, cost});
    adjacency_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0, -cost});
    return static_cast<int>(edges_.size()) - 2;
  }

  // Pushes as much flow as possible from s to t; returns {flow, cost}.
  std::pair<int, int> Run(int s, int t) {
    const int n = static_cast<int>(adjacency_.size());
    int flow = 0;
    int cost = 0;
    while (true) {
      dist_.assign(n, kUnreached);
      via_.assign(n, -1);
      queued_.assign(n, 0);
      queue_.clear();
      dist_[s] = 0;
      queue_.push_back(s);
      for (size_t head = 0; head < queue_.size(); ++head) {
        const int u = queue_[head];
        queued_[u] = 0;
        for (int e : adjacency_[u]) {
          const Edge& edge = edges_[e];
          if (edge.capacity == 0 || dist_[u] + edge.cost >= dist_[edge.to]) {
            continue;
          }
          dist_[edge.to] = dist_[u] + edge.cost;
          via_[edge.to] = e;
          if (!queued_[edge.to]) {
            queued_[edge.to] = 1;
            queue_.push_back(edge.to);
          }
        }
      }
      if (dist_[t] == kUnreached) break;
      int push = kUnreached;
      for (int v = t; v != s; v = edges_[via_[v] ^ 1].to) {
        push = std::min(push, edges_[via_[v]].capacity);
      }
      for (int v = t; v != s; v = edges_[via_[v] ^ 1].to) {
        edges_[via_[v]].capacity -= push;
        edges_[via_[v] ^ 1].capacity += push;
      }
      flow += push;
      cost += push * dist_[t];
    }
    return {flow, cost};
  }

  int FlowOn(int edge) const { return edges_[edge ^ 1].capacity; }

 private:
  static constexpr int kUnreached = 1 << 29;
  struct Edge {
    int to;
    int capacity;
    int cost;
  };
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> dist_;
  std::vector<int> via_;
  std::vector<char> queued_;
  std::vector<int> queue_;
};

// Exact search over room modes. Every room is either open (undecided), held
// by one gender, or reserved for a single contagious patient. With all modes
// fixed the placement is a transportation problem, so each node solves a
// min-cost flow in which open rooms accept anyone: that relaxation gives the
// node's move lower bound, and when no open room ends up mixed the flow is
// itself an allocation. Otherwise a mixed room is branched on.
class Search {
 public:
  Search(const Model& model, Clock::time_point deadline, SolveStats* stats)
      : m_(model),
        deadline_(deadline),
        stats_(stats),
        fixed_(model.num_patients, -1),
        isolation_mode_(model.num_genders) {
    BuildTwins();
  }

  // Minimum move count, or nullopt when no sound allocation exists.
  std::optional<int> Optimize() {
    if (!Explore(m_.num_patients + 1, -1)) return std::nullopt;
    incumbent_ = found_;
    return found_cost_;
  }

  // Lexicographically first allocation with at most `limit` moves, fixing
  // patients in order to the smallest room that still admits a completion.
  std::vector<int> FirstWithin(int limit) {
    std::vector<int> best = incumbent_;
    for (int p = 0; p < m_.num_patients; ++p) {
      int lowest = 0;
      if (patient_twin_[p] >= 0) lowest = fixed_[patient_twin_[p]];
      for (int r = lowest; r < best[p]; ++r) {
        if (!CompatibleWithFixed(p, r)) continue;
        fixed_[p] = r;
        if (Explore(limit + 1, limit)) {
          best = found_;
          break;
        }
        fixed_[p] = -1;
      }
      fixed_[p] = best[p];
    }
    return best;
  }

 private:
  // Patients with identical rows, gender, isolation and preferred room are
  // interchangeable, so the lexicographic optimum gives the earlier one the
  // smaller room.
  void BuildTwins() {
    patient_twin_.assign(m_.num_patients, -1);
    for (int p = 0; p < m_.num_patients; ++p) {
      for (int q = p - 1; q >= 0; --q) {
        if (m_.allowed[q] == m_.allowed[p] && m_.gender[q] == m_.gender[p] &&
            m_.isolated[q] == m_.isolated[p] &&
            m_.preferred[q] == m_.preferred[p]) {
          patient_twin_[p] = q;
          break;
        }
      }
    }
  }

  bool CompatibleWithFixed(int p, int r) const {
    if (!m_.allowed[p][r]) return false;
    int occupants = 0;
    for (int q = 0; q < m_.num_patients; ++q) {
      if (q == p || fixed_[q] != r) continue;
      ++occupants;
      if (m_.isolated[q] || m_.isolated[p]) return false;
      if (m_.gender[q] != m_.gender[p]) return false;
    }
    return occupants < m_.capacity[r];
  }

  void Tick() {
    ++nodes_;
    if (stats_ != nullptr) stats_->nodes = nodes_;
    if ((nodes_ & 63) == 1 && Clock::now() >= deadline_) {
      throw Error(ErrorCode::kBudgetExceeded, "solver time budget exceeded");
    }
  }

  // Searches for an allocation cheaper than `bound` that respects the fixed
  // patients. Stops early once one costing at most `target` is found. On
  // success found_ / found_cost_ hold the best allocation seen.
  bool Explore(int bound, int target) {
    std::vector<int> modes(m_.num_rooms, kOpen);
    for (int p = 0; p < m_.num_patients; ++p) {
      const int r = fixed_[p];
      if (r < 0) continue;
      const int want = m_.isolated[p] ? isolation_mode_ : m_.gender[p];
      if (modes[r] != kOpen && (modes[r] != want || m_.isolated[p])) {
        return false;
      }
      modes[r] = want;
    }
    BuildGroups();
    best_cost_ = bound;
    target_ = target;
    found_.clear();
    found_any_ = false;
    root_bound_ = -1;
    Descend(modes);
    return found_any_;
  }

  // Patients sharing every attribute the flow sees become one supply node.
  void BuildGroups() {
    groups_.clear();
    group_of_.assign(m_.num_patients, -1);
    for (int p = 0; p < m_.num_patients; ++p) {
      for (size_t k = 0; k < groups_.size() && group_of_[p] < 0; ++k) {
        const int q = groups_[k].front();
        if (fixed_[q] == fixed_[p] && m_.allowed[q] == m_.allowed[p] &&
            m_.gender[q] == m_.gender[p] &&
            m_.isolated[q] == m_.isolated[p] &&
            m_.preferred[q] == m_.preferred[p]) {
          group_of_[p] = static_cast<int>(k);
        }
      }
      if (group_of_[p] < 0) {
        group_of_[p] = static_cast<int>(groups_.size());
        groups_.emplace_back();
      }
      groups_[group_of_[p]].push_back(p);
    }
  }

  bool Admits(int mode, int p) const {
    if (mode == kOpen) return true;
    if (mode == isolation_mode_) return m_.isolated[p];
    return !m_.isolated[p] && m_.gender[p] == mode;
  }

  // Returns true when the search may stop.
  bool Descend(std::vector<int>& modes) {
    Tick();
    const int num_groups = static_cast<int>(groups_.size());
    const int sink = 1 + num_groups + m_.num_rooms;
    network_.Reset(sink + 1);
    for (int k = 0; k < num_groups; ++k) {
      network_.AddEdge(0, 1 + k, static_cast<int>(groups_[k].size()), 0);
    }
    arcs_.clear();
    for (int k = 0; k < num_groups; ++k) {
      const int p = groups_[k].front();
      for (int r = 0; r < m_.num_rooms; ++r) {
        if (!m_.allowed[p][r] || !Admits(modes[r], p)) continue;
        if (fixed_[p] >= 0 && fixed_[p] != r) continue;
        const int cost = m_.preferred[p] >= 0 && m_.preferred[p] != r;
        arcs_.push_back({k, r,
                         network_.AddEdge(1 + k, 1 + num_groups + r,
                                          static_cast<int>(groups_[k].size()),
                                          cost)});
      }
    }
    for (int r = 0; r < m_.num_rooms; ++r) {
      const int cap = modes[r] == isolation_mode_ ? 1 : m_.capacity[r];
      network_.AddEdge(1 + num_groups + r, sink, cap, 0);
    }
    const auto [flow, cost] = network_.Run(0, sink);
    if (flow < m_.num_patients || cost >= best_cost_) return false;
    if (root_bound_ < 0) root_bound_ = cost;

    // Occupancy of each room in the relaxed solution.
    std::vector<std::vector<std::pair<int, int>>> in_room(m_.num_rooms);
    for (const Arc& arc : arcs_) {
      const int units = network_.FlowOn(arc.edge);
      if (units > 0) in_room[arc.room].push_back({arc.group, units});
    }
    int branch_room = -1;
    int branch_load = 0;
    std::vector<int> load(m_.num_genders + 1, 0);
    std::vector<int> branch_by_mode;
    for (int r = 0; r < m_.num_rooms; ++r) {
      if (modes[r] != kOpen || in_room[r].empty()) continue;
      std::fill(load.begin(), load.end(), 0);
      int total = 0;
      for (const auto& [group, units] : in_room[r]) {
        const int p = groups_[group].front();
        load[m_.isolated[p] ? isolation_mode_ : m_.gender[p]] += units;
        total += units;
      }
      const bool pure =
          load[isolation_mode_] == 0
              ? std::count(load.begin(), load.end(), 0) >=
                    static_cast<int>(load.size()) - 1
              : total == 1;
      if (!pure && total > branch_load) {
        branch_room = r;
        branch_load = total;
        branch_by_mode = load;
      }
    }

    if (branch_room < 0) {
      Record(in_room, cost);
      return best_cost_ <= std::max(target_, root_bound_);
    }

    // Try the modes the relaxation leaned on first; skip modes nobody
    // unfixed could use, since an empty room fits any remaining branch.
    std::vector<int> order;
    for (int mode = 0; mode <= isolation_mode_; ++mode) {
      bool usable = false;
      for (int p = 0; p < m_.num_patients && !usable; ++p) {
        usable = fixed_[p] < 0 && m_.allowed[p][branch_room] &&
                 Admits(mode, p);
      }
      if (usable) order.push_back(mode);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return branch_by_mode[a] > branch_by_mode[b];
    });
    for (int mode : order) {
      modes[branch_room] = mode;
      const bool stop = Descend(modes);
      modes[branch_room] = kOpen;
      if (stop) return true;
    }
    return false;
  }

  // Hands each group's rooms to its patients in id order.
  void Record(const std::vector<std::vector<std::pair<int, int>>>& in_room,
              int cost) {
    found_.assign(m_.num_patients, -1);
    std::vector<size_t> next(groups_.size(), 0);
    for (int r = 0; r < m_.num_rooms; ++r) {
      for (const auto& [group, units] : in_room[r]) {
        for (int u = 0; u < units; ++u) {
          found_[groups_[group][next[group]++]] = r;
        }
      }
    }
    found_cost_ = cost;
    found_any_ = true;
    best_cost_ = cost;
  }

  static constexpr int kOpen = -1;

  struct Arc {
    int group;
    int room;
    int edge;
  };

  const Model& m_;
  Clock::time_point deadline_;
  SolveStats* stats_;
  int64_t nodes_ = 0;

  std::vector<int> fixed_;
  const int isolation_mode_;
  std::vector<int> patient_twin_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;
  FlowNetwork network_;
  std::vector<Arc> arcs_;

  int best_cost_ = 0;
  int target_ = -1;
  int root_bound_ = -1;
  std::vector<int> found_;
  int found_cost_ = 0;
  bool found_any_ = false;
  std::vector<int> incumbent_;
};

}  // namespace

DailyAllocation Solve(const ConstraintSystem& system,
                      const SolveOptions& options, SolveStats* stats) {
  DailyAllocation allocation;
  allocation.day = system.day;
  if (system.room_ids.empty()) {
    allocation.status = system.patient_ids.empty()
                            ? AllocationStatus::kFeasible
                            : AllocationStatus::kInfeasible;
    return allocation;
  }
  const Model model = Compile(system);

  Search search(model, Clock::now() + options.budget, stats);
  const std::optional<int> minimum = search.Optimize();
  if (!minimum) {
    allocation.status = AllocationStatus::kInfeasible;
    return allocation;
  }
  const std::vector<int> rooms = search.FirstWithin(*minimum);
  if (rooms.size() != static_cast<size_t>(model.num_patients)) {
    throw std::logic_error("optimal allocation vanished in tie-break pass");
  }
  if (stats != nullptr) stats->minimum_moves = *minimum;

  Valuation values(system.num_variables(), 0);
  allocation.status = AllocationStatus::kFeasible;
  for (int p = 0; p < model.num_patients; ++p) {
    const int r = rooms[p];
    const std::string& patient = system.patient_ids[p];
    const std::string& room = system.room_ids[r];
    allocation.assignment[patient] = room;
    allocation.room_gender[room] = system.gender_labels[model.gender[p]];
    values[system.assign[p][r]] = 1;
    values[system.room_gender[r]] = model.gender[p];
    if (system.moved[p] && system.previous_room[p] != r) {
      allocation.moves.insert(patient);
      values[*system.moved[p]] = 1;
    }
  }
  if (!system.Satisfied(values) ||
      system.Objective(values) != *minimum) {
    throw std::logic_error("solver produced a model violating the system");
  }
  return allocation;
}

}  // namespace wardflow
