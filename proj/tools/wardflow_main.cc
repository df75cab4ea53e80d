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

// wardflow: command-line front end for the bed-allocation planner.

#include <pthread.h>
#include <signal.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wardflow/encoder.h"
#include "wardflow/error.h"
#include "wardflow/plan.h"
#include "wardflow/service.h"
#include "wardflow/simulator.h"
#include "wardflow/store.h"

namespace {

using namespace wardflow;

std::string ReadAll(const std::string& path) {
  if (path == "-") {
    std::ostringstream text;
    text << std::cin.rdbuf();
    return text.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteAll(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kValidation, "cannot write " + path);
  out << text;
}

PlanConfig MakeConfig(bool parallel, std::optional<double> budget_secs,
                      bool clear_after_skip) {
  PlanConfig config;
  config.simulation.parallel_tasks = parallel;
  if (budget_secs) {
    config.budget = std::chrono::milliseconds(
        static_cast<int64_t>(*budget_secs * 1000));
  }
  if (clear_after_skip) config.after_skip = AfterSkip::kClear;
  return config;
}

struct StopAfterDay {};

// Runs the driver up to `day` so the problem carries the same standing
// assignment a full plan would, then stops.
std::pair<DailyAllocationProblem, DailyAllocation> DriveToDay(
    const Scenario& scenario, const KnowledgeBase& kb, const PlanConfig& config,
    int day) {
  std::optional<std::pair<DailyAllocationProblem, DailyAllocation>> seen;
  try {
    BuildPlan(scenario, kb, config,
              [&](const DailyAllocationProblem& problem,
                  const DailyAllocation& allocation) {
                if (problem.day != day) return;
                seen.emplace(problem, allocation);
                throw StopAfterDay{};
              });
  } catch (const StopAfterDay&) {
  }
  if (!seen) {
    throw Error(ErrorCode::kOutOfRange,
                "day " + std::to_string(day) + " is outside the plan");
  }
  return *seen;
}

std::string DayRecord(const Scenario& scenario, const KnowledgeBase& kb,
                      const PlanConfig& config,
                      const DailyAllocation& allocation) {
  AllocationPlan single;
  single.scenario_id = scenario.id;
  single.ward_id = kb.ward().id;
  single.config = config;
  single.days = {allocation};
  const auto doc = nlohmann::json::parse(PlanToDocument(single));
  return doc.at("days").at(0).dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wardflow: hospital bed allocation planner"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string data_dir = "wardflow-data";
  if (const char* env = std::getenv("WARDFLOW_DATA_DIR")) data_dir = env;
  app.add_option("--data-dir", data_dir, "Store directory")
      ->capture_default_str();

  std::string scenario_id;
  std::string ward_id = "default";
  std::string file;
  std::string out;
  int day = 1;
  bool parallel = false;
  bool clear_after_skip = false;
  std::optional<double> budget_secs;
  std::optional<int> horizon;

  auto* put_ward = app.add_subcommand("put-ward", "Store a ward knowledge base");
  put_ward->add_option("--ward", ward_id, "Ward id")->capture_default_str();
  put_ward->add_option("--file", file, "Knowledge document")->required();

  auto* ingest = app.add_subcommand("ingest", "Load a patient CSV as a scenario");
  ingest->add_option("--scenario", scenario_id)->required();
  ingest->add_option("--file", file, "CSV, or - for stdin")->required();
  ingest->add_option("--ward", ward_id)->capture_default_str();
  ingest->add_option("--horizon", horizon, "Horizon in days");

  GeneratorOptions gen;
  auto* gen_scenario =
      app.add_subcommand("gen-scenario", "Generate and store a scenario");
  gen_scenario->add_option("--scenario", gen.scenario_id)->capture_default_str();
  gen_scenario->add_option("--ward", gen.ward_ref)->capture_default_str();
  gen_scenario->add_option("--patients", gen.patients)->capture_default_str();
  gen_scenario->add_option("--days", gen.days)->capture_default_str();
  gen_scenario->add_option("--seed", gen.seed)->capture_default_str();
  gen_scenario->add_option("--contagion-rate", gen.contagion_rate)
      ->capture_default_str();
  gen_scenario->add_option("--out", out, "Also write the patient CSV here");

  auto* simulate = app.add_subcommand("simulate", "Export the bed-need timeline");
  simulate->add_option("--scenario", scenario_id)->required();
  simulate->add_flag("--parallel-tasks", parallel);
  simulate->add_option("--out", out, "Timeline CSV (default stdout)");

  auto* encode = app.add_subcommand("encode", "Dump one day's constraint system");
  encode->add_option("--scenario", scenario_id)->required();
  encode->add_option("--day", day)->required();
  encode->add_flag("--parallel-tasks", parallel);
  encode->add_option("--dump", out, "Output path (default stdout)");

  auto* solve_day = app.add_subcommand("solve-day", "Solve a single day");
  solve_day->add_option("--scenario", scenario_id)->required();
  solve_day->add_option("--day", day)->required();
  solve_day->add_flag("--parallel-tasks", parallel);
  solve_day->add_option("--budget-secs", budget_secs);

  auto* plan = app.add_subcommand("plan", "Run and store a full plan");
  plan->add_option("--scenario", scenario_id)->required();
  plan->add_flag("--parallel-tasks", parallel);
  plan->add_option("--budget-secs", budget_secs);
  plan->add_flag("--clear-after-skip", clear_after_skip,
                 "Drop the standing assignment after a skipped day");
  plan->add_option("--out", out, "Plan document (default stdout)");

  std::string plan_a;
  std::string plan_b;
  bool allow_disjoint = false;
  auto* diff = app.add_subcommand("diff", "Compare two stored plans");
  diff->add_option("a", plan_a)->required();
  diff->add_option("b", plan_b)->required();
  diff->add_flag("--allow-disjoint", allow_disjoint);

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const std::unique_ptr<Store> store = Store::OpenDirectory(data_dir);
    const PlanConfig config = MakeConfig(parallel, budget_secs, clear_after_skip);
    const auto load = [&] {
      Scenario scenario = store->ReadScenario(scenario_id);
      KnowledgeBase kb = store->GetWard(scenario.ward_ref);
      return std::make_pair(std::move(scenario), std::move(kb));
    };

    if (*put_ward) {
      const int64_t version = store->PutWard(ward_id, ReadAll(file));
      std::cout << ward_id << " version " << version << "\n";
    } else if (*ingest) {
      const Scenario scenario =
          store->IngestPatients(ReadAll(file), scenario_id, ward_id, horizon);
      std::cout << scenario.id << ": " << scenario.patients.size()
                << " patients over " << scenario.horizon_days << " days\n";
    } else if (*gen_scenario) {
      const KnowledgeBase kb = store->GetWard(gen.ward_ref);
      const Scenario scenario = store->PutScenario(GenerateScenario(kb, gen));
      if (!out.empty()) WriteAll(out, PatientsToCsv(scenario));
      std::cout << scenario.id << ": " << scenario.patients.size()
                << " patients over " << scenario.horizon_days << " days\n";
    } else if (*simulate) {
      const auto [scenario, kb] = load();
      WriteAll(out, TimelineToCsv(Simulate(scenario, kb, config.simulation)));
    } else if (*encode) {
      const auto [scenario, kb] = load();
      const auto [problem, allocation] = DriveToDay(scenario, kb, config, day);
      WriteAll(out, DumpConstraintSystem(Encode(problem)));
    } else if (*solve_day) {
      const auto [scenario, kb] = load();
      const auto [problem, allocation] = DriveToDay(scenario, kb, config, day);
      std::cout << DayRecord(scenario, kb, config, allocation);
    } else if (*plan) {
      const AllocationPlan result = RunPlan(*store, scenario_id, config);
      WriteAll(out, PlanToDocument(result));
      std::cerr << "days " << result.summary.total_days << ", moves "
                << result.summary.total_moves << ", infeasible "
                << result.summary.infeasible_days.size() << ", over budget "
                << result.summary.budget_exceeded_days.size() << "\n"
                << "simulation " << result.times.simulation << "s, encoding "
                << result.times.encoding << "s, solving "
                << result.times.solving << "s\n";
    } else if (*diff) {
      const PlanDiff result =
          DiffPlans(PlanFromDocument(store->GetPlan(plan_a)),
                    PlanFromDocument(store->GetPlan(plan_b)), allow_disjoint);
      std::cout << DiffToDocument(result);
    } else if (*serve) {
      ServiceOptions options;
      options.host = host;
      options.port = port;
      // Block the stop signals before any thread starts so they all inherit
      // the mask; the main thread then waits for one and shuts down cleanly.
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
      PlannerService service(*store, options);
      const int bound = service.Start();
      std::cerr << "listening on " << host << ":" << bound << std::endl;
      int received = 0;
      sigwait(&stop_signals, &received);
      service.Stop();
    }
  } catch (const Error& e) {
    std::cerr << "wardflow: " << ErrorCodeName(e.code()) << ": " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "wardflow: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
