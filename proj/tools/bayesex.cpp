// Copyright 2026 The bayesex Authors.
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


// Command-line simulator.
//
//   bayesex check SCENARIO
//   bayesex benchmark SCENARIO [--delta P/Q]
//   bayesex explorable SCENARIO [--state NAME] [--delta P/Q]
//   bayesex run SCENARIO --rounds T --seed N [--delta P/Q] [--out DIR]
//               [--trials K] [--workers W] [--state NAME]
//
// Without --out, run prints the report CSV instead of writing files.
//
// Exit status: 0 success, 1 scenario or usage error, 2 no delta-BIC policy.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bayesex/errors.hpp"
#include "bayesex/explore_det.hpp"
#include "bayesex/harness.hpp"
#include "bayesex/scenario.hpp"

namespace fs = std::filesystem;
using namespace bayesex;

namespace {

constexpr int kScenarioError = 1;
constexpr int kInfeasible = 2;

std::string with_decimal(const Rational& r) {
  std::ostringstream os;
  os << to_string(r) << " (" << to_double(r) << ")";
  return os.str();
}

Scenario load_valid(const std::string& path) {
  Scenario sc = load_scenario(path);
  require_valid(sc.game);
  return sc;
}

std::optional<std::size_t> resolve_state(const Scenario& sc,
                                         const std::string& name) {
  if (name.empty()) return sc.fixed_state;
  auto index = sc.game.state_index(name);
  if (!index) throw ScenarioError("unknown state \"" + name + "\"");
  return index;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_check(const std::string& path) {
  Scenario sc = load_scenario(path);
  const auto problems = validate(sc.game);
  if (!problems.empty()) {
    for (const auto& p : problems) std::cout << "error: " << p << "\n";
    return kScenarioError;
  }
  std::cout << "ok: " << sc.game.num_agents() << " agent(s), "
            << sc.game.num_joint_actions() << " joint actions, "
            << sc.game.num_states() << " states, noise "
            << to_string(sc.noise.kind) << "\n";
  if (auto zeta = separation_parameter(sc.game))
    std::cout << "separation parameter: " << with_decimal(*zeta) << "\n";
  else
    std::cout << "separation parameter: undefined (utilities ignore the state)\n";
  return 0;
}

int cmd_benchmark(const std::string& path, const std::string& delta) {
  Scenario sc = load_valid(path);
  std::cout << with_decimal(benchmark(sc.game, parse_rational(delta))) << "\n";
  return 0;
}

int cmd_explorable(const std::string& path, const std::string& state,
                   const std::string& delta) {
  Scenario sc = load_valid(path);
  const auto sets = explorable_fixed_point(sc.game, parse_rational(delta));
  if (auto k = resolve_state(sc, state)) {
    std::cout << format_action_set(sc.game, sets[*k]) << "\n";
  } else {
    for (std::size_t k = 0; k < sc.game.num_states(); ++k)
      std::cout << sc.game.states[k] << ": " << format_action_set(sc.game, sets[k])
                << "\n";
  }
  return 0;
}

struct RunOptions {
  std::string scenario;
  std::size_t rounds = 0;
  std::uint64_t seed = 0;
  std::string delta;
  std::string out;
  std::size_t trials = 1;
  std::size_t workers = 0;
  std::string state;
};

template <class Pipeline>
int emit(const Scenario& sc, const Pipeline& pipeline, const RunOptions& opt) {
  const auto state = resolve_state(sc, opt.state);
  const bool to_files = !opt.out.empty();
  if (to_files) fs::create_directories(opt.out);
  const bool many = opt.trials > 1;
  TrialSummary summary;
  if (many) {
    summary = run_trials(pipeline, opt.trials, opt.seed, state, opt.workers,
                         /*keep_traces=*/true);
  } else {
    summary.episodes.push_back(pipeline.run(opt.seed, state));
    summary.aggregate = summary.episodes.front().report;
  }

  std::string csv = report_csv_header() + "\n";
  bool audits = true;
  for (std::size_t k = 0; k < summary.episodes.size(); ++k) {
    const EpisodeResult& e = summary.episodes[k];
    const std::string name =
        many ? "trace_" + std::to_string(k) + ".json" : "trace.json";
    if (to_files) write_file(fs::path(opt.out) / name, episode_to_json(sc.game, e));
    csv += report_csv_row(e.report) + "\n";
    audits = audits && e.audit_pass;
  }
  const std::string summary_csv =
      report_csv_header() + "\n" + report_csv_row(summary.aggregate) + "\n";
  if (!to_files) {
    std::cout << (many ? summary_csv : csv);
  } else {
    write_file(fs::path(opt.out) / "report.csv", csv);
    if (many) write_file(fs::path(opt.out) / "summary.csv", summary_csv);
  }

  for (const auto& note : summary.episodes.front().premise_notes)
    std::cerr << "premise: " << note << "\n";
  if (!audits) std::cerr << "warning: a phase failed the incentive audit\n";

  if (!to_files) return 0;
  const RegretReport& r = summary.aggregate;
  std::cout << "T=" << r.horizon << " T0=" << r.exploration
            << " benchmark=" << with_decimal(r.benchmark);
  if (r.analytic) {
    std::cout << " expected_reward=" << with_decimal(r.exact_reward)
              << " regret=" << with_decimal(r.exact_regret);
  } else {
    std::cout << " reward=" << r.reward;
    if (many) std::cout << " +- " << r.reward_stderr;
    std::cout << " regret=" << r.regret();
  }
  std::cout << "\n";
  return 0;
}

int cmd_run(const RunOptions& opt) {
  Scenario sc = load_valid(opt.scenario);
  const Rational delta = opt.delta.empty() ? Rational(0) : parse_rational(opt.delta);
  const bool stochastic =
      delta > 0 || sc.noise.kind != NoiseModel::Kind::kDeterministic;
  if (!stochastic) return emit(sc, DeterministicPipeline(sc.game, opt.rounds), opt);
  if (delta <= 0)
    throw ScenarioError("noisy scenarios need a positive --delta");
  return emit(sc, StochasticPipeline(sc.game, sc.noise, opt.rounds, delta), opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incentive-compatible exploration simulator"};
  app.require_subcommand(1);

  std::string path;
  std::string delta = "0";
  std::string state;

  auto* check = app.add_subcommand("check", "Validate a scenario file");
  check->add_option("scenario", path, "Scenario JSON")->required();

  auto* bench = app.add_subcommand("benchmark", "Optimal BIC reward");
  bench->add_option("scenario", path, "Scenario JSON")->required();
  bench->add_option("--delta", delta, "Incentive margin P/Q");

  auto* expl = app.add_subcommand("explorable", "Eventually-explorable actions");
  expl->add_option("scenario", path, "Scenario JSON")->required();
  expl->add_option("--state", state, "State name (default: all states)");
  expl->add_option("--delta", delta, "Incentive margin P/Q");

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Simulate explore-then-exploit episodes");
  run->add_option("scenario", run_opt.scenario, "Scenario JSON")->required();
  run->add_option("--rounds", run_opt.rounds, "Horizon T")->required();
  run->add_option("--seed", run_opt.seed, "Episode seed")->required();
  run->add_option("--delta", run_opt.delta, "Incentive margin P/Q (noisy path)");
  run->add_option("--out", run_opt.out, "Output directory (default: CSV to stdout)");
  run->add_option("--trials", run_opt.trials, "Number of episodes")
      ->check(CLI::PositiveNumber);
  run->add_option("--workers", run_opt.workers, "Worker threads (0: all cores)");
  run->add_option("--state", run_opt.state, "Fix the hidden state");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(path);
    if (*bench) return cmd_benchmark(path, delta);
    if (*expl) return cmd_explorable(path, state, delta);
    if (*run) return cmd_run(run_opt);
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ValidationError& e) {
    for (const auto& p : e.problems()) std::cerr << "error: " << p << "\n";
    return kScenarioError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kScenarioError;
  }
  return 0;
}
