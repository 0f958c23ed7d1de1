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


#include "bayesex/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "bayesex/errors.hpp"

namespace bayesex {

AuditReport audit_bic(const UtilityStructure& game,
                      const SignalStructure& structure,
                      const PolicyTable& table, const Rational& delta) {
  AuditReport report;
  report.delta = delta;
  for (std::size_t i = 0; i < game.num_agents(); ++i) {
    const std::size_t own = game.actions[i].size();
    for (std::size_t a = 0; a < own; ++a) {
      const Rational mass =
          delta == 0 ? Rational(0)
                     : Rational(recommendation_mass(game, structure, table, i, a));
      for (std::size_t b = 0; b < own; ++b) {
        if (a == b) continue;
        AuditEntry e;
        e.agent = i;
        e.action = a;
        e.deviation = b;
        e.margin = conditional_gain(game, structure, table, i, a, b) - delta * mass;
        e.pass = e.margin >= 0;
        report.entries.push_back(std::move(e));
      }
    }
  }
  return report;
}

bool audit_trace(const UtilityStructure& game, EpisodeTrace& trace) {
  bool all = true;
  for (auto& phase : trace.phases) {
    phase.audit = audit_bic(game, *phase.structure, phase.distribution, phase.delta);
    phase.audited = true;
    all = all && phase.audit.pass();
  }
  for (auto& round : trace.rounds)
    round.audit_pass = trace.phases.at(round.phase).audit.pass();
  return all;
}

Rational benchmark(const UtilityStructure& game, const Rational& delta) {
  if (delta < 0) throw std::invalid_argument("delta must be nonnegative");
  const auto sets = explorable_fixed_point(game, delta);
  return optimal_policy(game, all_info(game, sets), delta).reward;
}

double RegretReport::regret() const {
  if (analytic) return to_double(exact_regret);
  return static_cast<double>(horizon) * to_double(benchmark) - reward;
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

namespace {

std::size_t pick_state(const UtilityStructure& game,
                       std::optional<std::size_t> state, Rng& rng) {
  if (state) {
    if (*state >= game.num_states())
      throw std::out_of_range("state index out of range");
    if (game.prior[*state] == 0)
      throw std::invalid_argument("state " + game.states[*state] +
                                  " has zero prior probability");
    return *state;
  }
  std::vector<double> weights(game.num_states());
  for (std::size_t k = 0; k < weights.size(); ++k)
    weights[k] = to_double(game.prior[k]);
  return rng.categorical(weights);
}

double realized_reward(const EpisodeTrace& trace) {
  double total = 0.0;
  for (const auto& r : trace.rounds) total += to_double(r.outcome.front());
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// Deterministic path

DeterministicPipeline::DeterministicPipeline(const UtilityStructure& game,
                                             std::size_t horizon)
    : game_(&game), horizon_(horizon), plan_(plan_ind_max(game)) {
  if (horizon < plan_.duration)
    throw std::invalid_argument(
        "horizon T=" + std::to_string(horizon) +
        " is shorter than the exploration length T0=" +
        std::to_string(plan_.duration));
  optimum_ = optimal_policy(game, *plan_.structures.back(), 0);
  expected_reward_ = 0;
  for (std::size_t l = 0; l < plan_.phases.size(); ++l) {
    const MaxExPlan& phase = plan_.phases[l];
    expected_reward_ += Rational(static_cast<unsigned long>(phase.duration)) *
                        bayesex::expected_reward(game, *phase.structure, phase.policy.table);
  }
  expected_reward_ +=
      Rational(static_cast<unsigned long>(horizon - plan_.duration)) * optimum_.reward;
}

EpisodeResult DeterministicPipeline::run(std::uint64_t seed,
                                         std::optional<std::size_t> state) const {
  const UtilityStructure& game = *game_;
  Rng rng(seed);
  EpisodeResult result;
  EpisodeTrace& trace = result.trace;
  trace.state = pick_state(game, state, rng);
  trace.seed = seed;
  trace.horizon = horizon_;

  SimulatedEnvironment env(game, trace.state);
  RunContext ctx{env, rng, trace};
  const Subroutine episode =
      compose(make_ind_max(game, plan_),
              make_exploit(plan_.structures.back(), optimum_.table,
                           horizon_ - plan_.duration));
  episode.run(empty_realization(game), ctx);

  for (std::size_t l = 0; l < plan_.phases.size(); ++l) {
    const std::size_t s = trace.phases.at(l + 1).realized_signal;
    result.explored_chain.push_back(plan_.structures[l + 1]->values.at(s).explored);
  }
  result.exploit_reward = optimum_.reward;
  result.audit_pass = audit_trace(game, trace);

  RegretReport& r = result.report;
  r.horizon = horizon_;
  r.exploration = plan_.duration;
  r.benchmark = optimum_.reward;
  r.delta = 0;
  r.seed = seed;
  r.analytic = true;
  r.exact_reward = expected_reward_;
  r.exact_regret =
      Rational(static_cast<unsigned long>(horizon_)) * optimum_.reward - expected_reward_;
  r.reward = to_double(expected_reward_);
  return result;
}

EpisodeResult run_deterministic_pipeline(const UtilityStructure& game,
                                         std::size_t horizon,
                                         std::optional<std::size_t> state,
                                         std::uint64_t seed) {
  return DeterministicPipeline(game, horizon).run(seed, state);
}

// ---------------------------------------------------------------------------
// Stochastic path

StochasticPipeline::StochasticPipeline(const UtilityStructure& game,
                                       NoiseModel noise, std::size_t horizon,
                                       const Rational& delta)
    : game_(&game), noise_(noise), horizon_(horizon) {
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  if (horizon < 2) throw std::invalid_argument("horizon must be at least 2");
  plan_ = plan_repeat_max_explore(game, delta, 1.0 / static_cast<double>(horizon));
  if (horizon < plan_.duration)
    throw std::invalid_argument(
        "horizon T=" + std::to_string(horizon) +
        " is shorter than the exploration length T0=" +
        std::to_string(plan_.duration));
  optimum_ = optimal_policy(game, *plan_.structures.structures.back(), delta);
}

EpisodeResult StochasticPipeline::run(std::uint64_t seed,
                                      std::optional<std::size_t> state) const {
  const UtilityStructure& game = *game_;
  Rng rng(seed);
  EpisodeResult result;
  EpisodeTrace& trace = result.trace;
  trace.state = pick_state(game, state, rng);
  trace.seed = seed;
  trace.horizon = horizon_;

  SimulatedEnvironment env(game, trace.state, noise_);
  RunContext ctx{env, rng, trace};
  const auto& structures = plan_.structures.structures;
  auto stats = std::make_shared<RepeatMaxExploreResult>();
  const RepeatMaxExplorePlan* plan = &plan_;
  const Subroutine explore(
      "repeatmaxexplore", plan_.duration, structures.front(), structures.back(),
      [&game, plan, stats](const SignalRealization&, RunContext& c) {
        *stats = repeat_max_explore_delta(game, *plan, c);
        return stats->output;
      });
  const Subroutine episode =
      compose(explore, make_exploit(structures.back(), optimum_.table,
                                    horizon_ - plan_.duration,
                                    plan_.config.delta));
  episode.run(empty_realization(game), ctx);

  result.explored_chain = stats->explored_chain;
  result.off_support = stats->off_support;
  result.premise_notes = stats->premise_violations;
  if (!plan_.overall_premise_ok) {
    result.premise_notes.insert(
        result.premise_notes.begin(),
        "beta=" + std::to_string(plan_.config.beta) +
            " exceeds the transfer bound " +
            std::to_string(to_double(plan_.overall_beta_bound)));
  }
  result.exploit_reward = optimum_.reward;
  result.audit_pass = audit_trace(game, trace);

  RegretReport& r = result.report;
  r.horizon = horizon_;
  r.exploration = plan_.duration;
  r.benchmark = optimum_.reward;
  r.delta = plan_.config.delta;
  r.beta = plan_.config.beta;
  r.seed = seed;
  r.analytic = false;
  r.reward = realized_reward(trace);
  return result;
}

EpisodeResult run_stochastic_pipeline(const UtilityStructure& game,
                                      NoiseModel noise, std::size_t horizon,
                                      const Rational& delta, std::uint64_t seed,
                                      std::optional<std::size_t> state) {
  return StochasticPipeline(game, noise, horizon, delta).run(seed, state);
}

// ---------------------------------------------------------------------------
// Trials

template <class Pipeline>
TrialSummary run_trials(const Pipeline& pipeline, std::size_t trials,
                        std::uint64_t seed, std::optional<std::size_t> state,
                        std::size_t workers, bool keep_traces) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (workers == 0)
    workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, trials);

  TrialSummary summary;
  summary.episodes.resize(trials);
  auto work = [&](std::size_t first) {
    for (std::size_t k = first; k < trials; k += workers) {
      EpisodeResult r = pipeline.run(derive_seed(seed, k), state);
      if (!keep_traces) r.trace.rounds.clear();
      summary.episodes[k] = std::move(r);
    }
  };
  std::vector<std::future<void>> pending;
  for (std::size_t w = 1; w < workers; ++w)
    pending.push_back(std::async(std::launch::async, work, w));
  work(0);
  for (auto& f : pending) f.get();

  std::vector<double> rewards;
  rewards.reserve(trials);
  for (const auto& e : summary.episodes) rewards.push_back(e.report.reward);
  summary.aggregate = summary.episodes.front().report;
  summary.aggregate.seed = seed;
  summary.aggregate.trials = trials;
  std::tie(summary.aggregate.reward, summary.aggregate.reward_stderr) =
      mean_and_stderr(rewards);
  return summary;
}

template TrialSummary run_trials<DeterministicPipeline>(
    const DeterministicPipeline&, std::size_t, std::uint64_t,
    std::optional<std::size_t>, std::size_t, bool);
template TrialSummary run_trials<StochasticPipeline>(
    const StochasticPipeline&, std::size_t, std::uint64_t,
    std::optional<std::size_t>, std::size_t, bool);

}  // namespace bayesex
