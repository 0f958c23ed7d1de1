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


// Full explore-then-exploit episodes, incentive audits and regret
// accounting.

#ifndef BAYESEX_HARNESS_HPP_
#define BAYESEX_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bayesex/explore_det.hpp"
#include "bayesex/explore_stoch.hpp"
#include "bayesex/game.hpp"
#include "bayesex/policy.hpp"
#include "bayesex/rational.hpp"
#include "bayesex/signal.hpp"
#include "bayesex/trace.hpp"

namespace bayesex {

/// Exact check of every deviation constraint of `table` over `structure`:
/// margin = gain - delta * Pr[recommended]. Entries follow agent, then
/// recommended action, then deviation.
AuditReport audit_bic(const UtilityStructure& game,
                      const SignalStructure& structure,
                      const PolicyTable& table, const Rational& delta);

/// Audits every phase of the trace at the phase's delta and stamps the
/// verdict on each of its rounds. Returns false if any phase fails.
bool audit_trace(const UtilityStructure& game, EpisodeTrace& trace);

/// Optimal delta-BIC reward for AllInfo of the oracle explorable sets.
Rational benchmark(const UtilityStructure& game, const Rational& delta = 0);

struct RegretReport {
  std::size_t horizon = 0;      // T
  std::size_t exploration = 0;  // T0
  Rational benchmark;
  Rational delta;
  double beta = 0.0;  // zero on the deterministic path
  std::uint64_t seed = 0;

  /// Deterministic path: reward and regret are exact expectations.
  bool analytic = false;
  Rational exact_reward;
  Rational exact_regret;

  /// Stochastic path: realized (one episode) or Monte Carlo mean.
  double reward = 0.0;
  double reward_stderr = 0.0;
  std::size_t trials = 1;

  double regret() const;
};

struct EpisodeResult {
  EpisodeTrace trace;
  RegretReport report;
  /// Realized explored set after each exploration phase.
  std::vector<std::vector<std::size_t>> explored_chain;
  /// Per-round expected reward of the exploitation rounds.
  Rational exploit_reward;
  bool audit_pass = false;
  /// Stochastic path only.
  std::size_t off_support = 0;
  std::vector<std::string> premise_notes;
};

/// IndMax followed by T - T0 rounds of the optimal BIC policy over AllInfo
/// of the final explored sets. The plan depends on the game only, so one
/// instance serves any number of episodes.
class DeterministicPipeline {
 public:
  /// Throws std::invalid_argument if horizon < T0.
  DeterministicPipeline(const UtilityStructure& game, std::size_t horizon);

  std::size_t exploration() const { return plan_.duration; }
  const IndMaxPlan& plan() const { return plan_; }
  const Rational& benchmark() const { return optimum_.reward; }
  /// Analytic expected cumulative reward (same for every state and seed).
  const Rational& expected_reward() const { return expected_reward_; }

  /// `state` fixes theta*; otherwise it is drawn from the prior with the
  /// episode generator. Throws std::invalid_argument for a zero-prior state.
  EpisodeResult run(std::uint64_t seed,
                    std::optional<std::size_t> state = std::nullopt) const;

 private:
  const UtilityStructure* game_;
  std::size_t horizon_;
  IndMaxPlan plan_;
  OptimalPolicy optimum_;
  Rational expected_reward_;
};

/// RepeatMaxExplore^delta with beta = 1/T, then the delta-optimal policy
/// over the final structure applied to the denoised signal.
class StochasticPipeline {
 public:
  /// Throws std::invalid_argument if delta <= 0 or horizon < T0,
  /// InfeasibleError if no delta-BIC policy exists and NoSeparationError
  /// if the separation parameter is undefined.
  StochasticPipeline(const UtilityStructure& game, NoiseModel noise,
                     std::size_t horizon, const Rational& delta);

  std::size_t exploration() const { return plan_.duration; }
  const RepeatMaxExplorePlan& plan() const { return plan_; }
  const Rational& benchmark() const { return optimum_.reward; }
  const NoiseModel& noise() const { return noise_; }

  EpisodeResult run(std::uint64_t seed,
                    std::optional<std::size_t> state = std::nullopt) const;

 private:
  const UtilityStructure* game_;
  NoiseModel noise_;
  std::size_t horizon_;
  RepeatMaxExplorePlan plan_;
  OptimalPolicy optimum_;
};

EpisodeResult run_deterministic_pipeline(
    const UtilityStructure& game, std::size_t horizon,
    std::optional<std::size_t> state, std::uint64_t seed);

EpisodeResult run_stochastic_pipeline(const UtilityStructure& game,
                                      NoiseModel noise, std::size_t horizon,
                                      const Rational& delta, std::uint64_t seed,
                                      std::optional<std::size_t> state =
                                          std::nullopt);

struct TrialSummary {
  std::vector<EpisodeResult> episodes;  // in trial order
  RegretReport aggregate;               // mean reward and its stderr
};

/// Runs `trials` episodes with seeds derive_seed(seed, k) on up to
/// `workers` threads. Episodes drop their round logs unless `keep_traces`.
template <class Pipeline>
TrialSummary run_trials(const Pipeline& pipeline, std::size_t trials,
                        std::uint64_t seed,
                        std::optional<std::size_t> state = std::nullopt,
                        std::size_t workers = 0, bool keep_traces = false);

/// Sample mean and standard error of the mean.
std::pair<double, double> mean_and_stderr(const std::vector<double>& values);

}  // namespace bayesex

#endif  // BAYESEX_HARNESS_HPP_
