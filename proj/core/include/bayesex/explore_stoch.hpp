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

// Exploration when realized utilities are noisy. Each phase repeats a
// delta-max-support MaxEx schedule for R meta-rounds, averages what it saw
// and snaps the averages to the closest state's exact utility block
// (DeNoise). The snapped block serves as an approximate AllInfo signal for
// the next phase.

#ifndef BAYESEX_EXPLORE_STOCH_HPP_
#define BAYESEX_EXPLORE_STOCH_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bayesex/explore_det.hpp"
#include "bayesex/game.hpp"
#include "bayesex/rational.hpp"

namespace bayesex {

struct StochRunConfig {
  Rational delta;     // strict-incentive margin, > 0
  double beta = 0.0;  // overall confidence, in (0, 1)
  double beta_phase = 0.0;  // beta / phases
  Rational zeta;      // separation parameter

  /// Validates 0 < delta, 0 < beta < 1 and computes zeta. `phases`
  /// defaults to |A|. Throws NoSeparationError if utilities never differ
  /// across states.
  static StochRunConfig make(const UtilityStructure& game, Rational delta,
                             double beta, std::size_t phases = 0);
};

/// ceil(zeta^-2 * ln(2 n |B| / beta)). Throws NoSeparationError for
/// zeta <= 0 and std::invalid_argument for beta outside (0, 1].
std::size_t required_samples(double zeta, std::size_t num_agents,
                             std::size_t explored_size, double beta);

/// Realized utility vectors per explored action; samples[k] belongs to
/// explored[k] and each entry is (f; u_1 .. u_n).
struct DSample {
  std::vector<std::size_t> explored;
  std::vector<std::vector<std::vector<double>>> samples;

  std::size_t min_count() const;
};

struct DenoiseResult {
  AllInfoValue value;  // (B, U(B, best_state))
  std::size_t best_state = 0;
  double distance = 0.0;  // sup-norm gap to the chosen block
  /// distance < zeta / 2, i.e. the fit is unambiguous.
  bool certified = false;
};

/// Best-fit state under the sup norm over all (n + 1) |B| coordinates;
/// ties go to the lowest state index. Throws std::invalid_argument for an
/// empty or unevenly shaped sample.
DenoiseResult denoise(const UtilityStructure& game, const DSample& sample,
                      std::optional<Rational> zeta = std::nullopt);

/// Fixed-before-the-signal parameters of one MaxExplore^delta phase.
struct MaxExploreDeltaPlan {
  MaxExPlan phase;  // delta-max-support table and per-meta-round duration T
  std::size_t meta_rounds = 0;  // R
  double beta_out = 0.0;
  /// transfer_beta_bound of the phase table: input-signal errors up to this
  /// keep the phase BIC.
  Rational input_beta_bound;

  std::size_t duration() const { return meta_rounds * phase.duration; }
};

/// Largest approximation error beta for which every delta-BIC table with
/// smallest positive entry `pmin` stays BIC when the signal is replaced by a
/// beta-approximation: delta * pmin * min_s Pr[s] / 2. A deviation loses at
/// most 2 beta, while its delta-slack is at least delta * pmin * min_s Pr[s].
Rational transfer_beta_bound(const UtilityStructure& game,
                             const SignalStructure& structure,
                             const Rational& delta, const Rational& pmin);

/// R = required_samples(zeta, n, max_s |EX_s|, beta_out), so that the
/// duration does not depend on the realized signal.
MaxExploreDeltaPlan plan_max_explore_delta(
    const UtilityStructure& game,
    std::shared_ptr<const SignalStructure> structure, const Rational& delta,
    double beta_out, const Rational& zeta);

struct MaxExploreOutcome {
  DenoiseResult denoised;
  DSample sample;
  bool premise_ok = true;  // beta_in <= input_beta_bound
};

/// Runs R meta-rounds of the phase schedule for realized approximate signal
/// `signal` (tau re-drawn every meta-round) and denoises every observation.
MaxExploreOutcome max_explore_delta(const UtilityStructure& game,
                                    const MaxExploreDeltaPlan& plan,
                                    std::size_t signal, double beta_in,
                                    RunContext& ctx,
                                    const std::string& label = "maxexplore");

struct RepeatMaxExplorePlan {
  StochRunConfig config;
  IndMaxPlan structures;  // delta-phase structures (deterministic instance)
  std::vector<MaxExploreDeltaPlan> phases;
  std::size_t duration = 0;
  /// min over phases of input_beta_bound. Phase inputs carry error below
  /// beta, so beta <= this bound keeps every phase BIC.
  Rational overall_beta_bound;
  bool overall_premise_ok = true;
};

RepeatMaxExplorePlan plan_repeat_max_explore(const UtilityStructure& game,
                                             const Rational& delta, double beta);

struct RepeatMaxExploreResult {
  SignalRealization output;
  std::vector<std::vector<std::size_t>> explored_chain;
  /// Phases whose denoised block was not a value of the planned structure.
  std::size_t off_support = 0;
  /// Phases whose input-confidence premise failed.
  std::vector<std::string> premise_violations;
};

RepeatMaxExploreResult repeat_max_explore_delta(const UtilityStructure& game,
                                                const RepeatMaxExplorePlan& plan,
                                                RunContext& ctx);

/// delta-eventually-explorable joint actions at `state` for the
/// deterministic instance. Throws InfeasibleError when no delta-BIC policy
/// exists for the empty signal.
std::vector<std::size_t> oracle_delta_explorable(const UtilityStructure& game,
                                                 std::size_t state,
                                                 const Rational& delta);

}  // namespace bayesex

#endif  // BAYESEX_EXPLORE_STOCH_HPP_
