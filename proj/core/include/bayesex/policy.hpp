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

// Single-round recommendation game: a policy maps each realized signal to a
// distribution over joint actions and is represented by the table
// x[a][s] = Pr[recommend a | signal s]. Incentive constraints are linear in
// x, so the (delta-)BIC policies form a polytope.

#ifndef BAYESEX_POLICY_HPP_
#define BAYESEX_POLICY_HPP_

#include <cstddef>
#include <vector>

#include "bayesex/game.hpp"
#include "bayesex/lp.hpp"
#include "bayesex/rational.hpp"
#include "bayesex/signal.hpp"

namespace bayesex {

class PolicyTable {
 public:
  PolicyTable() = default;
  PolicyTable(std::size_t num_actions, std::size_t num_signals)
      : num_actions_(num_actions),
        num_signals_(num_signals),
        x_(num_actions * num_signals, 0) {}

  /// Table that recommends `joint` with certainty for every signal.
  static PolicyTable point_mass(std::size_t num_actions,
                                std::size_t num_signals, std::size_t joint);

  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_signals() const { return num_signals_; }

  Rational& at(std::size_t joint, std::size_t signal) {
    return x_[joint * num_signals_ + signal];
  }
  const Rational& at(std::size_t joint, std::size_t signal) const {
    return x_[joint * num_signals_ + signal];
  }

  /// Flat view in LP variable order (joint-major).
  const std::vector<Rational>& values() const { return x_; }
  static PolicyTable from_values(std::size_t num_actions,
                                 std::size_t num_signals,
                                 std::vector<Rational> values);

  std::vector<std::size_t> support(std::size_t signal) const;
  std::vector<Rational> column(std::size_t signal) const;

  /// Smallest positive entry over all signals; zero if the table is empty.
  Rational min_positive() const;

  /// Every column is a probability distribution.
  bool is_stochastic() const;

  bool operator==(const PolicyTable&) const = default;

 private:
  std::size_t num_actions_ = 0;
  std::size_t num_signals_ = 0;
  std::vector<Rational> x_;
};

/// LP variable index of x[joint][signal].
inline std::size_t policy_variable(std::size_t joint, std::size_t signal,
                                   std::size_t num_signals) {
  return joint * num_signals + signal;
}

/// Unnormalized incentive gain of following recommendation `action` over
/// deviating to `deviation`, for agent `agent`:
///   sum over a_{-i}, s, state of prior * Pr[s|state] * (u_i(action, a_{-i})
///   - u_i(deviation, a_{-i})) * x[(action, a_{-i})][s].
Rational conditional_gain(const UtilityStructure& game,
                          const SignalStructure& signal, const PolicyTable& x,
                          std::size_t agent, std::size_t action,
                          std::size_t deviation);

/// Pr[agent is recommended `action`] under x.
Rational recommendation_mass(const UtilityStructure& game,
                             const SignalStructure& signal,
                             const PolicyTable& x, std::size_t agent,
                             std::size_t action);

/// Expected principal reward of x.
Rational expected_reward(const UtilityStructure& game,
                         const SignalStructure& signal, const PolicyTable& x);

/// Constraints of BIC_delta[S] over variables x[a][s] (zero objective).
/// Rows: one per agent and ordered pair of distinct own actions (agent-major,
/// then recommended action, then deviation), followed by one simplex row per
/// signal.
lp::LinearProgram bic_polytope(const UtilityStructure& game,
                               const SignalStructure& signal,
                               const Rational& delta);

std::size_t num_deviation_constraints(const UtilityStructure& game);

/// Exact membership test in BIC_delta[S].
bool in_bic_polytope(const UtilityStructure& game,
                     const SignalStructure& signal, const Rational& delta,
                     const PolicyTable& x);

struct OptimalPolicy {
  PolicyTable table;
  Rational reward;
};

/// Reward-maximizing policy over BIC_delta[S]. Throws InfeasibleError when
/// the polytope is empty (possible only for delta > 0).
OptimalPolicy optimal_policy(const UtilityStructure& game,
                             const SignalStructure& signal,
                             const Rational& delta);

struct ExplorableSets {
  /// Per signal, the joint actions some delta-BIC policy recommends with
  /// positive probability (sorted).
  std::vector<std::vector<std::size_t>> sets;
  /// eta[a][s]: the largest x[a][s] over the polytope.
  std::vector<std::vector<Rational>> eta;
  /// witness[a][s]: an optimal table for the (a, s) program.
  std::vector<std::vector<PolicyTable>> witness;
  /// min over explorable (a, s) of eta[a][s]; this is p_min[S].
  Rational pmin_bracket;

  /// state -> explorable set of the state's signal (state-determined
  /// signals only; empty set for dropped zero-prior states).
  std::vector<std::vector<std::size_t>> by_state(
      const SignalStructure& signal) const;
};

/// Solves, for every (a, s), max eta subject to x[a][s] >= eta over
/// BIC_delta[S]. Throws InfeasibleError when the polytope is empty.
ExplorableSets explorable_set(const UtilityStructure& game,
                              const SignalStructure& signal,
                              const Rational& delta);

struct MaxSupportPolicy {
  PolicyTable table;
  /// Smallest positive entry of the table.
  Rational pmin;
  ExplorableSets explorable;
};

/// Uniform mixture (over signals, then over explorable actions) of the
/// per-(a, s) witnesses. Its column-s support equals the explorable set at s.
MaxSupportPolicy max_support_policy(const UtilityStructure& game,
                                    const SignalStructure& signal,
                                    const Rational& delta);

}  // namespace bayesex

#endif  // BAYESEX_POLICY_HPP_
