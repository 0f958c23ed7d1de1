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

// The Bayesian game: agents with finite action sets, a finite state space
// with a prior, per-agent utility tables and the principal's reward table.

#ifndef BAYESEX_GAME_HPP_
#define BAYESEX_GAME_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bayesex/random.hpp"
#include "bayesex/rational.hpp"

namespace bayesex {

/// One action index per agent, in agent declaration order.
struct JointAction {
  std::vector<std::size_t> actions;

  bool operator==(const JointAction&) const = default;
};

/// Immutable description of the game. Joint actions are addressed by a flat
/// row-major index over agents (agent 0 most significant).
struct UtilityStructure {
  std::vector<std::vector<std::string>> actions;  // [agent][action] names
  std::vector<std::string> states;
  std::vector<Rational> prior;                            // [state]
  std::vector<std::vector<std::vector<Rational>>> utility;  // [agent][joint][state]
  std::vector<std::vector<Rational>> reward;               // [joint][state]

  std::size_t num_agents() const { return actions.size(); }
  std::size_t num_states() const { return states.size(); }
  std::size_t num_joint_actions() const;

  JointAction decode(std::size_t joint) const;
  std::size_t encode(const JointAction& joint) const;

  /// Action of agent `agent` inside joint action `joint`.
  std::size_t component(std::size_t joint, std::size_t agent) const;

  /// `joint` with agent `agent`'s action replaced by `action`.
  std::size_t with_component(std::size_t joint, std::size_t agent,
                             std::size_t action) const;

  /// "a1" for a single agent, "(a1,b2)" otherwise.
  std::string joint_action_name(std::size_t joint) const;

  std::optional<std::size_t> state_index(std::string_view name) const;

  /// Realized mean vector (f; u_1 .. u_n) of `joint` at `state`.
  std::vector<Rational> outcome(std::size_t joint, std::size_t state) const;
};

/// Returns every violated invariant; empty means valid.
std::vector<std::string> validate(const UtilityStructure& game);

/// Throws ValidationError when validate() reports problems.
void require_valid(const UtilityStructure& game);

/// Minimum nonzero gap |u_i(a,s) - u_i(a,s')| over agents, joint actions and
/// state pairs. std::nullopt when no agent utility depends on the state.
std::optional<Rational> separation_parameter(const UtilityStructure& game);

/// How realized utilities are drawn around their means.
struct NoiseModel {
  enum class Kind { kDeterministic, kBernoulli };
  Kind kind = Kind::kDeterministic;

  /// Realized (f; u_1 .. u_n) for one play. Bernoulli draws each coordinate
  /// independently with the coordinate's mean as success probability.
  std::vector<Rational> draw(const UtilityStructure& game, std::size_t joint,
                             std::size_t state, Rng& rng) const;
};

std::string_view to_string(NoiseModel::Kind kind);
NoiseModel::Kind parse_noise_kind(std::string_view text);

}  // namespace bayesex

#endif  // BAYESEX_GAME_HPP_
