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

#include "bayesex/game.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

#include "bayesex/errors.hpp"

namespace bayesex {
namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid utility structure";
  for (const auto& p : problems) out += "; " + p;
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::invalid_argument(join_problems(problems)),
      problems_(std::move(problems)) {}

std::size_t UtilityStructure::num_joint_actions() const {
  if (actions.empty()) return 0;
  std::size_t count = 1;
  for (const auto& a : actions) count *= a.size();
  return count;
}

JointAction UtilityStructure::decode(std::size_t joint) const {
  JointAction out;
  out.actions.resize(num_agents());
  for (std::size_t i = num_agents(); i-- > 0;) {
    out.actions[i] = joint % actions[i].size();
    joint /= actions[i].size();
  }
  return out;
}

std::size_t UtilityStructure::encode(const JointAction& joint) const {
  assert(joint.actions.size() == num_agents());
  std::size_t flat = 0;
  for (std::size_t i = 0; i < num_agents(); ++i) {
    if (joint.actions[i] >= actions[i].size())
      throw std::out_of_range("joint action component out of range");
    flat = flat * actions[i].size() + joint.actions[i];
  }
  return flat;
}

std::size_t UtilityStructure::component(std::size_t joint,
                                        std::size_t agent) const {
  std::size_t stride = 1;
  for (std::size_t j = agent + 1; j < num_agents(); ++j)
    stride *= actions[j].size();
  return (joint / stride) % actions[agent].size();
}

std::size_t UtilityStructure::with_component(std::size_t joint,
                                             std::size_t agent,
                                             std::size_t action) const {
  std::size_t stride = 1;
  for (std::size_t j = agent + 1; j < num_agents(); ++j)
    stride *= actions[j].size();
  const std::size_t current = (joint / stride) % actions[agent].size();
  return joint - current * stride + action * stride;
}

std::string UtilityStructure::joint_action_name(std::size_t joint) const {
  const JointAction ja = decode(joint);
  if (num_agents() == 1) return actions[0][ja.actions[0]];
  std::string out = "(";
  for (std::size_t i = 0; i < num_agents(); ++i) {
    if (i) out += ",";
    out += actions[i][ja.actions[i]];
  }
  return out + ")";
}

std::optional<std::size_t> UtilityStructure::state_index(
    std::string_view name) const {
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k] == name) return k;
  }
  return std::nullopt;
}

std::vector<Rational> UtilityStructure::outcome(std::size_t joint,
                                                std::size_t state) const {
  std::vector<Rational> out;
  out.reserve(num_agents() + 1);
  out.push_back(reward[joint][state]);
  for (std::size_t i = 0; i < num_agents(); ++i)
    out.push_back(utility[i][joint][state]);
  return out;
}

std::vector<std::string> validate(const UtilityStructure& game) {
  std::vector<std::string> problems;
  const std::size_t n = game.num_agents();
  const std::size_t num_states = game.num_states();

  if (n == 0) problems.emplace_back("no agents");
  for (std::size_t i = 0; i < n; ++i) {
    if (game.actions[i].empty()) {
      problems.push_back("agent " + std::to_string(i) + " has no actions");
    }
  }
  if (num_states == 0) problems.emplace_back("no states");
  if (!problems.empty()) return problems;

  if (game.prior.size() != num_states) {
    problems.push_back("dimension mismatch: prior has " +
                       std::to_string(game.prior.size()) + " entries for " +
                       std::to_string(num_states) + " states");
  } else {
    Rational total = 0;
    for (std::size_t k = 0; k < num_states; ++k) {
      if (game.prior[k] < 0) {
        problems.push_back("prior entry " + std::to_string(k) +
                           " is negative");
      }
      total += game.prior[k];
    }
    if (total != 1) {
      problems.push_back("prior sums to " + to_string(total) + " (" +
                         std::to_string(to_double(total)) + "), not 1");
    }
  }

  const std::size_t num_joint = game.num_joint_actions();
  auto check_table = [&](const std::vector<std::vector<Rational>>& table,
                         const std::string& label) {
    if (table.size() != num_joint) {
      problems.push_back("dimension mismatch: " + label + " has " +
                         std::to_string(table.size()) + " rows, expected " +
                         std::to_string(num_joint) + " joint actions");
      return;
    }
    for (std::size_t a = 0; a < num_joint; ++a) {
      if (table[a].size() != num_states) {
        problems.push_back("dimension mismatch: " + label + " row " +
                           std::to_string(a) + " has " +
                           std::to_string(table[a].size()) +
                           " columns, expected " + std::to_string(num_states));
        continue;
      }
      for (std::size_t k = 0; k < num_states; ++k) {
        if (table[a][k] < 0 || table[a][k] > 1) {
          problems.push_back("entry out of range [0,1]: " + label + "[" +
                             std::to_string(a) + "][" + std::to_string(k) +
                             "] = " + to_string(table[a][k]));
        }
      }
    }
  };

  if (game.utility.size() != n) {
    problems.push_back("dimension mismatch: utilities given for " +
                       std::to_string(game.utility.size()) + " agents, expected " +
                       std::to_string(n));
  } else {
    for (std::size_t i = 0; i < n; ++i)
      check_table(game.utility[i], "utility[" + std::to_string(i) + "]");
  }
  check_table(game.reward, "reward");
  return problems;
}

void require_valid(const UtilityStructure& game) {
  auto problems = validate(game);
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::optional<Rational> separation_parameter(const UtilityStructure& game) {
  std::optional<Rational> best;
  const std::size_t num_states = game.num_states();
  for (const auto& table : game.utility) {
    for (const auto& row : table) {
      for (std::size_t s = 0; s < num_states; ++s) {
        for (std::size_t t = s + 1; t < num_states; ++t) {
          if (row[s] == row[t]) continue;
          Rational gap = abs(row[s] - row[t]);
          if (!best || gap < *best) best = gap;
        }
      }
    }
  }
  return best;
}

std::vector<Rational> NoiseModel::draw(const UtilityStructure& game,
                                       std::size_t joint, std::size_t state,
                                       Rng& rng) const {
  std::vector<Rational> out = game.outcome(joint, state);
  if (kind == Kind::kDeterministic) return out;
  for (auto& v : out) v = rng.bernoulli(to_double(v)) ? 1 : 0;
  return out;
}

std::string_view to_string(NoiseModel::Kind kind) {
  return kind == NoiseModel::Kind::kDeterministic ? "deterministic"
                                                  : "bernoulli";
}

NoiseModel::Kind parse_noise_kind(std::string_view text) {
  if (text == "deterministic") return NoiseModel::Kind::kDeterministic;
  if (text == "bernoulli") return NoiseModel::Kind::kBernoulli;
  throw std::invalid_argument("unknown noise kind: " + std::string(text));
}

}  // namespace bayesex
