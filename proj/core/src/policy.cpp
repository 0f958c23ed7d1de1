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

#include "bayesex/policy.hpp"

#include <cassert>
#include <future>
#include <stdexcept>
#include <thread>

#include "bayesex/errors.hpp"

namespace bayesex {

PolicyTable PolicyTable::point_mass(std::size_t num_actions,
                                    std::size_t num_signals,
                                    std::size_t joint) {
  PolicyTable out(num_actions, num_signals);
  for (std::size_t s = 0; s < num_signals; ++s) out.at(joint, s) = 1;
  return out;
}

PolicyTable PolicyTable::from_values(std::size_t num_actions,
                                     std::size_t num_signals,
                                     std::vector<Rational> values) {
  if (values.size() != num_actions * num_signals)
    throw std::invalid_argument("policy table size mismatch");
  PolicyTable out;
  out.num_actions_ = num_actions;
  out.num_signals_ = num_signals;
  out.x_ = std::move(values);
  return out;
}

std::vector<std::size_t> PolicyTable::support(std::size_t signal) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < num_actions_; ++a) {
    if (at(a, signal) > 0) out.push_back(a);
  }
  return out;
}

std::vector<Rational> PolicyTable::column(std::size_t signal) const {
  std::vector<Rational> out(num_actions_);
  for (std::size_t a = 0; a < num_actions_; ++a) out[a] = at(a, signal);
  return out;
}

Rational PolicyTable::min_positive() const {
  Rational best = 0;
  for (const auto& v : x_) {
    if (v > 0 && (best == 0 || v < best)) best = v;
  }
  return best;
}

bool PolicyTable::is_stochastic() const {
  for (std::size_t s = 0; s < num_signals_; ++s) {
    Rational total = 0;
    for (std::size_t a = 0; a < num_actions_; ++a) {
      if (at(a, s) < 0) return false;
      total += at(a, s);
    }
    if (total != 1) return false;
  }
  return true;
}

namespace {

void check_dimensions(const UtilityStructure& game,
                      const SignalStructure& signal, const PolicyTable& x) {
  if (x.num_actions() != game.num_joint_actions() ||
      x.num_signals() != signal.size() ||
      signal.num_states() != game.num_states()) {
    throw std::invalid_argument("policy table dimension mismatch");
  }
}

// weight[s][a-free] = prior(state) * Pr[s | state], per state.
Rational joint_weight(const UtilityStructure& game,
                      const SignalStructure& signal, std::size_t s,
                      std::size_t state) {
  return game.prior[state] * signal.table[s][state];
}

// Coefficient of x[a][s] in the (agent, action -> deviation) constraint,
// without the delta term. `a` must have agent's component equal to action.
Rational gain_coefficient(const UtilityStructure& game,
                          const SignalStructure& signal, std::size_t agent,
                          std::size_t a, std::size_t deviation, std::size_t s) {
  const std::size_t dev = game.with_component(a, agent, deviation);
  const auto& u = game.utility[agent];
  Rational c = 0;
  for (std::size_t k = 0; k < game.num_states(); ++k) {
    if (signal.table[s][k] == 0 || game.prior[k] == 0) continue;
    c += joint_weight(game, signal, s, k) * (u[a][k] - u[dev][k]);
  }
  return c;
}

}  // namespace

Rational conditional_gain(const UtilityStructure& game,
                          const SignalStructure& signal, const PolicyTable& x,
                          std::size_t agent, std::size_t action,
                          std::size_t deviation) {
  check_dimensions(game, signal, x);
  Rational total = 0;
  for (std::size_t a = 0; a < game.num_joint_actions(); ++a) {
    if (game.component(a, agent) != action) continue;
    for (std::size_t s = 0; s < signal.size(); ++s) {
      if (x.at(a, s) == 0) continue;
      total += gain_coefficient(game, signal, agent, a, deviation, s) * x.at(a, s);
    }
  }
  return total;
}

Rational recommendation_mass(const UtilityStructure& game,
                             const SignalStructure& signal,
                             const PolicyTable& x, std::size_t agent,
                             std::size_t action) {
  check_dimensions(game, signal, x);
  Rational total = 0;
  for (std::size_t a = 0; a < game.num_joint_actions(); ++a) {
    if (game.component(a, agent) != action) continue;
    for (std::size_t s = 0; s < signal.size(); ++s) {
      if (x.at(a, s) == 0) continue;
      total += signal.mass(s, game.prior) * x.at(a, s);
    }
  }
  return total;
}

Rational expected_reward(const UtilityStructure& game,
                         const SignalStructure& signal, const PolicyTable& x) {
  check_dimensions(game, signal, x);
  Rational total = 0;
  for (std::size_t a = 0; a < game.num_joint_actions(); ++a) {
    for (std::size_t s = 0; s < signal.size(); ++s) {
      if (x.at(a, s) == 0) continue;
      for (std::size_t k = 0; k < game.num_states(); ++k)
        total += joint_weight(game, signal, s, k) * x.at(a, s) * game.reward[a][k];
    }
  }
  return total;
}

std::size_t num_deviation_constraints(const UtilityStructure& game) {
  std::size_t count = 0;
  for (const auto& acts : game.actions) count += acts.size() * (acts.size() - 1);
  return count;
}

lp::LinearProgram bic_polytope(const UtilityStructure& game,
                               const SignalStructure& signal,
                               const Rational& delta) {
  if (delta < 0) throw std::invalid_argument("delta must be nonnegative");
  if (signal.num_states() != game.num_states())
    throw std::invalid_argument("signal structure state count mismatch");
  const std::size_t num_joint = game.num_joint_actions();
  const std::size_t num_signals = signal.size();
  lp::LinearProgram program(num_joint * num_signals);

  std::vector<Rational> masses(num_signals);
  for (std::size_t s = 0; s < num_signals; ++s)
    masses[s] = signal.mass(s, game.prior);

  for (std::size_t i = 0; i < game.num_agents(); ++i) {
    const std::size_t k = game.actions[i].size();
    for (std::size_t action = 0; action < k; ++action) {
      for (std::size_t deviation = 0; deviation < k; ++deviation) {
        if (deviation == action) continue;
        std::vector<Rational> row(program.num_variables(), 0);
        for (std::size_t a = 0; a < num_joint; ++a) {
          if (game.component(a, i) != action) continue;
          for (std::size_t s = 0; s < num_signals; ++s) {
            row[policy_variable(a, s, num_signals)] =
                gain_coefficient(game, signal, i, a, deviation, s) -
                delta * masses[s];
          }
        }
        program.add_constraint(std::move(row), lp::Relation::kGreaterEqual, 0);
      }
    }
  }
  for (std::size_t s = 0; s < num_signals; ++s) {
    std::vector<Rational> row(program.num_variables(), 0);
    for (std::size_t a = 0; a < num_joint; ++a)
      row[policy_variable(a, s, num_signals)] = 1;
    program.add_constraint(std::move(row), lp::Relation::kEqual, 1);
  }
  return program;
}

bool in_bic_polytope(const UtilityStructure& game,
                     const SignalStructure& signal, const Rational& delta,
                     const PolicyTable& x) {
  check_dimensions(game, signal, x);
  return lp::satisfies(bic_polytope(game, signal, delta), x.values());
}

OptimalPolicy optimal_policy(const UtilityStructure& game,
                             const SignalStructure& signal,
                             const Rational& delta) {
  lp::LinearProgram program = bic_polytope(game, signal, delta);
  const std::size_t num_signals = signal.size();
  for (std::size_t a = 0; a < game.num_joint_actions(); ++a) {
    for (std::size_t s = 0; s < num_signals; ++s) {
      Rational c = 0;
      for (std::size_t k = 0; k < game.num_states(); ++k)
        c += joint_weight(game, signal, s, k) * game.reward[a][k];
      program.objective[policy_variable(a, s, num_signals)] = c;
    }
  }
  lp::Solution sol = lp::solve(program);
  if (sol.status != lp::Status::kOptimal) {
    throw InfeasibleError("no " + to_string(delta) +
                          "-BIC recommendation policy exists for this signal");
  }
  return OptimalPolicy{
      PolicyTable::from_values(game.num_joint_actions(), num_signals,
                               std::move(sol.x)),
      sol.objective_value};
}

std::vector<std::vector<std::size_t>> ExplorableSets::by_state(
    const SignalStructure& signal) const {
  if (!signal.deterministic())
    throw std::invalid_argument("by_state needs a state-determined signal");
  std::vector<std::vector<std::size_t>> out(signal.state_signal.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (signal.state_signal[k] != kNoSignal) out[k] = sets[signal.state_signal[k]];
  }
  return out;
}

namespace {

struct CellResult {
  Rational eta;
  PolicyTable witness;
};

CellResult solve_cell(const lp::LinearProgram& base, std::size_t num_joint,
                      std::size_t num_signals, std::size_t a, std::size_t s) {
  // Variables: x (num_joint * num_signals) followed by eta.
  const std::size_t n = base.num_variables();
  lp::LinearProgram program(n + 1);
  program.objective[n] = 1;
  program.constraints.reserve(base.constraints.size() + 1);
  for (const auto& c : base.constraints) {
    std::vector<Rational> row = c.coefficients;
    row.emplace_back(0);
    program.add_constraint(std::move(row), c.relation, c.rhs);
  }
  std::vector<Rational> link(n + 1, 0);
  link[policy_variable(a, s, num_signals)] = 1;
  link[n] = -1;
  program.add_constraint(std::move(link), lp::Relation::kGreaterEqual, 0);

  lp::Solution sol = lp::solve(program);
  assert(sol.status == lp::Status::kOptimal);
  CellResult out;
  out.eta = sol.objective_value;
  sol.x.pop_back();
  out.witness = PolicyTable::from_values(num_joint, num_signals, std::move(sol.x));
  return out;
}

}  // namespace

ExplorableSets explorable_set(const UtilityStructure& game,
                              const SignalStructure& signal,
                              const Rational& delta) {
  const lp::LinearProgram base = bic_polytope(game, signal, delta);
  if (lp::solve(base).status != lp::Status::kOptimal) {
    throw InfeasibleError("no " + to_string(delta) +
                          "-BIC recommendation policy exists for this signal");
  }
  const std::size_t num_joint = game.num_joint_actions();
  const std::size_t num_signals = signal.size();
  const std::size_t cells = num_joint * num_signals;

  // Cells are independent; solve them on a few workers, merge by index.
  std::vector<CellResult> results(cells);
  const std::size_t workers = std::min<std::size_t>(
      cells, std::max(1u, std::min(8u, std::thread::hardware_concurrency())));
  if (workers <= 1 || cells < 8) {
    for (std::size_t c = 0; c < cells; ++c)
      results[c] = solve_cell(base, num_joint, num_signals, c / num_signals,
                              c % num_signals);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t c = w; c < cells; c += workers)
          results[c] = solve_cell(base, num_joint, num_signals, c / num_signals,
                                  c % num_signals);
      }));
    }
    for (auto& j : jobs) j.get();
  }

  ExplorableSets out;
  out.sets.assign(num_signals, {});
  out.eta.assign(num_joint, std::vector<Rational>(num_signals));
  out.witness.assign(num_joint, std::vector<PolicyTable>(num_signals));
  out.pmin_bracket = 0;
  for (std::size_t a = 0; a < num_joint; ++a) {
    for (std::size_t s = 0; s < num_signals; ++s) {
      CellResult& r = results[a * num_signals + s];
      if (r.eta > 0) {
        out.sets[s].push_back(a);
        if (out.pmin_bracket == 0 || r.eta < out.pmin_bracket)
          out.pmin_bracket = r.eta;
      }
      out.eta[a][s] = std::move(r.eta);
      out.witness[a][s] = std::move(r.witness);
    }
  }
  for (std::size_t s = 0; s < num_signals; ++s) {
    if (out.sets[s].empty())
      throw std::logic_error("explorable set empty at a feasible polytope");
  }
  return out;
}

MaxSupportPolicy max_support_policy(const UtilityStructure& game,
                                    const SignalStructure& signal,
                                    const Rational& delta) {
  MaxSupportPolicy out;
  out.explorable = explorable_set(game, signal, delta);
  const std::size_t num_joint = game.num_joint_actions();
  const std::size_t num_signals = signal.size();
  out.table = PolicyTable(num_joint, num_signals);
  for (std::size_t s = 0; s < num_signals; ++s) {
    const auto& set = out.explorable.sets[s];
    const Rational weight =
        Rational(1) / Rational(static_cast<unsigned long>(num_signals * set.size()));
    for (std::size_t a : set) {
      const PolicyTable& w = out.explorable.witness[a][s];
      for (std::size_t b = 0; b < num_joint; ++b) {
        for (std::size_t t = 0; t < num_signals; ++t) {
          if (w.at(b, t) != 0) out.table.at(b, t) += weight * w.at(b, t);
        }
      }
    }
  }
  out.pmin = out.table.min_positive();

  for (std::size_t s = 0; s < num_signals; ++s) {
    if (out.table.support(s) != out.explorable.sets[s])
      throw std::logic_error("max-support policy support differs from EX_s");
  }
  const Rational guarantee =
      out.explorable.pmin_bracket /
      Rational(static_cast<unsigned long>(num_joint * num_signals));
  if (out.pmin < guarantee)
    throw std::logic_error("max-support policy violates its p_min guarantee");
  return out;
}

}  // namespace bayesex
