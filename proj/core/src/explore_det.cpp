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

#include "bayesex/explore_det.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "bayesex/errors.hpp"
#include "bayesex/lp.hpp"

namespace bayesex {

SimulatedEnvironment::SimulatedEnvironment(const UtilityStructure& game,
                                           std::size_t state, NoiseModel noise)
    : game_(&game), state_(state), noise_(noise) {
  if (state >= game.num_states())
    throw std::out_of_range("environment state out of range");
}

std::vector<Rational> SimulatedEnvironment::play(std::size_t joint, Rng& rng) {
  ++plays_;
  return noise_.draw(*game_, joint, state_, rng);
}

const std::vector<Rational>& play_round(RunContext& ctx, std::size_t phase,
                                        std::size_t joint, bool dedicated) {
  RoundRecord record;
  record.phase = phase;
  record.joint = joint;
  record.dedicated = dedicated;
  record.outcome = ctx.env.play(joint, ctx.rng);
  ctx.trace.rounds.push_back(std::move(record));
  return ctx.trace.rounds.back().outcome;
}

// ---------------------------------------------------------------------------
// Subroutines

namespace {

bool same_structure(const std::shared_ptr<const SignalStructure>& a,
                    const std::shared_ptr<const SignalStructure>& b) {
  if (!a || !b) return true;
  if (a == b) return true;
  return a->signals == b->signals && a->table == b->table;
}

}  // namespace

Subroutine::Subroutine(std::string name, std::size_t duration,
                       std::shared_ptr<const SignalStructure> input,
                       std::shared_ptr<const SignalStructure> output, Body body)
    : name_(std::move(name)),
      duration_(duration),
      input_(std::move(input)),
      output_(std::move(output)),
      body_(std::move(body)) {}

Subroutine Subroutine::identity() {
  return Subroutine("identity", 0, nullptr, nullptr,
                    [](const SignalRealization& in, RunContext&) { return in; });
}

SignalRealization Subroutine::run(const SignalRealization& in,
                                  RunContext& ctx) const {
  if (!same_structure(input_, in.structure))
    throw std::invalid_argument(name_ + ": input signal structure mismatch");
  const std::size_t before = ctx.trace.rounds.size();
  SignalRealization out = body_(in, ctx);
  const std::size_t played = ctx.trace.rounds.size() - before;
  if (played != duration_) {
    throw std::logic_error(name_ + ": played " + std::to_string(played) +
                           " rounds, declared " + std::to_string(duration_));
  }
  if (!same_structure(output_, out.structure))
    throw std::logic_error(name_ + ": output signal structure mismatch");
  return out;
}

Subroutine compose(const Subroutine& first, const Subroutine& second) {
  if (!same_structure(first.output(), second.input())) {
    throw std::invalid_argument("invalid sequel: " + second.name() +
                                " does not consume the signal produced by " +
                                first.name());
  }
  auto input = first.input() ? first.input()
                             : (first.duration() == 0 ? second.input() : nullptr);
  auto output = second.output() ? second.output()
                                : (second.duration() == 0 ? first.output() : nullptr);
  return Subroutine(
      first.name() + "+" + second.name(), first.duration() + second.duration(),
      std::move(input), std::move(output),
      [first, second](const SignalRealization& in, RunContext& ctx) {
        return second.run(first.run(in, ctx), ctx);
      });
}

// ---------------------------------------------------------------------------
// Phase plans

Rational PhasePlan::round_marginal(std::size_t k) const {
  const Rational t(static_cast<unsigned long>(duration));
  const Rational b(static_cast<unsigned long>(explored.size()));
  return 1 / t + (t - b) / t * remainder[k];
}

std::size_t PhasePlan::recommend(std::size_t round, Rng& rng,
                                 bool* dedicated) const {
  for (std::size_t k = 0; k < explored.size(); ++k) {
    if (dedicated_round[k] == round) {
      if (dedicated) *dedicated = true;
      return explored[k];
    }
  }
  if (dedicated) *dedicated = false;
  std::vector<double> weights(remainder.size());
  for (std::size_t k = 0; k < remainder.size(); ++k)
    weights[k] = to_double(remainder[k]);
  return explored[rng.categorical(weights)];
}

std::size_t phase_duration(const PolicyTable& x) {
  std::size_t widest = 0;
  for (std::size_t s = 0; s < x.num_signals(); ++s)
    widest = std::max(widest, x.support(s).size());
  const Rational pmin = x.min_positive();
  if (pmin <= 0) throw std::invalid_argument("policy table has no support");
  const mpz_class by_pmin = ceil(1 / pmin);
  return std::max<std::size_t>(widest + 1, by_pmin.get_ui());
}

PhasePlan phase_plan(std::span<const Rational> column, std::size_t duration,
                     Rng& rng) {
  PhasePlan plan;
  for (std::size_t a = 0; a < column.size(); ++a) {
    if (column[a] > 0) plan.explored.push_back(a);
  }
  if (plan.explored.empty())
    throw std::invalid_argument("phase plan: empty support");
  const std::size_t b = plan.explored.size();
  if (duration <= b)
    throw std::invalid_argument("phase plan: duration must exceed |B|");
  plan.duration = duration;
  const Rational t(static_cast<unsigned long>(duration));
  for (std::size_t a : plan.explored) {
    if (column[a] * t < 1)
      throw std::invalid_argument("phase plan: entry below 1/T");
    plan.remainder.push_back((t * column[a] - 1) /
                             Rational(static_cast<unsigned long>(duration - b)));
  }

  // Uniform injective tau: partial Fisher-Yates over the rounds.
  std::vector<std::size_t> rounds(duration);
  for (std::size_t r = 0; r < duration; ++r) rounds[r] = r;
  for (std::size_t k = 0; k < b; ++k) {
    const std::size_t j = k + rng.uniform_index(duration - k);
    std::swap(rounds[k], rounds[j]);
    plan.dedicated_round.push_back(rounds[k]);
  }
  return plan;
}

PhasePlan phase_plan(std::span<const Rational> column, Rng& rng) {
  std::size_t support = 0;
  Rational pmin = 0;
  for (const auto& v : column) {
    if (v <= 0) continue;
    ++support;
    if (pmin == 0 || v < pmin) pmin = v;
  }
  if (support == 0) throw std::invalid_argument("phase plan: empty support");
  const std::size_t duration =
      std::max<std::size_t>(support + 1, ceil(1 / pmin).get_ui());
  return phase_plan(column, duration, rng);
}

// ---------------------------------------------------------------------------
// MaxEx

MaxExPlan plan_max_ex(const UtilityStructure& game,
                      std::shared_ptr<const SignalStructure> structure,
                      const Rational& delta) {
  MaxExPlan plan;
  plan.policy = max_support_policy(game, *structure, delta);
  plan.structure = std::move(structure);
  plan.delta = delta;
  plan.duration = phase_duration(plan.policy.table);
  return plan;
}

AllInfoValue max_ex(const MaxExPlan& plan, std::size_t signal, RunContext& ctx,
                    const std::string& label) {
  const std::vector<Rational> column = plan.policy.table.column(signal);
  const PhasePlan phase = phase_plan(column, plan.duration, ctx.rng);

  PhaseRecord record;
  record.label = label;
  record.structure = plan.structure;
  record.distribution = plan.policy.table;
  record.realized_signal = signal;
  record.first_round = ctx.trace.rounds.size();
  record.duration = plan.duration;
  record.delta = plan.delta;
  const std::size_t phase_id = ctx.trace.open_phase(std::move(record));

  std::map<std::size_t, std::vector<Rational>> observed;
  for (std::size_t t = 0; t < phase.duration; ++t) {
    bool dedicated = false;
    const std::size_t a = phase.recommend(t, ctx.rng, &dedicated);
    observed[a] = play_round(ctx, phase_id, a, dedicated);
  }

  AllInfoValue out;
  for (auto& [a, outcome] : observed) {
    out.explored.push_back(a);
    out.block.push_back(std::move(outcome));
  }
  return out;
}

// ---------------------------------------------------------------------------
// IndMax

namespace {

std::vector<std::vector<std::size_t>> next_explored(
    const SignalStructure& structure, const PolicyTable& x,
    const std::vector<std::vector<std::size_t>>& current) {
  std::vector<std::vector<std::size_t>> next = current;
  for (std::size_t k = 0; k < current.size(); ++k) {
    const std::size_t s = structure.state_signal[k];
    if (s != kNoSignal) next[k] = x.support(s);
  }
  return next;
}

}  // namespace

IndMaxPlan plan_ind_max(const UtilityStructure& game, const Rational& delta) {
  require_valid(game);
  IndMaxPlan plan;
  // At least |A| phases; more while some state's set is still growing. Each
  // extra phase grows at least one set, which bounds the loop.
  const std::size_t min_phases = game.num_joint_actions();
  const std::size_t max_phases = game.num_joint_actions() * game.num_states() + 1;
  std::vector<std::vector<std::size_t>> explored(game.num_states());
  plan.explored.push_back(explored);
  plan.structures.push_back(std::make_shared<SignalStructure>(empty_signal(game)));

  for (std::size_t l = 0;; ++l) {
    if (l > max_phases) throw std::logic_error("plan_ind_max: explored sets did not stabilize");
    const auto& structure = plan.structures.back();
    MaxExPlan phase;
    if (l > 0 && same_structure(plan.phases.back().structure, structure) &&
        plan.phases.back().structure->signals == structure->signals) {
      // Stable: same structure, same max-support table.
      phase = plan.phases.back();
      phase.structure = structure;
    } else {
      phase = plan_max_ex(game, structure, delta);
    }
    auto next = next_explored(*structure, phase.policy.table, explored);
    if (l >= min_phases && next == explored) break;
    explored = std::move(next);
    plan.duration += phase.duration;
    plan.phases.push_back(std::move(phase));
    plan.explored.push_back(explored);
    plan.structures.push_back(std::make_shared<SignalStructure>(all_info(game, explored)));
  }
  return plan;
}

SignalRealization empty_realization(const UtilityStructure& game) {
  SignalRealization r;
  r.structure = std::make_shared<SignalStructure>(empty_signal(game));
  r.index = 0;
  return r;
}

Subroutine make_ind_max(const UtilityStructure& game, const IndMaxPlan& plan) {
  (void)game;
  Subroutine chain = Subroutine::identity();
  for (std::size_t l = 0; l < plan.phases.size(); ++l) {
    const MaxExPlan& phase = plan.phases[l];
    auto output = plan.structures[l + 1];
    const std::string label = "indmax[" + std::to_string(l + 1) + "]";
    Subroutine step(
        label, phase.duration, plan.structures[l], output,
        [phase, output, label](const SignalRealization& in, RunContext& ctx) {
          AllInfoValue value = max_ex(phase, in.index, ctx, label);
          auto index = output->find(value.key());
          if (!index)
            throw std::logic_error(label + ": observed signal not in the "
                                           "planned output structure");
          SignalRealization out;
          out.structure = output;
          out.index = *index;
          out.value = std::move(value);
          return out;
        });
    chain = compose(chain, step);
  }
  return chain;
}

Subroutine make_exploit(std::shared_ptr<const SignalStructure> structure,
                        PolicyTable policy, std::size_t rounds,
                        const Rational& delta) {
  auto shared_policy = std::make_shared<const PolicyTable>(std::move(policy));
  return Subroutine(
      "exploit", rounds, structure, structure,
      [structure, shared_policy, rounds, delta](const SignalRealization& in,
                                                RunContext& ctx) {
        PhaseRecord record;
        record.label = "exploit";
        record.structure = structure;
        record.distribution = *shared_policy;
        record.realized_signal = in.index;
        record.first_round = ctx.trace.rounds.size();
        record.duration = rounds;
        record.delta = delta;
        const std::size_t phase_id = ctx.trace.open_phase(std::move(record));

        std::vector<double> weights(shared_policy->num_actions());
        for (std::size_t a = 0; a < weights.size(); ++a)
          weights[a] = to_double(shared_policy->at(a, in.index));
        for (std::size_t t = 0; t < rounds; ++t)
          play_round(ctx, phase_id, ctx.rng.categorical(weights), false);
        return in;
      });
}

IndMaxResult ind_max(const UtilityStructure& game, Environment& env, Rng& rng,
                     EpisodeTrace& trace) {
  const IndMaxPlan plan = plan_ind_max(game);
  RunContext ctx{env, rng, trace};
  const std::size_t first_phase = trace.phases.size();
  IndMaxResult result;
  result.output = make_ind_max(game, plan).run(empty_realization(game), ctx);
  for (std::size_t l = 0; l < plan.phases.size(); ++l) {
    const bool last = l + 1 == plan.phases.size();
    const std::size_t index =
        last ? result.output.index : trace.phases[first_phase + l + 1].realized_signal;
    result.explored_chain.push_back(plan.structures[l + 1]->values[index].explored);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Oracle

std::vector<std::vector<std::size_t>> explorable_fixed_point(
    const UtilityStructure& game, const Rational& delta) {
  require_valid(game);
  const std::size_t num_joint = game.num_joint_actions();
  std::vector<std::vector<std::size_t>> explored(game.num_states());
  // Each non-final pass grows at least one state's set.
  for (std::size_t iter = 0; iter <= num_joint * game.num_states() + 1; ++iter) {
    const SignalStructure structure = all_info(game, explored);
    const lp::LinearProgram polytope = bic_polytope(game, structure, delta);

    // EX_s by direct maximization of x[a][s] over the polytope.
    std::vector<std::vector<std::size_t>> ex(structure.size());
    for (std::size_t s = 0; s < structure.size(); ++s) {
      for (std::size_t a = 0; a < num_joint; ++a) {
        lp::LinearProgram program = polytope;
        program.objective[policy_variable(a, s, structure.size())] = 1;
        const lp::Solution sol = lp::solve(program);
        if (sol.status != lp::Status::kOptimal) {
          throw InfeasibleError("no " + to_string(delta) +
                                "-BIC recommendation policy exists");
        }
        if (sol.objective_value > 0) ex[s].push_back(a);
      }
    }
    std::vector<std::vector<std::size_t>> next = explored;
    for (std::size_t k = 0; k < game.num_states(); ++k) {
      const std::size_t s = structure.state_signal[k];
      if (s != kNoSignal) next[k] = ex[s];
    }
    if (next == explored) return explored;
    explored = std::move(next);
  }
  throw std::logic_error("explorable_fixed_point: no fixed point reached");
}

std::vector<std::size_t> oracle_eventually_explorable(
    const UtilityStructure& game, std::size_t state) {
  if (state >= game.num_states()) throw std::out_of_range("state out of range");
  return explorable_fixed_point(game, 0)[state];
}

}  // namespace bayesex
