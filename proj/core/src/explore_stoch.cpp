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

#include "bayesex/explore_stoch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bayesex/errors.hpp"

namespace bayesex {

StochRunConfig StochRunConfig::make(const UtilityStructure& game,
                                    Rational delta, double beta,
                                    std::size_t phases) {
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("beta must lie in (0, 1)");
  auto zeta = separation_parameter(game);
  if (!zeta)
    throw NoSeparationError("utilities do not depend on the state; "
                            "separation parameter undefined");
  StochRunConfig c;
  c.delta = std::move(delta);
  c.beta = beta;
  if (phases == 0) phases = game.num_joint_actions();
  c.beta_phase = beta / static_cast<double>(phases);
  c.zeta = *zeta;
  return c;
}

std::size_t required_samples(double zeta, std::size_t num_agents,
                             std::size_t explored_size, double beta) {
  if (!(zeta > 0.0))
    throw NoSeparationError("separation parameter must be positive");
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("beta must lie in (0, 1]");
  if (num_agents == 0 || explored_size == 0)
    throw std::invalid_argument("required_samples: empty agent or action set");
  const double count = std::log(2.0 * static_cast<double>(num_agents) *
                                static_cast<double>(explored_size) / beta) /
                       (zeta * zeta);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(count)));
}

std::size_t DSample::min_count() const {
  std::size_t out = std::numeric_limits<std::size_t>::max();
  for (const auto& s : samples) out = std::min(out, s.size());
  return samples.empty() ? 0 : out;
}

DenoiseResult denoise(const UtilityStructure& game, const DSample& sample,
                      std::optional<Rational> zeta) {
  if (sample.explored.empty())
    throw std::invalid_argument("denoise: empty explored set");
  if (sample.samples.size() != sample.explored.size())
    throw std::invalid_argument("denoise: sample shape mismatch");
  const std::size_t width = game.num_agents() + 1;

  std::vector<std::vector<double>> mean(sample.explored.size(),
                                        std::vector<double>(width, 0.0));
  for (std::size_t k = 0; k < sample.explored.size(); ++k) {
    const auto& draws = sample.samples[k];
    if (draws.empty()) throw std::invalid_argument("denoise: action without samples");
    for (const auto& v : draws) {
      if (v.size() != width) throw std::invalid_argument("denoise: vector width");
      for (std::size_t c = 0; c < width; ++c) mean[k][c] += v[c];
    }
    for (double& m : mean[k]) m /= static_cast<double>(draws.size());
  }

  DenoiseResult out;
  out.distance = std::numeric_limits<double>::infinity();
  for (std::size_t state = 0; state < game.num_states(); ++state) {
    double gap = 0.0;
    for (std::size_t k = 0; k < sample.explored.size(); ++k) {
      const std::vector<Rational> exact = game.outcome(sample.explored[k], state);
      for (std::size_t c = 0; c < width; ++c)
        gap = std::max(gap, std::abs(mean[k][c] - to_double(exact[c])));
    }
    if (gap < out.distance) {
      out.distance = gap;
      out.best_state = state;
    }
  }
  out.value = make_all_info_value(game, sample.explored, out.best_state);
  if (zeta) out.certified = out.distance < to_double(*zeta) / 2.0;
  return out;
}

Rational transfer_beta_bound(const UtilityStructure& game,
                             const SignalStructure& structure,
                             const Rational& delta, const Rational& pmin) {
  Rational lightest = 1;
  for (std::size_t s = 0; s < structure.size(); ++s)
    lightest = std::min(lightest, structure.mass(s, game.prior));
  return delta * pmin * lightest / 2;
}

MaxExploreDeltaPlan plan_max_explore_delta(
    const UtilityStructure& game,
    std::shared_ptr<const SignalStructure> structure, const Rational& delta,
    double beta_out, const Rational& zeta) {
  MaxExploreDeltaPlan plan;
  plan.phase = plan_max_ex(game, std::move(structure), delta);
  std::size_t widest = 0;
  for (const auto& set : plan.phase.policy.explorable.sets)
    widest = std::max(widest, set.size());
  plan.meta_rounds =
      required_samples(to_double(zeta), game.num_agents(), widest, beta_out);
  plan.beta_out = beta_out;
  plan.input_beta_bound = transfer_beta_bound(game, *plan.phase.structure, delta,
                                              plan.phase.policy.pmin);
  return plan;
}

MaxExploreOutcome max_explore_delta(const UtilityStructure& game,
                                    const MaxExploreDeltaPlan& plan,
                                    std::size_t signal, double beta_in,
                                    RunContext& ctx, const std::string& label) {
  const MaxExPlan& phase = plan.phase;
  const std::vector<Rational> column = phase.policy.table.column(signal);

  MaxExploreOutcome out;
  out.premise_ok = beta_in <= to_double(plan.input_beta_bound);

  PhaseRecord record;
  record.label = label;
  record.structure = phase.structure;
  record.distribution = phase.policy.table;
  record.realized_signal = signal;
  record.first_round = ctx.trace.rounds.size();
  record.duration = plan.duration();
  record.delta = phase.delta;
  record.premise_ok = out.premise_ok;
  if (!out.premise_ok) {
    std::ostringstream note;
    note << label << ": input signal error " << beta_in
         << " exceeds delta*pmin*min_s Pr[s]/2 = "
         << to_double(plan.input_beta_bound);
    record.premise_note = note.str();
  }
  const std::size_t phase_id = ctx.trace.open_phase(std::move(record));

  DSample& sample = out.sample;
  for (std::size_t a = 0; a < column.size(); ++a) {
    if (column[a] > 0) sample.explored.push_back(a);
  }
  sample.samples.resize(sample.explored.size());

  for (std::size_t r = 0; r < plan.meta_rounds; ++r) {
    const PhasePlan schedule = phase_plan(column, phase.duration, ctx.rng);
    for (std::size_t t = 0; t < schedule.duration; ++t) {
      bool dedicated = false;
      const std::size_t a = schedule.recommend(t, ctx.rng, &dedicated);
      const auto& outcome = play_round(ctx, phase_id, a, dedicated);
      const auto k = static_cast<std::size_t>(
          std::lower_bound(sample.explored.begin(), sample.explored.end(), a) -
          sample.explored.begin());
      std::vector<double> v(outcome.size());
      for (std::size_t c = 0; c < outcome.size(); ++c) v[c] = to_double(outcome[c]);
      sample.samples[k].push_back(std::move(v));
    }
  }
  out.denoised = denoise(game, sample, separation_parameter(game));
  return out;
}

RepeatMaxExplorePlan plan_repeat_max_explore(const UtilityStructure& game,
                                             const Rational& delta, double beta) {
  RepeatMaxExplorePlan plan;
  StochRunConfig::make(game, delta, beta);  // argument checks before planning
  plan.structures = plan_ind_max(game, delta);
  plan.config = StochRunConfig::make(game, delta, beta, plan.structures.phases.size());
  Rational bound = 1;
  for (std::size_t l = 0; l < plan.structures.phases.size(); ++l) {
    MaxExploreDeltaPlan phase;
    if (l > 0 && plan.structures.phases[l].structure->signals ==
                     plan.structures.phases[l - 1].structure->signals) {
      phase = plan.phases.back();
      phase.phase = plan.structures.phases[l];
    } else {
      phase = plan_max_explore_delta(game, plan.structures.structures[l], delta,
                                     plan.config.beta_phase, plan.config.zeta);
    }
    bound = std::min(bound, phase.input_beta_bound);
    plan.duration += phase.duration();
    plan.phases.push_back(std::move(phase));
  }
  plan.overall_beta_bound = bound;
  plan.overall_premise_ok = beta <= to_double(plan.overall_beta_bound);
  return plan;
}

RepeatMaxExploreResult repeat_max_explore_delta(const UtilityStructure& game,
                                                const RepeatMaxExplorePlan& plan,
                                                RunContext& ctx) {
  RepeatMaxExploreResult result;
  const auto& structures = plan.structures.structures;
  std::size_t realized = 0;  // the empty signal
  for (std::size_t l = 0; l < plan.phases.size(); ++l) {
    const std::string label = "maxexplore[" + std::to_string(l + 1) + "]";
    const double beta_in = static_cast<double>(l) * plan.config.beta_phase;
    MaxExploreOutcome outcome =
        max_explore_delta(game, plan.phases[l], realized, beta_in, ctx, label);
    if (!outcome.premise_ok)
      result.premise_violations.push_back(ctx.trace.phases.back().premise_note);

    const SignalStructure& next = *structures[l + 1];
    if (auto index = next.find(outcome.denoised.value.key())) {
      realized = *index;
    } else {
      // The snapped block is not a value of the planned structure (the
      // input signal was wrong); fall back to the best-fit state's signal.
      ++result.off_support;
      realized = next.state_signal[outcome.denoised.best_state];
      if (realized == kNoSignal)
        throw std::logic_error(label + ": best-fit state has no signal");
    }
    result.explored_chain.push_back(next.values[realized].explored);
  }
  result.output.structure = structures.back();
  result.output.index = realized;
  result.output.value = structures.back()->values[realized];
  return result;
}

std::vector<std::size_t> oracle_delta_explorable(const UtilityStructure& game,
                                                 std::size_t state,
                                                 const Rational& delta) {
  if (state >= game.num_states()) throw std::out_of_range("state out of range");
  return explorable_fixed_point(game, delta)[state];
}

}  // namespace bayesex
