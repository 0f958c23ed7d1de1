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

// Multi-round exploration with deterministic utilities.
//
// A Subroutine is a fixed-duration recommendation procedure: it receives the
// principal's current signal, issues one recommendation per round and hands
// on a new signal. MaxEx explores every signal-explorable joint action while
// keeping each round's recommendation law equal to a max-support BIC table;
// IndMax chains at least |A| MaxEx phases, feeding each phase the AllInfo signal of
// what the previous phases explored.

#ifndef BAYESEX_EXPLORE_DET_HPP_
#define BAYESEX_EXPLORE_DET_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bayesex/game.hpp"
#include "bayesex/policy.hpp"
#include "bayesex/random.hpp"
#include "bayesex/signal.hpp"
#include "bayesex/trace.hpp"

namespace bayesex {

/// The world the principal interacts with: plays a joint action at the
/// hidden state and reports the realized (f; u_1 .. u_n).
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::vector<Rational> play(std::size_t joint, Rng& rng) = 0;
};

class SimulatedEnvironment final : public Environment {
 public:
  SimulatedEnvironment(const UtilityStructure& game, std::size_t state,
                       NoiseModel noise = {});

  std::vector<Rational> play(std::size_t joint, Rng& rng) override;

  std::size_t state() const { return state_; }
  std::size_t plays() const { return plays_; }

 private:
  const UtilityStructure* game_;
  std::size_t state_;
  NoiseModel noise_;
  std::size_t plays_ = 0;
};

/// What the principal holds when a subroutine starts or ends.
struct SignalRealization {
  std::shared_ptr<const SignalStructure> structure;
  std::size_t index = kNoSignal;  // realized value within `structure`
  AllInfoValue value;
};

struct RunContext {
  Environment& env;
  Rng& rng;
  EpisodeTrace& trace;
};

/// Plays `joint`, appends the round to the trace and returns the outcome.
const std::vector<Rational>& play_round(RunContext& ctx, std::size_t phase,
                                        std::size_t joint, bool dedicated);

class Subroutine {
 public:
  using Body =
      std::function<SignalRealization(const SignalRealization&, RunContext&)>;

  /// `input`/`output` declare the signal structures consumed and produced;
  /// null means "any" (used by the identity).
  Subroutine(std::string name, std::size_t duration,
             std::shared_ptr<const SignalStructure> input,
             std::shared_ptr<const SignalStructure> output, Body body);

  /// Zero rounds; passes its input through.
  static Subroutine identity();

  const std::string& name() const { return name_; }
  std::size_t duration() const { return duration_; }
  const std::shared_ptr<const SignalStructure>& input() const { return input_; }
  const std::shared_ptr<const SignalStructure>& output() const { return output_; }

  /// Runs exactly duration() rounds. Throws std::logic_error if the body
  /// plays a different number of rounds.
  SignalRealization run(const SignalRealization& in, RunContext& ctx) const;

 private:
  std::string name_;
  std::size_t duration_;
  std::shared_ptr<const SignalStructure> input_;
  std::shared_ptr<const SignalStructure> output_;
  Body body_;
};

/// first followed by second. Throws std::invalid_argument when second does
/// not consume the signal structure that first produces.
Subroutine compose(const Subroutine& first, const Subroutine& second);

/// One MaxEx phase for a realized signal: explored set B, duration T,
/// dedicated rounds tau (0-based, parallel to `explored`) and the
/// distribution D over B for the remaining rounds.
struct PhasePlan {
  std::vector<std::size_t> explored;
  std::size_t duration = 0;
  std::vector<std::size_t> dedicated_round;
  std::vector<Rational> remainder;

  /// Pr[round t recommends explored[k]] = 1/T + (T - |B|)/T * D(k).
  Rational round_marginal(std::size_t k) const;

  /// Recommendation for 0-based round t; draws from D for non-dedicated
  /// rounds.
  std::size_t recommend(std::size_t round, Rng& rng, bool* dedicated) const;
};

/// T = max(1 + max_s |support(s)|, ceil(1 / min positive entry)). Depends on
/// the table only, never on the realized signal.
std::size_t phase_duration(const PolicyTable& x);

/// Plan for one column x (indexed by joint action) with the given duration.
/// Throws std::invalid_argument if the column has no support, if
/// duration <= |B| or if some supported entry is below 1/duration.
PhasePlan phase_plan(std::span<const Rational> column, std::size_t duration,
                     Rng& rng);

/// Same, with T = max(1 + |B|, ceil(1 / min positive entry of the column)).
PhasePlan phase_plan(std::span<const Rational> column, Rng& rng);

/// Everything MaxEx needs before seeing the signal.
struct MaxExPlan {
  std::shared_ptr<const SignalStructure> structure;
  MaxSupportPolicy policy;
  Rational delta;
  std::size_t duration = 0;
};

MaxExPlan plan_max_ex(const UtilityStructure& game,
                      std::shared_ptr<const SignalStructure> structure,
                      const Rational& delta = 0);

/// Runs one MaxEx phase for realized signal `signal` and returns
/// AllInfo(played actions) as observed.
AllInfoValue max_ex(const MaxExPlan& plan, std::size_t signal, RunContext& ctx,
                    const std::string& label = "maxex");

/// Signal structures and max-support tables of every IndMax phase.
struct IndMaxPlan {
  /// At least |A| phases, continuing while a phase still changes the
  /// explored map. The count depends on the game only, never on the state.
  std::vector<MaxExPlan> phases;
  /// structures[l] is the signal entering phase l; structures.back() is the
  /// output structure (phases.size() + 1 entries).
  std::vector<std::shared_ptr<const SignalStructure>> structures;
  /// explored[l][state] = B_{l+1} for l = 0..phases.size() (B_1 is empty).
  std::vector<std::vector<std::vector<std::size_t>>> explored;
  std::size_t duration = 0;
};

/// Derives all phase structures from the utility structure alone.
IndMaxPlan plan_ind_max(const UtilityStructure& game, const Rational& delta = 0);

/// IndMax as a composed subroutine (input: empty signal).
Subroutine make_ind_max(const UtilityStructure& game, const IndMaxPlan& plan);

/// A subroutine of `rounds` rounds that recommends from `policy` at the
/// realized signal of `structure`.
Subroutine make_exploit(std::shared_ptr<const SignalStructure> structure,
                        PolicyTable policy, std::size_t rounds,
                        const Rational& delta = 0);

struct IndMaxResult {
  SignalRealization output;
  /// Realized explored set after each phase.
  std::vector<std::vector<std::size_t>> explored_chain;
};

/// Plans and runs IndMax against `env`.
IndMaxResult ind_max(const UtilityStructure& game, Environment& env, Rng& rng,
                     EpisodeTrace& trace);

/// The initial realization: the empty signal.
SignalRealization empty_realization(const UtilityStructure& game);

/// Fixed point of B <- EX_delta[AllInfo(B)] started from the empty map,
/// for every state at once. Throws InfeasibleError when no delta-BIC policy
/// exists for the empty signal.
std::vector<std::vector<std::size_t>> explorable_fixed_point(
    const UtilityStructure& game, const Rational& delta);

/// Eventually-explorable joint actions at `state` (delta = 0).
std::vector<std::size_t> oracle_eventually_explorable(
    const UtilityStructure& game, std::size_t state);

}  // namespace bayesex

#endif  // BAYESEX_EXPLORE_DET_HPP_
