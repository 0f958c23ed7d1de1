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

// Finite-support signals correlated with the state.

#ifndef BAYESEX_SIGNAL_HPP_
#define BAYESEX_SIGNAL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bayesex/game.hpp"
#include "bayesex/rational.hpp"

namespace bayesex {

inline constexpr std::size_t kNoSignal = static_cast<std::size_t>(-1);

/// Explored set B (sorted joint-action indices) plus the utility block
/// (f; u_1 .. u_n) of every a in B at the generating state.
struct AllInfoValue {
  std::vector<std::size_t> explored;
  std::vector<std::vector<Rational>> block;

  /// Canonical serialization; two values are equal iff their keys are.
  std::string key() const;

  bool operator==(const AllInfoValue&) const = default;
};

/// AllInfo(B) evaluated at one state.
AllInfoValue make_all_info_value(const UtilityStructure& game,
                                 std::vector<std::size_t> explored,
                                 std::size_t state);

/// Joint law of (signal, state) as a signal-by-state table of
/// Pr[S = s | state]. Signals with zero prior mass are never listed.
struct SignalStructure {
  std::vector<std::string> signals;          // canonical keys
  std::vector<std::vector<Rational>> table;  // [signal][state]
  /// For AllInfo structures, the value behind each signal; else empty.
  std::vector<AllInfoValue> values;
  /// state -> signal when every column is a point mass; kNoSignal for
  /// zero-prior states whose signal was dropped. Empty otherwise.
  std::vector<std::size_t> state_signal;

  std::size_t size() const { return signals.size(); }
  std::size_t num_states() const { return table.empty() ? 0 : table[0].size(); }
  bool deterministic() const { return !state_signal.empty(); }
  std::optional<std::size_t> find(std::string_view key) const;

  /// Pr[S = s] under `prior`.
  Rational mass(std::size_t signal, std::span<const Rational> prior) const;
};

/// Builds a structure from keys and a conditional table, dropping signals of
/// zero prior mass and checking that every positive-prior column sums to 1.
SignalStructure make_signal_structure(std::vector<std::string> keys,
                                      std::vector<std::vector<Rational>> table,
                                      std::span<const Rational> prior);

/// The signal that always takes the same value.
SignalStructure empty_signal(const UtilityStructure& game);

/// AllInfo(B) where B may depend on the state: states are grouped by the
/// value (B(state), U(B(state), state)).
SignalStructure all_info(const UtilityStructure& game,
                         const std::vector<std::vector<std::size_t>>& explored);

/// Pr[S = s, S' = s' | state], indexed [state][s][s'].
struct Coupling {
  std::vector<std::vector<std::vector<Rational>>> joint;
};

/// Coupling of two state-determined signals driven by the same state.
Coupling natural_coupling(const SignalStructure& s, const SignalStructure& t);

/// True iff Pr[state | S, S'] = Pr[state | S] wherever (S, S') has mass.
/// Throws std::invalid_argument if the coupling's marginals disagree with
/// the structures.
bool at_least_as_informative(const SignalStructure& s,
                             const SignalStructure& t,
                             const Coupling& coupling,
                             std::span<const Rational> prior);

/// Fast path for state-determined signals: the value of `s` pins down the
/// value of `t` on every positive-prior state.
bool determines(const SignalStructure& s, const SignalStructure& t,
                std::span<const Rational> prior);

/// max over positive-prior states of Pr[S != S_hat | state], comparing
/// signal values by key. Every value of `s_hat` must be a value of `s`.
Rational approx_distance(const SignalStructure& s, const SignalStructure& s_hat,
                         const Coupling& coupling,
                         std::span<const Rational> prior);

}  // namespace bayesex

#endif  // BAYESEX_SIGNAL_HPP_
