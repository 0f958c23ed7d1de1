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

#ifndef BAYESEX_TRACE_HPP_
#define BAYESEX_TRACE_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bayesex/game.hpp"
#include "bayesex/policy.hpp"
#include "bayesex/rational.hpp"
#include "bayesex/signal.hpp"

namespace bayesex {

/// One deviation check of an incentive audit.
struct AuditEntry {
  std::size_t agent = 0;
  std::size_t action = 0;     // recommended
  std::size_t deviation = 0;  // alternative
  Rational margin;            // gain - delta * mass; pass iff >= 0
  bool pass = true;
};

struct AuditReport {
  Rational delta;
  std::vector<AuditEntry> entries;

  bool pass() const;
  /// First failing entry, or nullptr.
  const AuditEntry* first_failure() const;
};

/// A stretch of rounds sharing one analytic recommendation table.
struct PhaseRecord {
  std::string label;
  std::shared_ptr<const SignalStructure> structure;
  PolicyTable distribution;  // x[a][s] used in every round of the phase
  std::size_t realized_signal = kNoSignal;
  std::size_t first_round = 0;
  std::size_t duration = 0;
  /// delta the phase's table is meant to satisfy.
  Rational delta;
  AuditReport audit;
  bool audited = false;
  /// Stochastic phases: whether the input-confidence premise held.
  bool premise_ok = true;
  std::string premise_note;
};

struct RoundRecord {
  std::size_t phase = 0;
  std::size_t joint = 0;
  bool dedicated = false;
  std::vector<Rational> outcome;  // realized (f; u_1 .. u_n)
  bool audit_pass = false;
};

struct EpisodeTrace {
  std::size_t state = 0;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::vector<PhaseRecord> phases;
  std::vector<RoundRecord> rounds;

  std::size_t open_phase(PhaseRecord record);
};

}  // namespace bayesex

#endif  // BAYESEX_TRACE_HPP_
