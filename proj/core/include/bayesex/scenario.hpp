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


// JSON scenario files and result emission.
//
// Scenario layout:
//   {"agents": [{"actions": ["a1", "a2"]}, ...],
//    "states": ["s1", ...],
//    "prior": ["1/4", ...],
//    "utilities": [agent][joint][state],
//    "reward": [joint][state],
//    "noise": {"kind": "deterministic" | "bernoulli"},
//    "fixed_state": "s1"}
// Joint actions are listed row-major with agent 0 most significant. Numbers
// may be "p/q" strings, decimal strings or JSON integers; all are read
// exactly. "noise" and "fixed_state" are optional.

#ifndef BAYESEX_SCENARIO_HPP_
#define BAYESEX_SCENARIO_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bayesex/game.hpp"
#include "bayesex/harness.hpp"

namespace bayesex {

/// Malformed scenario document (syntax or shape). Semantic problems of a
/// well-formed document raise ValidationError instead.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Scenario {
  UtilityStructure game;
  NoiseModel noise;
  std::optional<std::size_t> fixed_state;

  bool operator==(const Scenario& other) const;
};

/// Parses without validating the game; see validate().
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical JSON (rationals as "p/q" strings).
std::string serialize_scenario(const Scenario& scenario);

/// Names of joint actions as a set, e.g. "{a1, a2}".
std::string format_action_set(const UtilityStructure& game,
                              const std::vector<std::size_t>& joints);

/// Trace, report and audit of one episode as a JSON document.
std::string episode_to_json(const UtilityStructure& game,
                            const EpisodeResult& episode);

/// "T,T0,benchmark,expected_reward,regret,delta,beta,seed"
std::string report_csv_header();

/// One CSV row. Deterministic reports use exact rationals; stochastic ones
/// print decimals.
std::string report_csv_row(const RegretReport& report);

}  // namespace bayesex

#endif  // BAYESEX_SCENARIO_HPP_
