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

#include "bayesex/signal.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bayesex {

std::string AllInfoValue::key() const {
  std::string out = "B={";
  for (std::size_t k = 0; k < explored.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(explored[k]);
  }
  out += "}";
  for (std::size_t k = 0; k < explored.size(); ++k) {
    out += ";" + std::to_string(explored[k]) + ":[";
    for (std::size_t c = 0; c < block[k].size(); ++c) {
      if (c) out += ",";
      out += to_string(block[k][c]);
    }
    out += "]";
  }
  return out;
}

AllInfoValue make_all_info_value(const UtilityStructure& game,
                                 std::vector<std::size_t> explored,
                                 std::size_t state) {
  std::sort(explored.begin(), explored.end());
  explored.erase(std::unique(explored.begin(), explored.end()), explored.end());
  AllInfoValue value;
  value.block.reserve(explored.size());
  for (std::size_t a : explored) value.block.push_back(game.outcome(a, state));
  value.explored = std::move(explored);
  return value;
}

std::optional<std::size_t> SignalStructure::find(std::string_view key) const {
  for (std::size_t s = 0; s < signals.size(); ++s) {
    if (signals[s] == key) return s;
  }
  return std::nullopt;
}

Rational SignalStructure::mass(std::size_t signal,
                               std::span<const Rational> prior) const {
  Rational total = 0;
  for (std::size_t k = 0; k < prior.size(); ++k)
    total += prior[k] * table[signal][k];
  return total;
}

SignalStructure make_signal_structure(std::vector<std::string> keys,
                                      std::vector<std::vector<Rational>> table,
                                      std::span<const Rational> prior) {
  if (keys.size() != table.size())
    throw std::invalid_argument("signal keys and table rows disagree");
  const std::size_t num_states = prior.size();
  SignalStructure out;
  for (std::size_t s = 0; s < keys.size(); ++s) {
    if (table[s].size() != num_states)
      throw std::invalid_argument("signal table column count mismatch");
    Rational m = 0;
    for (std::size_t k = 0; k < num_states; ++k) {
      if (table[s][k] < 0 || table[s][k] > 1)
        throw std::invalid_argument("signal probability out of [0,1]");
      m += prior[k] * table[s][k];
    }
    if (m == 0) continue;
    out.signals.push_back(std::move(keys[s]));
    out.table.push_back(std::move(table[s]));
  }
  if (out.signals.empty())
    throw std::invalid_argument("signal structure has no positive-mass value");

  bool point_masses = true;
  std::vector<std::size_t> state_signal(num_states, kNoSignal);
  for (std::size_t k = 0; k < num_states; ++k) {
    Rational column = 0;
    std::size_t ones = 0;
    std::size_t nonzero = 0;
    for (std::size_t s = 0; s < out.size(); ++s) {
      column += out.table[s][k];
      if (out.table[s][k] != 0) ++nonzero;
      if (out.table[s][k] == 1) {
        ++ones;
        state_signal[k] = s;
      }
    }
    if (prior[k] > 0 && column != 1)
      throw std::invalid_argument("signal column " + std::to_string(k) +
                                  " sums to " + to_string(column));
    if (nonzero > 1 || (prior[k] > 0 && ones != 1)) point_masses = false;
  }
  if (point_masses) out.state_signal = std::move(state_signal);
  return out;
}

SignalStructure empty_signal(const UtilityStructure& game) {
  std::vector<std::vector<Rational>> table(
      1, std::vector<Rational>(game.num_states(), Rational(1)));
  SignalStructure out = make_signal_structure({"bot"}, std::move(table),
                                              game.prior);
  out.values.push_back(AllInfoValue{});
  return out;
}

SignalStructure all_info(const UtilityStructure& game,
                         const std::vector<std::vector<std::size_t>>& explored) {
  const std::size_t num_states = game.num_states();
  if (explored.size() != num_states)
    throw std::invalid_argument("explored-set map must cover every state");

  std::vector<std::string> keys;
  std::vector<AllInfoValue> values;
  std::vector<std::vector<Rational>> table;
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < num_states; ++k) {
    AllInfoValue v = make_all_info_value(game, explored[k], k);
    std::string key = v.key();
    auto [it, inserted] = index.emplace(key, keys.size());
    if (inserted) {
      keys.push_back(key);
      values.push_back(std::move(v));
      table.emplace_back(num_states, Rational(0));
    }
    table[it->second][k] = 1;
  }

  std::vector<std::string> kept_keys = keys;
  SignalStructure out =
      make_signal_structure(std::move(kept_keys), std::move(table), game.prior);
  for (const auto& key : out.signals) {
    out.values.push_back(values[index.at(key)]);
  }
  if (!out.deterministic()) {
    // Every state maps to exactly one group, so this cannot happen unless
    // all prior mass is zero, which validation rejects.
    throw std::logic_error("AllInfo structure must be state-determined");
  }
  return out;
}

Coupling natural_coupling(const SignalStructure& s, const SignalStructure& t) {
  if (!s.deterministic() || !t.deterministic())
    throw std::invalid_argument("natural coupling needs state-determined signals");
  const std::size_t num_states = s.num_states();
  Coupling c;
  c.joint.assign(num_states, std::vector<std::vector<Rational>>(
                                 s.size(), std::vector<Rational>(t.size(), 0)));
  for (std::size_t k = 0; k < num_states; ++k) {
    const std::size_t a = s.state_signal[k];
    const std::size_t b = t.state_signal[k];
    if (a == kNoSignal || b == kNoSignal) continue;
    c.joint[k][a][b] = 1;
  }
  return c;
}

namespace {

void check_coupling(const SignalStructure& s, const SignalStructure& t,
                    const Coupling& coupling, std::span<const Rational> prior) {
  const std::size_t num_states = prior.size();
  if (coupling.joint.size() != num_states)
    throw std::invalid_argument("inconsistent coupling: state count");
  for (std::size_t k = 0; k < num_states; ++k) {
    if (coupling.joint[k].size() != s.size())
      throw std::invalid_argument("inconsistent coupling: first signal size");
    if (prior[k] == 0) continue;
    std::vector<Rational> col(t.size(), 0);
    for (std::size_t a = 0; a < s.size(); ++a) {
      if (coupling.joint[k][a].size() != t.size())
        throw std::invalid_argument("inconsistent coupling: second signal size");
      Rational row = 0;
      for (std::size_t b = 0; b < t.size(); ++b) {
        if (coupling.joint[k][a][b] < 0)
          throw std::invalid_argument("inconsistent coupling: negative entry");
        row += coupling.joint[k][a][b];
        col[b] += coupling.joint[k][a][b];
      }
      if (row != s.table[a][k])
        throw std::invalid_argument("inconsistent coupling: first marginal");
    }
    for (std::size_t b = 0; b < t.size(); ++b) {
      if (col[b] != t.table[b][k])
        throw std::invalid_argument("inconsistent coupling: second marginal");
    }
  }
}

}  // namespace

bool at_least_as_informative(const SignalStructure& s,
                             const SignalStructure& t,
                             const Coupling& coupling,
                             std::span<const Rational> prior) {
  check_coupling(s, t, coupling, prior);
  const std::size_t num_states = prior.size();
  for (std::size_t a = 0; a < s.size(); ++a) {
    const Rational mass_s = s.mass(a, prior);
    for (std::size_t b = 0; b < t.size(); ++b) {
      Rational mass_st = 0;
      for (std::size_t k = 0; k < num_states; ++k)
        mass_st += prior[k] * coupling.joint[k][a][b];
      if (mass_st == 0) continue;
      for (std::size_t k = 0; k < num_states; ++k) {
        // Pr[k | a, b] == Pr[k | a], cross-multiplied.
        const Rational lhs = prior[k] * coupling.joint[k][a][b] * mass_s;
        const Rational rhs = prior[k] * s.table[a][k] * mass_st;
        if (lhs != rhs) return false;
      }
    }
  }
  return true;
}

bool determines(const SignalStructure& s, const SignalStructure& t,
                std::span<const Rational> prior) {
  if (!s.deterministic() || !t.deterministic())
    throw std::invalid_argument("determines() needs state-determined signals");
  std::vector<std::size_t> image(s.size(), kNoSignal);
  for (std::size_t k = 0; k < prior.size(); ++k) {
    if (prior[k] == 0) continue;
    const std::size_t a = s.state_signal[k];
    const std::size_t b = t.state_signal[k];
    if (image[a] == kNoSignal) {
      image[a] = b;
    } else if (image[a] != b) {
      return false;
    }
  }
  return true;
}

Rational approx_distance(const SignalStructure& s, const SignalStructure& s_hat,
                         const Coupling& coupling,
                         std::span<const Rational> prior) {
  for (const auto& key : s_hat.signals) {
    if (!s.find(key))
      throw std::invalid_argument("mismatched signal universes: " + key);
  }
  check_coupling(s, s_hat, coupling, prior);
  Rational worst = 0;
  for (std::size_t k = 0; k < prior.size(); ++k) {
    if (prior[k] == 0) continue;
    Rational mismatch = 0;
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = 0; b < s_hat.size(); ++b) {
        if (s.signals[a] != s_hat.signals[b])
          mismatch += coupling.joint[k][a][b];
      }
    }
    if (mismatch > worst) worst = mismatch;
  }
  return worst;
}

}  // namespace bayesex
