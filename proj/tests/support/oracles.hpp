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


// Reference computations written directly from the definitions, kept free
// of the library's own helpers so they can cross-check it.

#ifndef BAYESEX_TESTS_ORACLES_HPP_
#define BAYESEX_TESTS_ORACLES_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "bayesex/game.hpp"
#include "bayesex/lp.hpp"
#include "bayesex/policy.hpp"
#include "bayesex/rational.hpp"
#include "bayesex/signal.hpp"

namespace bayesex::testing {

/// Mixed-radix digits of `joint`, agent 0 most significant.
inline std::vector<std::size_t> digits(const UtilityStructure& g, std::size_t joint) {
  std::vector<std::size_t> out(g.num_agents());
  for (std::size_t i = g.num_agents(); i-- > 0;) {
    out[i] = joint % g.actions[i].size();
    joint /= g.actions[i].size();
  }
  return out;
}

inline std::size_t undigits(const UtilityStructure& g, const std::vector<std::size_t>& d) {
  std::size_t joint = 0;
  for (std::size_t i = 0; i < g.num_agents(); ++i) joint = joint * g.actions[i].size() + d[i];
  return joint;
}

/// E[(u_i(a_i, a_-i) - u_i(dev, a_-i)) 1{rec_i = a_i}].
inline Rational gain_oracle(const UtilityStructure& g, const SignalStructure& s,
                            const PolicyTable& x, std::size_t agent,
                            std::size_t action, std::size_t deviation) {
  Rational total = 0;
  for (std::size_t j = 0; j < g.num_joint_actions(); ++j) {
    auto d = digits(g, j);
    if (d[agent] != action) continue;
    d[agent] = deviation;
    const std::size_t dev = undigits(g, d);
    for (std::size_t sig = 0; sig < s.size(); ++sig)
      for (std::size_t t = 0; t < g.num_states(); ++t)
        total += g.prior[t] * s.table[sig][t] * x.at(j, sig) *
                 (g.utility[agent][j][t] - g.utility[agent][dev][t]);
  }
  return total;
}

inline Rational mass_oracle(const UtilityStructure& g, const SignalStructure& s,
                            const PolicyTable& x, std::size_t agent,
                            std::size_t action) {
  Rational total = 0;
  for (std::size_t j = 0; j < g.num_joint_actions(); ++j) {
    if (digits(g, j)[agent] != action) continue;
    for (std::size_t sig = 0; sig < s.size(); ++sig)
      for (std::size_t t = 0; t < g.num_states(); ++t)
        total += g.prior[t] * s.table[sig][t] * x.at(j, sig);
  }
  return total;
}

inline Rational reward_oracle(const UtilityStructure& g, const SignalStructure& s,
                              const PolicyTable& x) {
  Rational total = 0;
  for (std::size_t j = 0; j < g.num_joint_actions(); ++j)
    for (std::size_t sig = 0; sig < s.size(); ++sig)
      for (std::size_t t = 0; t < g.num_states(); ++t)
        total += g.prior[t] * s.table[sig][t] * x.at(j, sig) * g.reward[j][t];
  return total;
}

inline bool bic_oracle(const UtilityStructure& g, const SignalStructure& s,
                       const PolicyTable& x, const Rational& delta = 0) {
  for (std::size_t i = 0; i < g.num_agents(); ++i)
    for (std::size_t a = 0; a < g.actions[i].size(); ++a)
      for (std::size_t b = 0; b < g.actions[i].size(); ++b) {
        if (a == b) continue;
        if (gain_oracle(g, s, x, i, a, b) < delta * mass_oracle(g, s, x, i, a))
          return false;
      }
  return true;
}

/// Best expected reward over deterministic signal -> joint-action rules
/// that pass the incentive check. nullopt if none does.
inline std::optional<Rational> best_deterministic_rule(const UtilityStructure& g,
                                                       const SignalStructure& s,
                                                       const Rational& delta = 0) {
  const std::size_t na = g.num_joint_actions();
  std::vector<std::size_t> rule(s.size(), 0);
  std::optional<Rational> best;
  while (true) {
    PolicyTable x(na, s.size());
    for (std::size_t sig = 0; sig < s.size(); ++sig) x.at(rule[sig], sig) = 1;
    if (bic_oracle(g, s, x, delta)) {
      const Rational r = reward_oracle(g, s, x);
      if (!best || r > *best) best = r;
    }
    std::size_t k = 0;
    while (k < rule.size() && ++rule[k] == na) rule[k++] = 0;
    if (k == rule.size()) break;
  }
  return best;
}

/// Solves A x = b exactly; nullopt if singular.
inline std::optional<std::vector<Rational>> gauss(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = 0; c < n; ++c) b[c] /= a[c][c];
  return b;
}

inline bool feasible(const lp::LinearProgram& p, const std::vector<Rational>& x) {
  for (const auto& v : x)
    if (v < 0) return false;
  for (const auto& c : p.constraints) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coefficients[j] * x[j];
    if (c.relation == lp::Relation::kLessEqual && lhs > c.rhs) return false;
    if (c.relation == lp::Relation::kGreaterEqual && lhs < c.rhs) return false;
    if (c.relation == lp::Relation::kEqual && lhs != c.rhs) return false;
  }
  return true;
}

/// Optimal value of a small bounded LP (x >= 0) by enumerating every basic
/// point. nullopt when infeasible. Maximization only; no upper bounds.
inline std::optional<Rational> vertex_optimum(const lp::LinearProgram& p) {
  const std::size_t n = p.num_variables();
  // Candidate hyperplanes: constraint rows, then x_j = 0.
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (const auto& c : p.constraints) {
    rows.push_back(c.coefficients);
    rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> e(n, 0);
    e[j] = 1;
    rows.push_back(e);
    rhs.push_back(0);
  }
  std::optional<Rational> best;
  std::vector<std::size_t> pick(n);
  for (std::size_t k = 0; k < n; ++k) pick[k] = k;
  const std::size_t m = rows.size();
  if (m < n) return std::nullopt;
  while (true) {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (std::size_t k : pick) {
      a.push_back(rows[k]);
      b.push_back(rhs[k]);
    }
    if (auto x = gauss(a, b); x && feasible(p, *x)) {
      Rational v = 0;
      for (std::size_t j = 0; j < n; ++j) v += p.objective[j] * (*x)[j];
      if (!best || v > *best) best = v;
    }
    // Next n-subset of m in lexicographic order.
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == m - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

}  // namespace bayesex::testing

#endif  // BAYESEX_TESTS_ORACLES_HPP_
