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


#include <algorithm>
#include <random>

#include "bayesex/errors.hpp"
#include "bayesex/explore_det.hpp"
#include "bayesex/policy.hpp"
#include "doctest.h"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace bayesex;
using namespace bayesex::testing;

namespace {

using Map = std::vector<std::vector<std::size_t>>;

/// Random column-stochastic table with entries on a small lattice.
PolicyTable random_table(std::mt19937_64& gen, std::size_t actions, std::size_t signals) {
  PolicyTable x(actions, signals);
  for (std::size_t s = 0; s < signals; ++s) {
    std::vector<long> w(actions);
    long total = 0;
    for (auto& v : w) total += v = static_cast<long>(gen() % 4);
    if (total == 0) {
      w[gen() % actions] = 1;
      total = 1;
    }
    for (std::size_t a = 0; a < actions; ++a) x.at(a, s) = Rational(w[a], total);
  }
  for (std::size_t s = 0; s < signals; ++s)
    for (std::size_t a = 0; a < actions; ++a) x.at(a, s).canonicalize();
  return x;
}

bool subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// g(s) for S determining S': the S'-signal sharing a state with s.
std::vector<std::size_t> projection(const UtilityStructure& g, const SignalStructure& s,
                                    const SignalStructure& t) {
  std::vector<std::size_t> out(s.size(), kNoSignal);
  for (std::size_t k = 0; k < g.num_states(); ++k)
    if (g.prior[k] > 0) out[s.state_signal[k]] = t.state_signal[k];
  return out;
}

}  // namespace

TEST_SUITE("policy") {
  TEST_CASE("constraint counts") {
    const UtilityStructure g = kp();
    const lp::LinearProgram p = bic_polytope(g, empty_signal(g), 0);
    CHECK(p.num_variables() == 2);
    CHECK(p.constraints.size() == 3);
    CHECK(num_deviation_constraints(g) == 2);
    CHECK(num_deviation_constraints(constant_game()) == 4);
    UtilityStructure three = dominant_game();
    CHECK(num_deviation_constraints(three) == 6);
    const SignalStructure s = all_info(three, Map(3, {0, 1, 2}));
    CHECK(bic_polytope(three, s, 0).constraints.size() == 6 + s.size());
  }

  TEST_CASE("incentive gain of always recommending the first arm") {
    const UtilityStructure g = kp();
    const SignalStructure s = empty_signal(g);
    const PolicyTable x = PolicyTable::point_mass(2, 1, 0);
    CHECK(conditional_gain(g, s, x, 0, 0, 1) == Rational(1, 4));
    CHECK(conditional_gain(g, s, x, 0, 1, 0) == 0);  // never recommended
    CHECK(conditional_gain(g, s, x, 0, 0, 0) == 0);
    CHECK(recommendation_mass(g, s, x, 0, 0) == 1);
  }

  TEST_CASE("constant utilities give zero gain") {
    const UtilityStructure g = constant_game();
    std::mt19937_64 gen(1);
    const SignalStructure s = empty_signal(g);
    const PolicyTable x = random_table(gen, 4, 1);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) CHECK(conditional_gain(g, s, x, i, a, b) == 0);
    CHECK(in_bic_polytope(g, s, 0, x));
  }

  TEST_CASE("gain, mass and reward match the reference sums; gain is linear") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 40; ++trial) {
      const UtilityStructure g = random_instance(gen, {.zero_prior = true});
      const SignalStructure s = all_info(g, random_explored_map(gen, g));
      const std::size_t na = g.num_joint_actions();
      const PolicyTable x = random_table(gen, na, s.size());
      const PolicyTable y = random_table(gen, na, s.size());
      const Rational alpha(static_cast<long>(gen() % 5), 4);
      std::vector<Rational> mix(x.values().size());
      for (std::size_t k = 0; k < mix.size(); ++k)
        mix[k] = alpha * x.values()[k] + (1 - alpha) * y.values()[k];
      const PolicyTable z = PolicyTable::from_values(na, s.size(), mix);
      CHECK(expected_reward(g, s, x) == reward_oracle(g, s, x));
      for (std::size_t i = 0; i < g.num_agents(); ++i)
        for (std::size_t a = 0; a < g.actions[i].size(); ++a) {
          CHECK(recommendation_mass(g, s, x, i, a) == mass_oracle(g, s, x, i, a));
          CHECK(conditional_gain(g, s, x, i, a, a) == 0);
          for (std::size_t b = 0; b < g.actions[i].size(); ++b) {
            CHECK(conditional_gain(g, s, x, i, a, b) == gain_oracle(g, s, x, i, a, b));
            CHECK(conditional_gain(g, s, z, i, a, b) ==
                  alpha * conditional_gain(g, s, x, i, a, b) +
                      (1 - alpha) * conditional_gain(g, s, y, i, a, b));
          }
        }
      for (const Rational& delta : {Rational(0), Rational(1, 16)})
        CHECK(in_bic_polytope(g, s, delta, x) == bic_oracle(g, s, x, delta));
    }
  }

  TEST_CASE("optimal rewards on the two-arm example") {
    const UtilityStructure g = kp();
    const OptimalPolicy bot = optimal_policy(g, empty_signal(g), 0);
    CHECK(bot.reward == Rational(3, 4));
    CHECK(bot.table == PolicyTable::point_mass(2, 1, 0));

    const Map e_inf = {{0, 1}, {0, 1}, {0}, {0}};
    const SignalStructure s = all_info(g, e_inf);
    CHECK(s.size() == 3);
    const OptimalPolicy best = optimal_policy(g, s, 0);
    CHECK(best.reward == Rational(7, 8));
    CHECK(best_deterministic_rule(g, s) == Rational(7, 8));
    CHECK(in_bic_polytope(g, s, 0, best.table));
  }

  TEST_CASE("constant reward") {
    UtilityStructure g = kp();
    for (auto& row : g.reward) row.assign(4, Rational(3, 8));
    CHECK(optimal_policy(g, empty_signal(g), 0).reward == Rational(3, 8));
    CHECK(optimal_policy(g, all_info(g, Map(4, {0})), 0).reward == Rational(3, 8));
  }

  TEST_CASE("explorable sets on the two-arm example") {
    const UtilityStructure g = kp();
    const ExplorableSets bot = explorable_set(g, empty_signal(g), 0);
    CHECK(bot.sets == Map{{0}});
    CHECK(bot.eta[1][0] == 0);
    CHECK(bot.eta[0][0] == 1);
    CHECK(bot.pmin_bracket == 1);

    const SignalStructure first = all_info(g, Map(4, {0}));
    const ExplorableSets ex = explorable_set(g, first, 0);
    const Map by_state = ex.by_state(first);
    CHECK(by_state[kHalfZero] == std::vector<std::size_t>{0, 1});
    CHECK(by_state[kHalfOne] == std::vector<std::size_t>{0, 1});
    CHECK(by_state[kOneZero] == std::vector<std::size_t>{0});
    CHECK(by_state[kOneOne] == std::vector<std::size_t>{0});
  }

  TEST_CASE("max-support policies") {
    const UtilityStructure g = kp();
    const MaxSupportPolicy bot = max_support_policy(g, empty_signal(g), 0);
    CHECK(bot.table == PolicyTable::point_mass(2, 1, 0));
    CHECK(bot.pmin == 1);

    const UtilityStructure open = open_game();
    const MaxSupportPolicy both = max_support_policy(open, empty_signal(open), 0);
    CHECK(both.table.at(0, 0) == Rational(1, 2));
    CHECK(both.table.at(1, 0) == Rational(1, 2));
    CHECK(both.pmin == Rational(1, 2));
  }

  TEST_CASE("dominant actions are explorable everywhere") {
    const UtilityStructure g = dominant_game();
    for (const Map& b : {Map(3), Map(3, {0}), Map{{0, 1}, {2}, {}}}) {
      const SignalStructure s = all_info(g, b);
      const ExplorableSets ex = explorable_set(g, s, 0);
      for (const auto& set : ex.sets) CHECK(std::count(set.begin(), set.end(), 0u) == 1);
    }
  }

  TEST_CASE("solutions lie in their polytopes; support equals the explorable set") {
    std::mt19937_64 gen(404);
    for (int trial = 0; trial < 40; ++trial) {
      const UtilityStructure g = random_instance(gen, {.zero_prior = trial % 4 == 0});
      const SignalStructure s = all_info(g, random_explored_map(gen, g));
      for (const Rational& delta : {Rational(0), Rational(1, 32)}) {
        CAPTURE(trial);
        CAPTURE(to_string(delta));
        OptimalPolicy opt;
        try {
          opt = optimal_policy(g, s, delta);
        } catch (const InfeasibleError&) {
          CHECK(delta > 0);
          CHECK_THROWS_AS(max_support_policy(g, s, delta), InfeasibleError);
          continue;
        }
        CHECK(opt.table.is_stochastic());
        CHECK(bic_oracle(g, s, opt.table, delta));
        CHECK(opt.reward == reward_oracle(g, s, opt.table));
        if (delta == 0) CHECK(*best_deterministic_rule(g, s) <= opt.reward);

        const MaxSupportPolicy ms = max_support_policy(g, s, delta);
        CHECK(bic_oracle(g, s, ms.table, delta));
        CHECK(ms.table.is_stochastic());
        for (std::size_t sig = 0; sig < s.size(); ++sig) {
          CHECK(ms.table.support(sig) == ms.explorable.sets[sig]);
          CHECK_FALSE(ms.explorable.sets[sig].empty());
          for (std::size_t a = 0; a < g.num_joint_actions(); ++a) {
            const bool in = std::count(ms.explorable.sets[sig].begin(),
                                       ms.explorable.sets[sig].end(), a) > 0;
            CHECK(in == (ms.explorable.eta[a][sig] > 0));
            // eta is the largest mass any incentive-compatible table puts on (a, sig).
            CHECK(ms.explorable.witness[a][sig].at(a, sig) == ms.explorable.eta[a][sig]);
            CHECK(opt.table.at(a, sig) <= ms.explorable.eta[a][sig]);
          }
        }
        const Rational cells(static_cast<long>(g.num_joint_actions() * s.size()));
        CHECK(ms.pmin >= ms.explorable.pmin_bracket / cells);
        CHECK(ms.pmin == ms.table.min_positive());
      }
    }
  }

  TEST_CASE("a strict margin shrinks the polytope") {
    const UtilityStructure g = kp();
    const SignalStructure s = all_info(g, Map(4, {0}));
    const Rational loose = optimal_policy(g, s, 0).reward;
    const Rational tight = optimal_policy(g, s, Rational(1, 8)).reward;
    CHECK(tight <= loose);
    CHECK(tight == Rational(3, 4));
    CHECK(in_bic_polytope(g, s, 0, optimal_policy(g, s, Rational(1, 8)).table));
    CHECK_THROWS_AS(optimal_policy(g, s, 2), InfeasibleError);
    CHECK_THROWS_AS(explorable_set(g, s, 2), InfeasibleError);
  }

  TEST_CASE("mixtures of incentive-compatible tables stay compatible") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 20; ++trial) {
      const UtilityStructure g = random_instance(gen);
      const SignalStructure s = all_info(g, random_explored_map(gen, g));
      const MaxSupportPolicy ms = max_support_policy(g, s, 0);
      const OptimalPolicy opt = optimal_policy(g, s, 0);
      std::vector<Rational> mix(opt.table.values().size());
      for (std::size_t k = 0; k < mix.size(); ++k)
        mix[k] = Rational(1, 3) * opt.table.values()[k] + Rational(2, 3) * ms.table.values()[k];
      CHECK(bic_oracle(g, s, PolicyTable::from_values(opt.table.num_actions(), s.size(), mix)));
    }
  }

  TEST_CASE("more information never hurts") {
    std::mt19937_64 gen(99);
    int compared = 0;
    for (int trial = 0; trial < 80; ++trial) {
      const UtilityStructure g = random_instance(gen);
      const Map coarse = random_explored_map(gen, g);
      Map fine = coarse;
      const Map extra = random_explored_map(gen, g);
      for (std::size_t t = 0; t < g.num_states(); ++t) {
        fine[t].insert(fine[t].end(), extra[t].begin(), extra[t].end());
        std::sort(fine[t].begin(), fine[t].end());
        fine[t].erase(std::unique(fine[t].begin(), fine[t].end()), fine[t].end());
      }
      const SignalStructure s = all_info(g, fine);
      const SignalStructure t = all_info(g, coarse);
      if (!determines(s, t, g.prior)) continue;
      ++compared;
      CHECK(optimal_policy(g, s, 0).reward >= optimal_policy(g, t, 0).reward);
      const Map ex_s = explorable_set(g, s, 0).by_state(s);
      const Map ex_t = explorable_set(g, t, 0).by_state(t);
      for (std::size_t k = 0; k < g.num_states(); ++k) CHECK(subset(ex_t[k], ex_s[k]));
    }
    CHECK(compared >= 20);
  }

  TEST_CASE("a coarser table lifted to a finer signal behaves the same") {
    std::mt19937_64 gen(123);
    int lifted = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const UtilityStructure g = random_instance(gen);
      const Map fine_map(g.num_states(), [&] {
        std::vector<std::size_t> all(g.num_joint_actions());
        for (std::size_t a = 0; a < all.size(); ++a) all[a] = a;
        return all;
      }());
      const SignalStructure s = all_info(g, fine_map);
      const SignalStructure t = all_info(g, random_explored_map(gen, g));
      if (!determines(s, t, g.prior)) continue;
      ++lifted;
      const auto proj = projection(g, s, t);
      const PolicyTable x = random_table(gen, g.num_joint_actions(), t.size());
      PolicyTable y(g.num_joint_actions(), s.size());
      for (std::size_t sig = 0; sig < s.size(); ++sig)
        for (std::size_t a = 0; a < g.num_joint_actions(); ++a) y.at(a, sig) = x.at(a, proj[sig]);
      CHECK(expected_reward(g, s, y) == expected_reward(g, t, x));
      for (std::size_t i = 0; i < g.num_agents(); ++i)
        for (std::size_t a = 0; a < g.actions[i].size(); ++a)
          for (std::size_t b = 0; b < g.actions[i].size(); ++b)
            CHECK(conditional_gain(g, s, y, i, a, b) == conditional_gain(g, t, x, i, a, b));
    }
    CHECK(lifted >= 30);
  }

  TEST_CASE("tables confined to the explored actions cannot beat the benchmark of that information") {
    std::mt19937_64 gen(55);
    for (int trial = 0; trial < 30; ++trial) {
      const UtilityStructure g = random_instance(gen);
      Map b = random_explored_map(gen, g);
      for (auto& set : b)
        if (set.empty()) set.push_back(0);
      const SignalStructure s = all_info(g, b);
      lp::LinearProgram p = bic_polytope(g, s, 0);
      for (std::size_t sig = 0; sig < s.size(); ++sig) {
        const auto& allowed = s.values[sig].explored;
        for (std::size_t a = 0; a < g.num_joint_actions(); ++a) {
          if (std::count(allowed.begin(), allowed.end(), a)) continue;
          std::vector<Rational> row(p.num_variables(), 0);
          row[policy_variable(a, sig, s.size())] = 1;
          p.add_constraint(row, lp::Relation::kEqual, 0);
        }
      }
      for (auto& c : p.objective) c = Rational(static_cast<long>(gen() % 9) - 4, 4);
      const lp::Solution sol = lp::solve(p);
      if (sol.status != lp::Status::kOptimal) continue;
      const PolicyTable x = PolicyTable::from_values(g.num_joint_actions(), s.size(), sol.x);
      CHECK(expected_reward(g, s, x) <= optimal_policy(g, s, 0).reward);
    }
  }
}
