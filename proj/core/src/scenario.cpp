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


#include "bayesex/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bayesex {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw ScenarioError("scenario: " + what);
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

Rational number(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return parse_rational(v.dump());
  } catch (const std::invalid_argument& e) {
    fail(where + ": " + e.what());
  }
  fail(where + ": expected a \"p/q\" string or an integer");
}

std::vector<std::string> names(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where + " must be an array of names");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) fail(where + " must contain strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<Rational> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where + " must be an array");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out.push_back(number(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<std::vector<Rational>> matrix(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where + " must be an array");
  std::vector<std::vector<Rational>> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out.push_back(numbers(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

json rationals(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& r : values) out.push_back(to_string(r));
  return out;
}

json structure_json(const SignalStructure& s) {
  json table = json::array();
  for (const auto& row : s.table) table.push_back(rationals(row));
  return {{"signals", s.signals}, {"table", std::move(table)}};
}

json policy_json(const UtilityStructure& game, const SignalStructure& s,
                 const PolicyTable& x) {
  json out = json::object();
  for (std::size_t sig = 0; sig < x.num_signals(); ++sig) {
    json column = json::object();
    for (std::size_t a = 0; a < x.num_actions(); ++a) {
      if (x.at(a, sig) != 0)
        column[game.joint_action_name(a)] = to_string(x.at(a, sig));
    }
    out[s.signals.at(sig)] = std::move(column);
  }
  return out;
}

json audit_json(const UtilityStructure& game, const AuditReport& audit) {
  json out = {{"pass", audit.pass()}, {"delta", to_string(audit.delta)}};
  if (const AuditEntry* e = audit.first_failure()) {
    out["failure"] = {{"agent", e->agent},
                      {"action", game.actions[e->agent][e->action]},
                      {"deviation", game.actions[e->agent][e->deviation]},
                      {"margin", to_string(e->margin)}};
  }
  Rational slack;
  bool first = true;
  for (const auto& entry : audit.entries) {
    if (first || entry.margin < slack) slack = entry.margin;
    first = false;
  }
  if (!first) out["min_margin"] = to_string(slack);
  return out;
}

// Shortest text that reads back as the same double.
std::string decimal(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

bool Scenario::operator==(const Scenario& other) const {
  return game.actions == other.game.actions && game.states == other.game.states &&
         game.prior == other.game.prior && game.utility == other.game.utility &&
         game.reward == other.game.reward && noise.kind == other.noise.kind &&
         fixed_state == other.fixed_state;
}

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");

  Scenario sc;
  const json& agents = field(doc, "agents");
  if (!agents.is_array() || agents.empty()) fail("\"agents\" must be a non-empty array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (!agents[i].is_object()) fail("agent entries must be objects");
    sc.game.actions.push_back(names(field(agents[i], "actions"),
                                    "agents[" + std::to_string(i) + "].actions"));
  }
  sc.game.states = names(field(doc, "states"), "states");
  sc.game.prior = numbers(field(doc, "prior"), "prior");

  const json& utilities = field(doc, "utilities");
  if (!utilities.is_array()) fail("\"utilities\" must be an array");
  for (std::size_t i = 0; i < utilities.size(); ++i)
    sc.game.utility.push_back(
        matrix(utilities[i], "utilities[" + std::to_string(i) + "]"));
  sc.game.reward = matrix(field(doc, "reward"), "reward");

  if (auto it = doc.find("noise"); it != doc.end()) {
    if (!it->is_object()) fail("\"noise\" must be an object");
    const json& kind = field(*it, "kind");
    if (!kind.is_string()) fail("noise.kind must be a string");
    try {
      sc.noise.kind = parse_noise_kind(kind.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  if (auto it = doc.find("fixed_state"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) fail("\"fixed_state\" must be a state name");
    auto index = sc.game.state_index(it->get<std::string>());
    if (!index) fail("unknown fixed_state \"" + it->get<std::string>() + "\"");
    sc.fixed_state = *index;
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string serialize_scenario(const Scenario& sc) {
  const UtilityStructure& g = sc.game;
  json doc;
  doc["agents"] = json::array();
  for (const auto& acts : g.actions) doc["agents"].push_back({{"actions", acts}});
  doc["states"] = g.states;
  doc["prior"] = rationals(g.prior);
  doc["utilities"] = json::array();
  for (const auto& u : g.utility) {
    json rows = json::array();
    for (const auto& row : u) rows.push_back(rationals(row));
    doc["utilities"].push_back(std::move(rows));
  }
  doc["reward"] = json::array();
  for (const auto& row : g.reward) doc["reward"].push_back(rationals(row));
  doc["noise"] = {{"kind", std::string(to_string(sc.noise.kind))}};
  if (sc.fixed_state) doc["fixed_state"] = g.states.at(*sc.fixed_state);
  return doc.dump(2) + "\n";
}

std::string format_action_set(const UtilityStructure& game,
                              const std::vector<std::size_t>& joints) {
  std::string out = "{";
  for (std::size_t k = 0; k < joints.size(); ++k) {
    if (k) out += ", ";
    out += game.joint_action_name(joints[k]);
  }
  return out + "}";
}

std::string episode_to_json(const UtilityStructure& game,
                            const EpisodeResult& episode) {
  const EpisodeTrace& trace = episode.trace;
  const RegretReport& r = episode.report;
  json doc;
  doc["header"] = {{"state", game.states.at(trace.state)},
                   {"seed", trace.seed},
                   {"T", trace.horizon},
                   {"T0", r.exploration},
                   {"delta", to_string(r.delta)},
                   {"beta", r.beta}};

  json phases = json::array();
  for (const auto& p : trace.phases) {
    json ph = {{"label", p.label},
               {"first_round", p.first_round},
               {"duration", p.duration},
               {"delta", to_string(p.delta)},
               {"signal", p.structure->signals.at(p.realized_signal)},
               {"structure", structure_json(*p.structure)},
               {"policy", policy_json(game, *p.structure, p.distribution)},
               {"premise_ok", p.premise_ok}};
    if (p.audited) ph["audit"] = audit_json(game, p.audit);
    if (!p.premise_note.empty()) ph["premise_note"] = p.premise_note;
    phases.push_back(std::move(ph));
  }
  doc["phases"] = std::move(phases);

  json rounds = json::array();
  for (const auto& rd : trace.rounds) {
    rounds.push_back({{"phase", rd.phase},
                      {"action", game.joint_action_name(rd.joint)},
                      {"dedicated", rd.dedicated},
                      {"outcome", rationals(rd.outcome)},
                      {"audit", rd.audit_pass}});
  }
  doc["rounds"] = std::move(rounds);

  json chain = json::array();
  for (const auto& b : episode.explored_chain) {
    json set = json::array();
    for (std::size_t a : b) set.push_back(game.joint_action_name(a));
    chain.push_back(std::move(set));
  }
  doc["explored"] = std::move(chain);

  doc["report"] = {{"benchmark", to_string(r.benchmark)},
                   {"exploit_reward", to_string(episode.exploit_reward)},
                   {"audit_pass", episode.audit_pass}};
  if (r.analytic) {
    doc["report"]["expected_reward"] = to_string(r.exact_reward);
    doc["report"]["regret"] = to_string(r.exact_regret);
  } else {
    doc["report"]["reward"] = r.reward;
    doc["report"]["regret"] = r.regret();
    doc["report"]["off_support"] = episode.off_support;
  }
  if (!episode.premise_notes.empty()) doc["report"]["premise_notes"] = episode.premise_notes;
  return doc.dump(1) + "\n";
}

std::string report_csv_header() {
  return "T,T0,benchmark,expected_reward,regret,delta,beta,seed";
}

std::string report_csv_row(const RegretReport& r) {
  std::ostringstream os;
  os << r.horizon << ',' << r.exploration << ',' << to_string(r.benchmark) << ',';
  if (r.analytic) {
    os << to_string(r.exact_reward) << ',' << to_string(r.exact_regret);
  } else {
    os << decimal(r.reward) << ',' << decimal(r.regret());
  }
  os << ',' << to_string(r.delta) << ',' << decimal(r.beta) << ',' << r.seed;
  return os.str();
}

}  // namespace bayesex
