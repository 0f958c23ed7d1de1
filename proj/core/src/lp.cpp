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

#include "bayesex/lp.hpp"

#include <cassert>
#include <stdexcept>

namespace bayesex::lp {

void LinearProgram::add_constraint(std::vector<Rational> row,
                                   Relation relation, Rational rhs) {
  constraints.push_back(Constraint{std::move(row), relation, std::move(rhs)});
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Dense tableau in canonical form: rows[i] expresses basis[i] in terms of
// the nonbasic columns; the last entry of every row is the right-hand side.
// cost holds reduced costs c_j - c_B B^{-1} A_j for a maximization, and
// cost.back() holds -(current objective value).
class Tableau {
 public:
  Tableau(std::size_t num_rows, std::size_t num_cols)
      : rows_(num_rows, std::vector<Rational>(num_cols + 1, 0)),
        basis_(num_rows, 0),
        cost_(num_cols + 1, 0),
        allowed_(num_cols, true) {}

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return cost_.size() - 1; }

  Rational& at(std::size_t r, std::size_t c) { return rows_[r][c]; }
  Rational& rhs(std::size_t r) { return rows_[r].back(); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  void forbid(std::size_t c) { allowed_[c] = false; }

  void erase_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  // Installs objective `c` (maximize) and prices out the basic columns.
  void set_objective(const std::vector<Rational>& c) {
    assert(c.size() == num_cols());
    for (std::size_t j = 0; j < num_cols(); ++j) cost_[j] = c[j];
    cost_.back() = 0;
    for (std::size_t r = 0; r < num_rows(); ++r) {
      const Rational cb = c[basis_[r]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= num_cols(); ++j) {
        if (rows_[r][j] != 0) cost_[j] -= cb * rows_[r][j];
      }
    }
  }

  Rational objective_value() const { return -cost_.back(); }

  void pivot(std::size_t pr, std::size_t pc) {
    std::vector<Rational>& prow = rows_[pr];
    const Rational inv = 1 / prow[pc];
    for (auto& v : prow) {
      if (v != 0) v *= inv;
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[pc] == 0) return;
      const Rational factor = row[pc];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (prow[j] != 0) row[j] -= factor * prow[j];
      }
    };
    for (std::size_t r = 0; r < num_rows(); ++r) {
      if (r != pr) eliminate(rows_[r]);
    }
    eliminate(cost_);
    basis_[pr] = pc;
  }

  // Bland's rule primal simplex. Returns false when unbounded.
  bool optimize() {
    for (;;) {
      std::size_t enter = num_cols();
      for (std::size_t j = 0; j < num_cols(); ++j) {
        if (allowed_[j] && cost_[j] > 0) {
          enter = j;
          break;
        }
      }
      if (enter == num_cols()) return true;

      std::size_t leave = num_rows();
      Rational best_ratio;
      for (std::size_t r = 0; r < num_rows(); ++r) {
        const Rational& a = rows_[r][enter];
        if (a <= 0) continue;
        Rational ratio = rows_[r].back() / a;
        if (leave == num_rows() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == num_rows()) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> cost_;
  std::vector<bool> allowed_;
};

struct Row {
  std::vector<Rational> coefficients;
  Relation relation;
  Rational rhs;
};

}  // namespace

Solution solve(const LinearProgram& program) {
  const std::size_t n = program.num_variables();
  std::vector<Row> rows;
  rows.reserve(program.constraints.size() + n);
  for (const auto& c : program.constraints) {
    if (c.coefficients.size() != n)
      throw std::invalid_argument("constraint row length differs from objective");
    rows.push_back(Row{c.coefficients, c.relation, c.rhs});
  }
  if (!program.upper.empty()) {
    if (program.upper.size() != n)
      throw std::invalid_argument("upper bound vector length mismatch");
    for (std::size_t j = 0; j < n; ++j) {
      if (!program.upper[j]) continue;
      std::vector<Rational> row(n, 0);
      row[j] = 1;
      rows.push_back(Row{std::move(row), Relation::kLessEqual, *program.upper[j]});
    }
  }
  // Nonnegative right-hand sides.
  for (auto& r : rows) {
    if (r.rhs < 0) {
      for (auto& v : r.coefficients) v = -v;
      r.rhs = -r.rhs;
      if (r.relation == Relation::kLessEqual) {
        r.relation = Relation::kGreaterEqual;
      } else if (r.relation == Relation::kGreaterEqual) {
        r.relation = Relation::kLessEqual;
      }
    }
  }

  std::size_t num_slack = 0;
  std::size_t num_artificial = 0;
  for (const auto& r : rows) {
    if (r.relation != Relation::kEqual) ++num_slack;
    if (r.relation != Relation::kLessEqual) ++num_artificial;
  }
  const std::size_t m = rows.size();
  const std::size_t slack0 = n;
  const std::size_t art0 = n + num_slack;
  const std::size_t num_cols = art0 + num_artificial;

  Tableau tab(m, num_cols);
  {
    std::size_t next_slack = slack0;
    std::size_t next_art = art0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = rows[i].coefficients[j];
      tab.rhs(i) = rows[i].rhs;
      switch (rows[i].relation) {
        case Relation::kLessEqual:
          tab.at(i, next_slack) = 1;
          tab.basis(i) = next_slack++;
          break;
        case Relation::kGreaterEqual:
          tab.at(i, next_slack++) = -1;
          tab.at(i, next_art) = 1;
          tab.basis(i) = next_art++;
          break;
        case Relation::kEqual:
          tab.at(i, next_art) = 1;
          tab.basis(i) = next_art++;
          break;
      }
    }
  }

  Solution out;
  if (num_artificial > 0) {
    std::vector<Rational> phase1(num_cols, 0);
    for (std::size_t j = art0; j < num_cols; ++j) phase1[j] = -1;
    tab.set_objective(phase1);
    tab.optimize();  // bounded above by zero
    if (tab.objective_value() < 0) {
      out.status = Status::kInfeasible;
      return out;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < tab.num_rows();) {
      if (tab.basis(r) < art0) {
        ++r;
        continue;
      }
      std::size_t col = art0;
      for (std::size_t j = 0; j < art0; ++j) {
        if (tab.at(r, j) != 0) {
          col = j;
          break;
        }
      }
      if (col == art0) {
        tab.erase_row(r);
      } else {
        tab.pivot(r, col);
        ++r;
      }
    }
    for (std::size_t j = art0; j < num_cols; ++j) tab.forbid(j);
  }

  std::vector<Rational> phase2(num_cols, 0);
  const bool maximize = program.sense == Sense::kMaximize;
  for (std::size_t j = 0; j < n; ++j)
    phase2[j] = maximize ? program.objective[j] : Rational(-program.objective[j]);
  tab.set_objective(phase2);
  if (!tab.optimize()) {
    out.status = Status::kUnbounded;
    return out;
  }

  out.status = Status::kOptimal;
  out.x.assign(n, 0);
  for (std::size_t r = 0; r < tab.num_rows(); ++r) {
    if (tab.basis(r) < n) out.x[tab.basis(r)] = tab.rhs(r);
  }
  out.objective_value = 0;
  for (std::size_t j = 0; j < n; ++j)
    out.objective_value += program.objective[j] * out.x[j];
  assert(out.objective_value ==
         (maximize ? tab.objective_value() : Rational(-tab.objective_value())));
  return out;
}

bool satisfies(const LinearProgram& program, std::span<const Rational> x) {
  const std::size_t n = program.num_variables();
  if (x.size() != n) return false;
  for (const auto& v : x) {
    if (v < 0) return false;
  }
  for (std::size_t j = 0; j < program.upper.size(); ++j) {
    if (program.upper[j] && x[j] > *program.upper[j]) return false;
  }
  for (const auto& c : program.constraints) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (c.coefficients[j] != 0) lhs += c.coefficients[j] * x[j];
    }
    switch (c.relation) {
      case Relation::kLessEqual:
        if (lhs > c.rhs) return false;
        break;
      case Relation::kEqual:
        if (lhs != c.rhs) return false;
        break;
      case Relation::kGreaterEqual:
        if (lhs < c.rhs) return false;
        break;
    }
  }
  return true;
}

}  // namespace bayesex::lp
