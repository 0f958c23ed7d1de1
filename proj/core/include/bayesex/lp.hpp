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

// Exact rational linear programming for small dense problems.
//
// solve() runs a two-phase primal simplex on a dense tableau of GMP
// rationals. Pivoting follows Bland's rule (lowest-index entering column,
// lowest-index leaving basic variable among ratio ties), so it terminates on
// degenerate problems. All variables carry an implicit lower bound of zero.

#ifndef BAYESEX_LP_HPP_
#define BAYESEX_LP_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bayesex/rational.hpp"

namespace bayesex::lp {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Sense { kMaximize, kMinimize };

struct Constraint {
  std::vector<Rational> coefficients;
  Relation relation = Relation::kLessEqual;
  Rational rhs;
};

struct LinearProgram {
  Sense sense = Sense::kMaximize;
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;
  /// Optional per-variable upper bounds; empty means none.
  std::vector<std::optional<Rational>> upper;

  explicit LinearProgram(std::size_t num_variables = 0)
      : objective(num_variables, 0) {}

  std::size_t num_variables() const { return objective.size(); }

  void add_constraint(std::vector<Rational> row, Relation relation,
                      Rational rhs);
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(Status status);

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<Rational> x;
  Rational objective_value;
};

/// Throws std::invalid_argument when a row length differs from the
/// objective length.
Solution solve(const LinearProgram& program);

/// Exact feasibility check of `x` against every constraint and bound.
bool satisfies(const LinearProgram& program, std::span<const Rational> x);

}  // namespace bayesex::lp

#endif  // BAYESEX_LP_HPP_
