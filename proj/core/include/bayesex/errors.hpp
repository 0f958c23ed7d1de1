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

#ifndef BAYESEX_ERRORS_HPP_
#define BAYESEX_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace bayesex {

/// A scenario or utility structure failed validation.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// No policy satisfies the requested delta-strict incentive constraints.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Utilities never differ across states, so sample-based state
/// identification has no separation to work with.
class NoSeparationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bayesex

#endif  // BAYESEX_ERRORS_HPP_
