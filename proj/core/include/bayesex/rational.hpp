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

#ifndef BAYESEX_RATIONAL_HPP_
#define BAYESEX_RATIONAL_HPP_

#include <gmpxx.h>

#include <concepts>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bayesex {

/// Arbitrary-precision rational. Always kept in canonical form: unlike
/// mpq_class, the numerator/denominator constructor reduces its result.
class Rational : public mpq_class {
 public:
  Rational() = default;
  Rational(const mpq_class& v) : mpq_class(v) {}
  Rational(mpq_class&& v) : mpq_class(std::move(v)) {}
  template <class T, class U>
  Rational(const __gmp_expr<T, U>& e) : mpq_class(e) {}
  template <std::integral I>
  Rational(I v) : mpq_class(mpz_class(v)) {}
  Rational(const mpz_class& v) : mpq_class(v) {}

  template <class N, class D>
    requires(std::integral<N> || std::same_as<N, mpz_class>) &&
            (std::integral<D> || std::same_as<D, mpz_class>)
  Rational(const N& num, const D& den) : mpq_class(mpz_class(num), mpz_class(den)) {
    canonicalize();
  }

  template <class T>
  Rational& operator=(T&& v) {
    mpq_class::operator=(std::forward<T>(v));
    return *this;
  }
};

/// Parses "p/q", "p", or a finite decimal such as "0.125" or "-3.5e-2"
/// exactly. Throws std::invalid_argument on malformed input or q == 0.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& value);

double to_double(const Rational& value);

Rational sum(std::span<const Rational> values);

/// Smallest integer >= value.
mpz_class ceil(const Rational& value);

}  // namespace bayesex

#endif  // BAYESEX_RATIONAL_HPP_
