// Copyright 2026 The trlab Authors
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

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace trlab {

using Rational = mpq_class;

// Always "p/q" with q >= 1, so that integers serialize as "3/1".
std::string to_string(const Rational& q);

// Accepts "p/q", "p" or a finite decimal such as "-0.25".
Rational parse_rational(std::string_view text);

// mpq_class(num, den) does not reduce; this does.
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline double to_double(const Rational& q) { return q.get_d(); }

// Shortest decimal that reads back to the same double; "inf", "-inf", "nan".
std::string format_double(double x);

}  // namespace trlab
