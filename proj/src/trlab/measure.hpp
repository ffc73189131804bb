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

#include <map>
#include <string>

#include "trlab/group.hpp"
#include "trlab/rational.hpp"

namespace trlab {

// Finitely supported rational-valued measure on a group. Zero masses are
// never stored. Probability measures are the nonnegative ones of total mass
// 1; signed measures appear as convolution kernels such as delta_s - delta_e.
class Measure {
 public:
  explicit Measure(Group group) : group_(std::move(group)) {}
  static Measure dirac(const Group& group, const Element& x);

  const Group& group() const { return group_; }
  const std::map<Element, Rational>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  void add(const Element& x, const Rational& mass);
  Rational mass(const Element& x) const;
  Rational total_mass() const;
  bool is_nonnegative() const;
  bool is_probability() const { return is_nonnegative() && total_mass() == 1; }

  // this + c * other
  Measure plus(const Measure& other, const Rational& c = Rational(1)) const;

  friend bool operator==(const Measure& a, const Measure& b) {
    return a.group_ == b.group_ && a.atoms_ == b.atoms_;
  }

  // {"group": spec, "atoms": {"<element>": "p/q", ...}}
  std::string to_json() const;

 private:
  Group group_;
  std::map<Element, Rational> atoms_;
};

enum class Action { kLambda, kRho, kVee };

// lambda_g xi (x) = xi(g^-1 x);  rho_g xi (x) = xi(x g);  xi^vee (x) = xi(x^-1).
// gamma is ignored for kVee.
Measure act(const Measure& xi, const Element& gamma, Action action);
Measure vee(const Measure& xi);

// (a * b)(x) = sum_g a(g) b(g^-1 x), so delta_g * delta_h = delta_{gh}.
Measure convolve(const Measure& a, const Measure& b);

Rational l1_distance(const Measure& xi, const Measure& phi);

}  // namespace trlab
