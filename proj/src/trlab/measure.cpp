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

#include "trlab/measure.hpp"

#include "json.hpp"
#include "trlab/errors.hpp"

namespace trlab {

namespace {

void check_same(const Measure& a, const Measure& b, const char* what) {
  if (!(a.group() == b.group())) throw UsageError(std::string(what) + ": measures live on different groups");
}

}  // namespace

Measure Measure::dirac(const Group& group, const Element& x) {
  Measure m(group);
  m.add(x, 1);
  return m;
}

void Measure::add(const Element& x, const Rational& mass) {
  if (mass == 0) return;
  if (!group_.contains(x)) throw UsageError("measure atom is not an element of " + group_.spec());
  auto [it, inserted] = atoms_.emplace(x, mass);
  if (!inserted) {
    it->second += mass;
    if (it->second == 0) atoms_.erase(it);
  }
}

Rational Measure::mass(const Element& x) const {
  auto it = atoms_.find(x);
  return it == atoms_.end() ? Rational(0) : it->second;
}

Rational Measure::total_mass() const {
  Rational s = 0;
  for (const auto& [x, m] : atoms_) s += m;
  return s;
}

bool Measure::is_nonnegative() const {
  for (const auto& [x, m] : atoms_) {
    if (m < 0) return false;
  }
  return true;
}

Measure Measure::plus(const Measure& other, const Rational& c) const {
  check_same(*this, other, "plus");
  Measure out = *this;
  for (const auto& [x, m] : other.atoms_) out.add(x, c * m);
  return out;
}

std::string Measure::to_json() const {
  nlohmann::ordered_json j;
  j["group"] = group_.spec();
  nlohmann::ordered_json atoms = nlohmann::ordered_json::object();
  for (const auto& [x, m] : atoms_) atoms[group_.format(x)] = to_string(m);
  j["atoms"] = std::move(atoms);
  return j.dump();
}

Measure act(const Measure& xi, const Element& gamma, Action action) {
  const Group& g = xi.group();
  Measure out(g);
  switch (action) {
    case Action::kLambda:
      for (const auto& [x, m] : xi.atoms()) out.add(g.multiply(gamma, x), m);
      break;
    case Action::kRho: {
      Element inv = g.invert(gamma);
      for (const auto& [x, m] : xi.atoms()) out.add(g.multiply(x, inv), m);
      break;
    }
    case Action::kVee:
      for (const auto& [x, m] : xi.atoms()) out.add(g.invert(x), m);
      break;
  }
  return out;
}

Measure vee(const Measure& xi) { return act(xi, xi.group().identity(), Action::kVee); }

Measure convolve(const Measure& a, const Measure& b) {
  check_same(a, b, "convolve");
  const Group& g = a.group();
  Measure out(g);
  for (const auto& [x, mx] : a.atoms()) {
    for (const auto& [y, my] : b.atoms()) out.add(g.multiply(x, y), mx * my);
  }
  return out;
}

Rational l1_distance(const Measure& xi, const Measure& phi) {
  Measure d = xi.plus(phi, -1);
  Rational s = 0;
  for (const auto& [x, m] : d.atoms()) s += abs(m);
  return s;
}

}  // namespace trlab
