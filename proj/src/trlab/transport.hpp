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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trlab/cayley.hpp"
#include "trlab/folner.hpp"
#include "trlab/measure.hpp"
#include "trlab/rational.hpp"

namespace trlab {

// Mass per directed labelled edge of a ball (edge id -> mass), zeros omitted.
using EdgeMeasure = std::map<std::size_t, Rational>;

Rational total_mass(const EdgeMeasure& m);

struct FlowResult {
  Rational cost;
  EdgeMeasure flow;
  // Integer potential that is 1-Lipschitz on the ball and attains the cost:
  // <pi, phi> - <pi, xi> = cost.
  std::vector<std::int64_t> potential;
};

// Smallest radius r such that every geodesic between a point of supp xi and
// a point of supp phi stays in the ball of radius r around the identity.
// Needs exact word lengths; nullopt if the group has none.
std::optional<int> required_radius(const Measure& xi, const Measure& phi);

// Exact min-cost flow on the Cayley edges with unit costs: trc(xi, phi).
FlowResult trc_flow(const Measure& xi, const Measure& phi, const BallIndex& ball);

using Coupling = std::map<std::pair<Element, Element>, Rational>;

struct CouplingResult {
  Rational cost;
  Coupling coupling;
};

// Exact optimum of the coupling LP with graph distances measured in the
// ball, by a rational simplex method. At most `atom_budget` atoms per side.
CouplingResult trc_coupling_oracle(const Measure& xi, const Measure& phi, const BallIndex& ball,
                                   std::size_t atom_budget = 40);

struct PatternPath {
  std::size_t source;              // vertex id
  std::vector<std::size_t> edges;  // consecutive edge ids
  Rational mass;
};

// A finitely supported measure on paths of one ball.
struct Pattern {
  std::vector<PatternPath> paths;
};

std::size_t path_target(const BallIndex& ball, const PatternPath& p);
// Throws DomainError on disconnected paths or negative masses.
void validate(const BallIndex& ball, const Pattern& m);
// Source and target marginals.
std::pair<Measure, Measure> marginals(const BallIndex& ball, const Pattern& m);

// m_flat(a) = sum over paths through a of their mass, with multiplicity.
EdgeMeasure flatten(const Pattern& m);

// sum_a price(a) m_flat(a).
template <class T>
T priced_cost(const Pattern& m, const std::vector<T>& price) {
  T s(0);
  for (const auto& [e, w] : flatten(m)) {
    if (e >= price.size()) throw DomainError("priced_cost: edge without a price");
    s += price[e] * T(w);
  }
  return s;
}
// Sparse price; a used edge without a price is a DomainError.
Rational priced_cost(const Pattern& m, const std::map<std::size_t, Rational>& price);

Pattern reversed(const BallIndex& ball, const Pattern& m);

// Splits a feasible flow for (xi, phi) into paths; flow cycles are dropped,
// so flatten(result) <= flow edgewise. Throws DomainError if the flow is
// infeasible.
Pattern decompose_flow(const BallIndex& ball, const EdgeMeasure& flow, const Measure& xi, const Measure& phi);

struct LampCountRow {
  int lit = 0;               // i
  Rational count;            // c^(|A|-N) (c-1)^i binom(N, i)
  std::int64_t cap = 0;      // 2i(d+k)+d
  std::int64_t longest = 0;  // longest constructed path with i lit lamps
  Rational enumerated;       // number of constructed paths with i lit lamps
};

struct WreathBound {
  bool base_move = true;  // z moves the lamplighter; otherwise a lamp generator
  std::int64_t cells = 0;     // |A|
  std::int64_t boundary = 0;  // N = |D_z A| (base move) or escapers at the origin (lamp move)
  std::int64_t c = 0;         // |A'|
  std::int64_t d = 0;
  std::int64_t k = 0;
  std::vector<LampCountRow> rows;
  Rational bound;             // (2N(d+k) + dc) / (|A| c)
  Rational stated_all_off;   // N / (|A| c^N)
  Rational exact_all_off;     // normalized cost of the all-off elements
  Rational cost;              // normalized pattern cost, price = 1
  bool caps_hold = true;      // every path within its cap
};

struct WreathPattern {
  std::shared_ptr<const BallIndex> ball;
  Pattern pattern;
  Measure source;  // rho_z xi^vee
  Measure target;  // xi^vee
  WreathBound report;
};

// The explicit routing pattern for the lamplighter Folner set F = B_n x A_n
// and a generator z, transporting rho_z xi^vee onto xi^vee, xi = 1_F/|F|.
WreathPattern build_wreath_pattern(const Group& group, int n, const Element& z, int inner = 0,
                                   std::size_t vertex_budget = BallIndex::kDefaultBudget);

// A ball around the identity large enough for trc_flow(xi, phi).
std::shared_ptr<const BallIndex> ball_for_measures(const Measure& xi, const Measure& phi,
                                                   std::size_t vertex_budget = BallIndex::kDefaultBudget);

struct CertificateRow {
  int n = 0;
  std::string generator;
  std::optional<Rational> trc;
  std::optional<Rational> pattern_cost;
  std::optional<Rational> stated_bound;
  Rational running_K;
  std::string note;  // resource errors and similar, per row
};

struct CertificateOptions {
  std::string family = "box";  // box | wreath
  int inner = 0;
  std::size_t vertex_budget = BallIndex::kDefaultBudget;
};

// Per (n, s): exact trc(rho_s xi_n^vee, xi_n^vee) for xi_n = 1_{F_n}/|F_n|,
// the explicit pattern cost for lamplighter families, and the running max.
std::vector<CertificateRow> amenability_certificate(const Group& group, const std::vector<int>& ns,
                                                    const CertificateOptions& opts = {});

std::string certificate_csv(const std::vector<CertificateRow>& rows);
std::string certificate_json(const std::vector<CertificateRow>& rows);

}  // namespace trlab
