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
#include <optional>
#include <string>
#include <vector>

#include "trlab/cayley.hpp"
#include "trlab/measure.hpp"
#include "trlab/rational.hpp"
#include "trlab/transport.hpp"

namespace trlab {

// A vertex function of a ball together with the sub-domain on which it is
// known; convolutions shrink the domain by the support radius of the kernel.
struct DomainFunction {
  std::vector<Rational> values;
  std::vector<char> valid;

  static DomainFunction full(std::vector<Rational> values);
  std::size_t domain_size() const;
  bool defined(std::size_t v) const { return valid[v] != 0; }
};

// (xi * f)(eta) = sum_g xi(g) f(g^-1 eta), at every eta where all the needed
// translates are defined. DomainError if no such eta exists.
DomainFunction convolve(const BallIndex& ball, const Measure& xi, const DomainFunction& f);
DomainFunction convolve(const BallIndex& ball, const Measure& xi, const std::vector<Rational>& f);

// (lambda_s f - f)(eta) = f(s^-1 eta) - f(eta), read off the edges labelled s.
DomainFunction directional_gradient(const BallIndex& ball, std::size_t gen, const DomainFunction& f);

// (delta_s - delta_e) * xi * f.
DomainFunction grad_conv(const BallIndex& ball, std::size_t gen, const Measure& xi, const std::vector<Rational>& f);

struct DecayReport {
  Rational max_lhs;      // max |grad_conv| on the domain
  Rational l1_shift;     // || lambda_s xi - xi ||_1
  Rational sup_f;        // ||f||_inf on the ball
  Rational rhs;          // l1_shift * sup_f
  std::size_t domain = 0;
  bool holds = true;     // |grad_conv(eta)| <= rhs at every eta
};
DecayReport pointwise_decay_check(const BallIndex& ball, std::size_t gen, const Measure& xi,
                                  const std::vector<Rational>& f);

// eta -> priced_cost(pattern, rho_eta price), with (rho_eta price)(a) the price of
// the edge a.eta of `work`. Defined where every translated edge lies in `work`.
DomainFunction transport_operator(const BallIndex& work, const BallIndex& pattern_ball, const Pattern& pattern,
                                  const std::vector<Rational>& price);
// As above, after checking that the pattern moves rho_s xi^vee onto xi^vee.
DomainFunction transport_operator(const BallIndex& work, std::size_t gen, const Measure& xi,
                                  const BallIndex& pattern_ball, const Pattern& pattern,
                                  const std::vector<Rational>& price);

struct OperatorBoundReport {
  std::string p;              // "1", "3/2", ..., "inf"
  int trials = 0;
  std::size_t domain = 0;     // translates eta evaluated
  std::size_t edges = 0;      // edges carrying the random prices
  Rational flat_mass;         // m_flat(E)
  Rational bound;             // |S| m_flat(E)
  double max_ratio = 0;       // max ||T f'||_p / ||f'||_p
  int violations = 0;
};

// p is a positive rational or infinity (nullopt). Integer p and infinity are
// compared exactly through p-th powers; other p in double precision.
OperatorBoundReport operator_bound_check(const BallIndex& pattern_ball, const Pattern& pattern,
                                         std::optional<Rational> p, int trials, std::uint64_t seed,
                                         int margin = 2, std::size_t vertex_budget = BallIndex::kDefaultBudget);

// t -> |t|^(p-2) t entrywise; DomainError unless p > 1.
std::vector<double> mazur(const std::vector<double>& f, double p);

// sum over directed edges of |grad f|^p.
double p_dirichlet_energy(const BallIndex& ball, const std::vector<double>& f, double p);

struct DirichletFunction {
  const BallIndex* ball = nullptr;
  std::vector<double> values;
  std::size_t basepoint = 0;  // vertex of the identity

  // ||grad f||_p^p + |f(e)|^p
  double norm_p(double p) const;
};

struct PHarmonicOptions {
  double tol = 1e-9;
  int max_iter = 10000;
};

struct PHarmonicResult {
  DirichletFunction h;
  double residual = 0;
  int iterations = 0;
  int coordinate_sweeps = 0;
  std::vector<double> energy;    // after each iteration, starting with the initial guess
  std::vector<double> residuals;
};

// sup over interior vertices of |div(mazur(grad h, p))|.
double p_harmonic_residual(const BallIndex& ball, const std::vector<double>& h, double p);

// Minimizes the p-Dirichlet energy on the ball with the given values on the
// sphere of radius ball.radius(). Damped Newton with Armijo backtracking from
// the harmonic (p = 2) solution, coordinate descent when a Newton step fails.
// Throws NonConvergenceError carrying the last residual.
PHarmonicResult p_harmonic_solve(const BallIndex& ball, const std::map<std::size_t, double>& boundary, double p,
                                 const PHarmonicOptions& opts = {});

struct VanishingRow {
  int n = 0;
  Rational mass;                    // condition 1
  std::optional<Rational> max_pointwise;  // condition 2, max over s and eta
  std::optional<Rational> at_identity;    // condition 2 at eta = e, max over s
  std::optional<double> grad_conv_norm;   // condition 3, (sum_s ||grad_conv||_p^p)^(1/p)
  double gradient_norm = 0;         // ||grad f||_p on the ball
  std::optional<double> bound;      // |S| K ||grad f||_p when K is given
  std::size_t domain = 0;
  std::string note;
};

// Evidence table for the vanishing criterion: one row per measure.
std::vector<VanishingRow> vanishing_probe(const BallIndex& ball, const std::vector<std::pair<int, Measure>>& measures,
                                          const std::vector<Rational>& f, double p,
                                          std::optional<Rational> K = std::nullopt);
std::string vanishing_csv(const std::vector<VanishingRow>& rows);

}  // namespace trlab
