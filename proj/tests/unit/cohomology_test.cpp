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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "trlab/cohomology.hpp"
#include "trlab/errors.hpp"
#include "trlab/folner.hpp"

namespace trlab {
namespace {

Element E(std::vector<std::int64_t> c) { return Element(std::move(c)); }

std::vector<Rational> random_function(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  std::vector<Rational> f(n);
  for (auto& x : f) x = make_rational(num(rng), den(rng));
  return f;
}

std::vector<Rational> coordinate_function(const BallIndex& ball, std::function<Rational(std::int64_t)> g) {
  std::vector<Rational> f(ball.num_vertices());
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) f[v] = g(ball.vertex(v).coords[0]);
  return f;
}

// Pattern from an optimal flow for rho_s xi^vee -> xi^vee.
struct Instance {
  std::shared_ptr<const BallIndex> ball;
  Pattern pattern;
};
Instance optimal_pattern(const Measure& xi, const Element& s) {
  Measure target = vee(xi);
  Measure source = act(target, s, Action::kRho);
  auto ball = ball_for_measures(source, target);
  FlowResult r = trc_flow(source, target, *ball);
  return {ball, decompose_flow(*ball, r.flow, source, target)};
}

TEST(ConvolveTest, IdentityAndTranslation) {
  std::mt19937_64 rng(1);
  Group z2 = Group::parse("Z^2");
  BallIndex ball(z2, z2.identity(), 4);
  auto f = random_function(ball.num_vertices(), rng);
  DomainFunction id = convolve(ball, Measure::dirac(z2, z2.identity()), f);
  EXPECT_EQ(id.domain_size(), ball.num_vertices());
  EXPECT_EQ(id.values, f);
  Element s = E({1, 0});
  DomainFunction shifted = convolve(ball, Measure::dirac(z2, s), f);
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    auto u = ball.find(z2.multiply(z2.invert(s), ball.vertex(v)));
    EXPECT_EQ(shifted.defined(v), u.has_value());
    if (u) EXPECT_EQ(shifted.values[v], f[*u]);
  }
}

TEST(ConvolveTest, AverageOfTwoShifts) {
  std::mt19937_64 rng(2);
  Group z = Group::parse("Z");
  BallIndex ball(z, z.identity(), 6);
  auto f = random_function(ball.num_vertices(), rng);
  Measure avg(z);
  avg.add(E({0}), make_rational(1, 2));
  avg.add(E({1}), make_rational(1, 2));
  DomainFunction out = convolve(ball, avg, f);
  auto at = [&](std::int64_t x) { return f[ball.index_of(E({x}))]; };
  for (std::int64_t x = -6; x <= 6; ++x) {
    std::size_t v = ball.index_of(E({x}));
    ASSERT_EQ(out.defined(v), x > -6);
    if (x > -6) EXPECT_EQ(out.values[v], (at(x) + at(x - 1)) / 2);
  }
  EXPECT_THROW(convolve(ball, Measure::dirac(z, E({20})), f), DomainError);
}

TEST(GradConvTest, DiracAndConstants) {
  std::mt19937_64 rng(3);
  Group w = Group::parse("wreath(Z_2,Z)");
  BallIndex ball(w, w.identity(), 4);
  auto f = random_function(ball.num_vertices(), rng);
  for (std::size_t s = 0; s < w.generators().size(); ++s) {
    DomainFunction gc = grad_conv(ball, s, Measure::dirac(w, w.identity()), f);
    DomainFunction dg = directional_gradient(ball, s, DomainFunction::full(f));
    for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
      ASSERT_EQ(gc.defined(v), dg.defined(v));
      if (gc.defined(v)) EXPECT_EQ(gc.values[v], dg.values[v]);
    }
    Measure xi(w);
    xi.add(w.identity(), make_rational(1, 3));
    xi.add(w.generators().element(0), make_rational(2, 3));
    DomainFunction flat = grad_conv(ball, s, xi, std::vector<Rational>(ball.num_vertices(), Rational(7)));
    for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
      if (flat.defined(v)) EXPECT_EQ(flat.values[v], 0);
    }
  }
}

TEST(GradConvTest, CentralKernelsCommute) {
  std::mt19937_64 rng(4);
  Group h = Group::parse("Heis");
  BallIndex ball(h, h.identity(), 10);
  Element z = h.parse_element("(0,0,1)");
  for (int n = 1; n <= 4; ++n) {
    Measure xi = Measure::dirac(h, h.power(z, n));
    auto f = random_function(ball.num_vertices(), rng);
    for (std::size_t s = 0; s < h.generators().size(); ++s) {
      DomainFunction lhs = grad_conv(ball, s, xi, f);
      DomainFunction rhs = convolve(ball, xi, directional_gradient(ball, s, DomainFunction::full(f)));
      std::size_t common = 0;
      for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
        if (!lhs.defined(v) || !rhs.defined(v)) continue;
        ++common;
        EXPECT_EQ(lhs.values[v], rhs.values[v]);
      }
      EXPECT_GT(common, 0u);
    }
  }
  // A non-central kernel does not commute.
  Measure xi = Measure::dirac(h, h.generators().element(2));
  auto f = random_function(ball.num_vertices(), rng);
  DomainFunction lhs = grad_conv(ball, 0, xi, f);
  DomainFunction rhs = convolve(ball, xi, directional_gradient(ball, 0, DomainFunction::full(f)));
  bool differ = false;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    if (lhs.defined(v) && rhs.defined(v) && lhs.values[v] != rhs.values[v]) differ = true;
  }
  EXPECT_TRUE(differ);
}

TEST(DecayTest, DiracKernel) {
  std::mt19937_64 rng(5);
  Group z2 = Group::parse("Z^2");
  BallIndex ball(z2, z2.identity(), 3);
  auto f = random_function(ball.num_vertices(), rng);
  DecayReport r = pointwise_decay_check(ball, 1, Measure::dirac(z2, z2.identity()), f);
  Rational sup = 0;
  for (auto& x : f) sup = std::max(sup, Rational(abs(x)));
  EXPECT_EQ(r.l1_shift, 2);
  EXPECT_EQ(r.rhs, 2 * sup);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.max_lhs, r.rhs);
}

TEST(DecayTest, IntegerBoxes) {
  Group z = Group::parse("Z");
  BallIndex ball(z, z.identity(), 30);
  auto sign = coordinate_function(ball, [](std::int64_t x) { return Rational(x >= 0 ? 1 : -1); });
  auto stair = coordinate_function(ball, [](std::int64_t x) { return Rational(std::clamp<std::int64_t>(x, 0, 5)); });
  auto step = coordinate_function(ball, [](std::int64_t x) { return Rational(x > 0 ? 1 : 0); });
  auto flat = coordinate_function(ball, [](std::int64_t) { return Rational(3); });
  Rational previous = 2;
  for (int n = 2; n <= 10; ++n) {
    Measure xi = uniform_measure(box_folner(z, n));
    DecayReport s = pointwise_decay_check(ball, 0, xi, sign);
    EXPECT_EQ(s.rhs, make_rational(2, n));
    EXPECT_EQ(s.max_lhs, s.rhs);
    EXPECT_TRUE(s.holds);
    // On Z: grad_conv(eta) = (f(eta - n) - f(eta)) / n for the generator +1.
    // The clamp rises by at most n over n steps.
    DecayReport st = pointwise_decay_check(ball, 0, xi, stair);
    EXPECT_EQ(st.max_lhs, make_rational(std::min(n, 5), n));
    EXPECT_EQ(st.rhs, make_rational(10, n));
    EXPECT_TRUE(st.holds);
    DecayReport one = pointwise_decay_check(ball, 0, xi, step);
    EXPECT_EQ(one.max_lhs, make_rational(1, n));
    EXPECT_LT(one.max_lhs, previous);
    previous = one.max_lhs;
    EXPECT_EQ(pointwise_decay_check(ball, 1, xi, flat).max_lhs, 0);
  }
}

TEST(TransportOperatorTest, MatchesGradConvUpToSign) {
  std::mt19937_64 rng(6);
  struct Case {
    const char* spec;
    int n, radius;
  };
  for (Case c : {Case{"Z", 3, 10}, Case{"Z^2", 2, 6}, Case{"Heis", 1, 5}, Case{"wreath(Z_2,Z)", 1, 5}}) {
    Group g = Group::parse(c.spec);
    std::string name = c.spec;
    Measure xi = name == "Heis"            ? Measure::dirac(g, g.identity())
                 : name == "wreath(Z_2,Z)" ? uniform_measure(wreath_folner(g, 2))
                                           : uniform_measure(box_folner(g, c.n));
    BallIndex work(g, g.identity(), c.radius);
    for (std::size_t s = 0; s < g.generators().size(); ++s) {
      Instance inst = optimal_pattern(xi, g.generators().element(s));
      auto f = random_function(work.num_vertices(), rng);
      DomainFunction T = transport_operator(work, s, xi, *inst.ball, inst.pattern, gradient(work, f));
      DomainFunction G = grad_conv(work, s, xi, f);
      std::size_t common = 0;
      for (std::size_t v = 0; v < work.num_vertices(); ++v) {
        if (!T.defined(v) || !G.defined(v)) continue;
        ++common;
        EXPECT_EQ(T.values[v], -G.values[v]) << c.spec;
      }
      EXPECT_GT(common, 0u) << c.spec;
    }
  }
}

TEST(TransportOperatorTest, WreathPatternIdentity) {
  std::mt19937_64 rng(7);
  Group w = Group::parse("wreath(Z_2,Z)");
  Element t = w.wreath_element({}, E({1}));
  WreathPattern wp = build_wreath_pattern(w, 2, t);
  BallIndex work(w, w.identity(), wp.ball->radius() + 2);
  Measure xi = uniform_measure(wreath_folner(w, 2));
  std::size_t gen = *w.generators().find_element(t);
  auto f = random_function(work.num_vertices(), rng);
  DomainFunction T = transport_operator(work, gen, xi, *wp.ball, wp.pattern, gradient(work, f));
  DomainFunction G = grad_conv(work, gen, xi, f);
  std::size_t common = 0;
  for (std::size_t v = 0; v < work.num_vertices(); ++v) {
    if (!T.defined(v) || !G.defined(v)) continue;
    ++common;
    EXPECT_EQ(T.values[v], -G.values[v]);
  }
  EXPECT_GT(common, 0u);
}

TEST(TransportOperatorTest, ConstantPrices) {
  Group z = Group::parse("Z");
  Measure xi = uniform_measure(box_folner(z, 3));
  Instance inst = optimal_pattern(xi, E({1}));
  BallIndex work(z, z.identity(), 8);
  Rational flat = total_mass(flatten(inst.pattern));
  DomainFunction zero = transport_operator(work, 0, xi, *inst.ball, inst.pattern,
                                           std::vector<Rational>(work.num_edges(), Rational(0)));
  DomainFunction one = transport_operator(work, 0, xi, *inst.ball, inst.pattern,
                                          std::vector<Rational>(work.num_edges(), Rational(1)));
  EXPECT_GT(one.domain_size(), 0u);
  for (std::size_t v = 0; v < work.num_vertices(); ++v) {
    if (!one.defined(v)) continue;
    EXPECT_EQ(zero.values[v], 0);
    EXPECT_EQ(one.values[v], flat);
  }
  EXPECT_THROW(transport_operator(work, 1, xi, *inst.ball, inst.pattern,
                                  std::vector<Rational>(work.num_edges(), Rational(1))),
               DomainError);
}

TEST(OperatorBoundTest, SingleEdgeIndicator) {
  Group z2 = Group::parse("Z^2");
  Measure xi = uniform_measure(box_folner(z2, 2));
  Instance inst = optimal_pattern(xi, E({1, 0}));
  BallIndex work(z2, z2.identity(), inst.ball->radius() + 3);
  Rational flat = total_mass(flatten(inst.pattern));
  for (std::size_t e = 0; e < work.num_edges(); e += 7) {
    std::vector<Rational> price(work.num_edges(), Rational(0));
    price[e] = 1;
    DomainFunction T = transport_operator(work, *inst.ball, inst.pattern, price);
    Rational l1 = 0;
    for (std::size_t v = 0; v < work.num_vertices(); ++v) {
      if (T.defined(v)) l1 += abs(T.values[v]);
    }
    EXPECT_LE(l1, 4 * flat);
  }
}

TEST(OperatorBoundTest, RandomPricesAllExponents) {
  Group z = Group::parse("Z");
  Measure xi = uniform_measure(box_folner(z, 5));
  Instance inst = optimal_pattern(xi, E({1}));
  std::vector<std::optional<Rational>> ps = {Rational(1), make_rational(3, 2), Rational(2), Rational(3), std::nullopt};
  for (const auto& p : ps) {
    OperatorBoundReport r = operator_bound_check(*inst.ball, inst.pattern, p, 100, 11);
    EXPECT_EQ(r.violations, 0) << r.p;
    EXPECT_EQ(r.bound, 2);
    EXPECT_GT(r.domain, 0u);
    EXPECT_GT(r.max_ratio, 0);
    EXPECT_LE(r.max_ratio, to_double(r.bound)) << r.p;
  }
  EXPECT_EQ(operator_bound_check(*inst.ball, inst.pattern, make_rational(3, 2), 1, 1).p, "3/2");
  EXPECT_THROW(operator_bound_check(*inst.ball, inst.pattern, make_rational(1, 2), 1, 1), DomainError);
}

TEST(MazurTest, Identities) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-3, 3);
  std::vector<double> f(50);
  for (double& x : f) x = U(rng);
  EXPECT_EQ(mazur(f, 2), f);
  EXPECT_EQ(mazur({2.0}, 3)[0], 4.0);
  EXPECT_EQ(mazur({0.0}, 1.5)[0], 0.0);
  EXPECT_THROW(mazur(f, 1), DomainError);
  for (double p : {1.5, 3.0, 4.5}) {
    std::vector<double> neg(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) neg[i] = -f[i];
    auto m = mazur(f, p), mn = mazur(neg, p);
    double pair = 0, normp = 0, dual = 0, q = p / (p - 1);
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_EQ(mn[i], -m[i]);
      pair += f[i] * m[i];
      normp += std::pow(std::fabs(f[i]), p);
      dual += std::pow(std::fabs(m[i]), q);
    }
    EXPECT_NEAR(pair, normp, 1e-9 * normp);
    EXPECT_NEAR(dual, normp, 1e-9 * normp);
  }
}

TEST(EnergyTest, Examples) {
  Group z = Group::parse("Z");
  BallIndex path(z, z.identity(), 5);
  std::vector<double> x(path.num_vertices()), c(path.num_vertices(), 2.5);
  for (std::size_t v = 0; v < path.num_vertices(); ++v) x[v] = static_cast<double>(path.vertex(v).coords[0]);
  EXPECT_EQ(p_dirichlet_energy(path, c, 3), 0);
  EXPECT_EQ(p_dirichlet_energy(path, x, 2), 20);  // 10 undirected edges, both orientations
  std::vector<double> y(x);
  for (double& t : y) t *= -3;
  EXPECT_NEAR(p_dirichlet_energy(path, y, 2.5), std::pow(3, 2.5) * p_dirichlet_energy(path, x, 2.5), 1e-9);
  DirichletFunction d{&path, x, path.index_of(z.identity())};
  EXPECT_EQ(d.norm_p(2), 20);
}

std::map<std::size_t, double> sphere_values(const BallIndex& ball, std::function<double(std::size_t)> g) {
  std::map<std::size_t, double> out;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    if (ball.dist(v) == ball.radius()) out[v] = g(v);
  }
  return out;
}

TEST(PHarmonicTest, ConstantBoundary) {
  Group z2 = Group::parse("Z^2");
  BallIndex ball(z2, z2.identity(), 4);
  for (double p : {1.5, 2.0, 4.0}) {
    PHarmonicResult r = p_harmonic_solve(ball, sphere_values(ball, [](std::size_t) { return 0.3; }), p);
    EXPECT_EQ(r.residual, 0);
    EXPECT_EQ(r.iterations, 0);
    for (double v : r.h.values) EXPECT_EQ(v, 0.3);
  }
}

TEST(PHarmonicTest, LinearOracleForPEqualsTwo) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1, 1);
  Group z2 = Group::parse("Z^2");
  BallIndex ball(z2, z2.identity(), 4);
  auto bd = sphere_values(ball, [&](std::size_t) { return U(rng); });
  PHarmonicResult r = p_harmonic_solve(ball, bd, 2.0);
  // Dense oracle: h(v) = mean of the four neighbours, built from the group law.
  const auto n = static_cast<Eigen::Index>(ball.num_vertices());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    auto i = static_cast<Eigen::Index>(v);
    if (bd.count(v)) {
      A(i, i) = 1;
      b[i] = bd[v];
      continue;
    }
    for (const Element& s : z2.generators().elements()) {
      A(i, i) += 1;
      A(i, static_cast<Eigen::Index>(ball.index_of(z2.multiply(s, ball.vertex(v))))) -= 1;
    }
  }
  Eigen::VectorXd h = A.fullPivLu().solve(b);
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) EXPECT_NEAR(r.h.values[v], h[static_cast<Eigen::Index>(v)], 1e-10);
  EXPECT_LE(r.residual, 1e-9);
}

TEST(PHarmonicTest, PathIsLinearForEveryP) {
  Group z = Group::parse("Z");
  BallIndex path(z, z.identity(), 5);
  std::map<std::size_t, double> bd = {{path.index_of(E({-5})), 0.0}, {path.index_of(E({5})), 1.0}};
  for (double p : {1.5, 3.0, 4.0}) {
    PHarmonicResult r = p_harmonic_solve(path, bd, p);
    EXPECT_LE(r.residual, 1e-9);
    for (std::size_t v = 0; v < path.num_vertices(); ++v) {
      EXPECT_NEAR(r.h.values[v], (static_cast<double>(path.vertex(v).coords[0]) + 5) / 10, 1e-8);
    }
  }
}

TEST(PHarmonicTest, EnergyDescentAndMinimality) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> U(-1, 1);
  for (const char* spec : {"Z^2", "Heis", "wreath(Z_2,Z)"}) {
    Group g = Group::parse(spec);
    BallIndex ball(g, g.identity(), 3);
    auto bd = sphere_values(ball, [&](std::size_t) { return U(rng); });
    for (double p : {1.5, 3.0, 4.0}) {
      PHarmonicResult r = p_harmonic_solve(ball, bd, p);
      EXPECT_LE(r.residual, 1e-9) << spec << " p=" << p;
      ASSERT_EQ(r.energy.size(), static_cast<std::size_t>(r.iterations) + 1);
      for (std::size_t i = 1; i < r.energy.size(); ++i) EXPECT_LE(r.energy[i], r.energy[i - 1]);
      EXPECT_NEAR(p_harmonic_residual(ball, r.h.values, p), r.residual, 1e-15);
      double best = p_dirichlet_energy(ball, r.h.values, p);
      for (int t = 0; t < 20; ++t) {
        std::vector<double> other = r.h.values;
        for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
          if (ball.is_interior(v)) other[v] += 0.05 * U(rng);
        }
        EXPECT_LE(best, p_dirichlet_energy(ball, other, p));
      }
    }
  }
}

TEST(PHarmonicTest, Errors) {
  Group z2 = Group::parse("Z^2");
  BallIndex ball(z2, z2.identity(), 3);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-1, 1);
  auto bd = sphere_values(ball, [&](std::size_t) { return U(rng); });
  EXPECT_THROW(p_harmonic_solve(ball, bd, 1.0), DomainError);
  auto missing = bd;
  missing.erase(missing.begin());
  EXPECT_THROW(p_harmonic_solve(ball, missing, 2.0), UsageError);
  auto inner = bd;
  inner[ball.index_of(z2.identity())] = 0;
  EXPECT_THROW(p_harmonic_solve(ball, inner, 2.0), UsageError);
  try {
    p_harmonic_solve(ball, bd, 4.0, {1e-9, 1});
    FAIL() << "expected non-convergence";
  } catch (const NonConvergenceError& e) {
    EXPECT_GT(e.last_residual(), 1e-9);
  }
}

TEST(VanishingProbeTest, IntegerStaircase) {
  Group z = Group::parse("Z");
  BallIndex ball(z, z.identity(), 30);
  auto stair = coordinate_function(ball, [](std::int64_t x) { return Rational(std::clamp<std::int64_t>(x, 0, 4)); });
  std::vector<std::pair<int, Measure>> ms;
  for (int n = 2; n <= 10; ++n) ms.emplace_back(n, uniform_measure(box_folner(z, n)));
  auto rows = vanishing_probe(ball, ms, stair, 2.0, Rational(1));
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.mass, 1);
    ASSERT_TRUE(r.max_pointwise);
    EXPECT_EQ(*r.max_pointwise, make_rational(std::min(r.n, 4), r.n));
    ASSERT_TRUE(r.bound);
    EXPECT_LE(*r.grad_conv_norm, *r.bound);
  }
  auto flat = vanishing_probe(ball, ms, std::vector<Rational>(ball.num_vertices(), Rational(2)), 2.0);
  for (const auto& r : flat) {
    EXPECT_EQ(*r.max_pointwise, 0);
    EXPECT_EQ(*r.grad_conv_norm, 0);
  }
  std::string csv = vanishing_csv({rows[0]});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,mass,max_pointwise,at_identity,grad_conv_norm,gradient_norm,bound,domain,note");
}

TEST(VanishingProbeTest, HeisenbergConjugacyClasses) {
  Group h = Group::parse("Heis");
  BallIndex ball(h, h.identity(), 14);
  std::vector<Rational> f(ball.num_vertices());
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) f[v] = make_rational(1, 1 + ball.dist(v));
  std::vector<std::pair<int, Measure>> ms;
  auto classes = conjugacy_class_measures(h, 3);
  for (int j = 0; j < 3; ++j) ms.emplace_back(j + 1, classes[j]);
  auto rows = vanishing_probe(ball, ms, f, 2.0);
  Rational previous = 1;
  for (const auto& r : rows) {
    ASSERT_TRUE(r.at_identity) << r.n;
    EXPECT_LT(*r.at_identity, previous);
    previous = *r.at_identity;
  }
  BallIndex small(h, h.identity(), 2);
  std::vector<Rational> g(small.num_vertices(), Rational(1));
  auto noted = vanishing_probe(small, {{3, classes[2]}}, g, 2.0);
  EXPECT_FALSE(noted[0].max_pointwise);
  EXPECT_FALSE(noted[0].note.empty());
}

}  // namespace
}  // namespace trlab
