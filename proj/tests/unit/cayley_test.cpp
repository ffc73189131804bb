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

#include <random>
#include <set>

#include "json.hpp"
#include "trlab/cayley.hpp"
#include "trlab/rational.hpp"

namespace trlab {
namespace {

Element E(std::vector<std::int64_t> c) { return Element(std::move(c)); }

TEST(CayleyTest, FreeAbelianBallSizes) {
  Group z2 = Group::parse("Z^2");
  EXPECT_EQ(BallIndex(z2, z2.identity(), 1).num_vertices(), 5u);
  EXPECT_EQ(BallIndex(z2, z2.identity(), 2).num_vertices(), 13u);
  for (int r = 0; r <= 6; ++r) {
    std::size_t lattice = 0;
    for (int x = -r; x <= r; ++x) {
      for (int y = -r; y <= r; ++y) lattice += std::abs(x) + std::abs(y) <= r;
    }
    EXPECT_EQ(BallIndex(z2, z2.identity(), r).num_vertices(), lattice);
    EXPECT_EQ(lattice, static_cast<std::size_t>(2 * r * r + 2 * r + 1));
  }
}

TEST(CayleyTest, LamplighterBallMatchesWordExpansion) {
  Group w = Group::parse("wreath(Z_2,Z)");
  const auto& S = w.generators();
  std::set<Element> words{w.identity()};
  std::set<Element> frontier = words;
  for (int len = 1; len <= 2; ++len) {
    std::set<Element> next;
    for (const Element& x : frontier) {
      for (const Element& s : S.elements()) next.insert(w.multiply(x, s));
    }
    words.insert(next.begin(), next.end());
    frontier = next;
  }
  BallIndex ball(w, w.identity(), 2);
  EXPECT_EQ(ball.num_vertices(), 10u);
  EXPECT_EQ(std::set<Element>(ball.vertices().begin(), ball.vertices().end()), words);
}

TEST(CayleyTest, EdgesFollowConventionAndAreSymmetric) {
  for (const char* spec : {"Z^2", "Heis", "wreath(Z_2,Z)", "prod(Z,Z_3)"}) {
    Group g = Group::parse(spec);
    BallIndex ball(g, g.identity(), 3);
    const auto& S = g.generators();
    for (std::size_t e = 0; e < ball.num_edges(); ++e) {
      const Edge& a = ball.edge(e);
      EXPECT_EQ(ball.vertex(a.dst), g.multiply(g.invert(S.element(a.gen)), ball.vertex(a.src)));
      const Edge& r = ball.edge(ball.reverse(e));
      EXPECT_EQ(r.src, a.dst);
      EXPECT_EQ(r.dst, a.src);
      EXPECT_EQ(r.gen, S.inverse_index(a.gen));
    }
    for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
      if (ball.is_interior(v)) EXPECT_EQ(ball.out_edges(v).size(), S.size());
    }
  }
}

TEST(CayleyTest, DistancesMatchWordLength) {
  for (const char* spec : {"Z^2", "Z_5^2", "wreath(Z_2,Z)", "wreath(Z_3,Z)", "wreath(Z_2,Z^2)"}) {
    Group g = Group::parse(spec);
    BallIndex ball(g, g.identity(), 5);
    for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
      EXPECT_EQ(ball.dist(v), *g.word_length(ball.vertex(v))) << spec << " " << g.format(ball.vertex(v));
    }
  }
  // Heisenberg: compare with the right-multiplication search behind geodesic_word.
  Group h = Group::heisenberg();
  BallIndex ball(h, h.identity(), 5);
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    EXPECT_EQ(static_cast<std::size_t>(ball.dist(v)), h.geodesic_word(ball.vertex(v)).size());
  }
}

TEST(CayleyTest, OffCenterBall) {
  Group z2 = Group::parse("Z^2");
  BallIndex ball(z2, E({3, -1}), 2);
  EXPECT_EQ(ball.num_vertices(), 13u);
  EXPECT_EQ(ball.dist(ball.index_of(E({4, 0}))), 2);
}

TEST(CayleyTest, GraphDistanceExamples) {
  Group w = Group::parse("wreath(Z_2,Z)");
  BallIndex ball(w, w.identity(), 6);
  EXPECT_EQ(graph_distance(ball, w.identity(), w.identity()).value, 0);
  for (const Element& s : w.generators().elements()) {
    Distance d = graph_distance(ball, w.identity(), s);
    EXPECT_EQ(d.value, 1);
    EXPECT_TRUE(d.exact);
  }
  Element two = w.wreath_element({{E({0}), E({1})}, {E({1}), E({1})}}, E({0}));
  EXPECT_EQ(graph_distance(ball, w.identity(), two).value, 4);
  Element far = w.wreath_element({{E({0}), E({1})}, {E({3}), E({1})}}, E({2}));
  EXPECT_EQ(graph_distance(ball, w.identity(), far).value, 6);
  EXPECT_THROW(graph_distance(ball, w.identity(), w.wreath_element({}, E({9}))), DomainError);
}

TEST(CayleyTest, GraphDistanceIsWordLengthOfQuotient) {
  Group g = Group::parse("wreath(Z_2,Z)");
  BallIndex ball(g, g.identity(), 6);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, ball.num_vertices() - 1);
  int checked = 0;
  while (checked < 200) {
    std::size_t x = pick(rng), y = pick(rng);
    if (ball.dist(x) + ball.dist(y) > 6) continue;
    ++checked;
    Distance d = graph_distance(ball, ball.vertex(x), ball.vertex(y));
    EXPECT_TRUE(d.exact);
    EXPECT_EQ(d.value, *g.word_length(g.multiply(ball.vertex(x), g.invert(ball.vertex(y)))));
  }
}

TEST(CayleyTest, GradientBasics) {
  Group z = Group::parse("Z");
  BallIndex ball(z, z.identity(), 1);
  auto zero = gradient(ball, std::vector<Rational>(ball.num_vertices(), Rational(7)));
  for (const auto& x : zero) EXPECT_EQ(x, 0);
  std::vector<Rational> delta(ball.num_vertices(), Rational(0));
  delta[ball.index_of(z.identity())] = 1;
  auto g = gradient(ball, delta);
  ASSERT_EQ(ball.num_edges(), 4u);
  int plus = 0, minus = 0;
  for (std::size_t e = 0; e < ball.num_edges(); ++e) {
    if (g[e] == 1) ++plus;
    if (g[e] == -1) ++minus;
    EXPECT_EQ(g[e], -g[ball.reverse(e)]);
  }
  EXPECT_EQ(plus, 2);
  EXPECT_EQ(minus, 2);
}

TEST(CayleyTest, GradientIsFiniteDifference) {
  Group z2 = Group::parse("Z^2");
  BallIndex ball(z2, z2.identity(), 2);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> val(-9, 9);
  std::vector<Rational> f(ball.num_vertices());
  std::map<Element, int> by_point;
  for (std::size_t v = 0; v < f.size(); ++v) {
    int x = val(rng);
    f[v] = x;
    by_point[ball.vertex(v)] = x;
  }
  auto g = gradient(ball, f);
  const auto& S = z2.generators();
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    const auto& p = ball.vertex(v).coords;
    for (std::size_t s = 0; s < S.size(); ++s) {
      const auto& step = S.element(s).coords;
      Element q = E({p[0] - step[0], p[1] - step[1]});
      auto e = ball.edge_from(v, s);
      if (!by_point.count(q)) {
        EXPECT_FALSE(e.has_value());
        continue;
      }
      ASSERT_TRUE(e.has_value());
      EXPECT_EQ(g[*e], by_point[q] - by_point[ball.vertex(v)]);
    }
  }
}

TEST(CayleyTest, DivergenceIsAdjoint) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> val(-20, 20);
  for (const char* spec : {"Z", "Z^2", "wreath(Z_2,Z)"}) {
    Group g = Group::parse(spec);
    BallIndex ball(g, g.identity(), 2);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Rational> f(ball.num_vertices()), u(ball.num_edges());
      for (auto& x : f) x = make_rational(val(rng), 1 + std::abs(val(rng)));
      for (auto& x : u) x = make_rational(val(rng), 1 + std::abs(val(rng)));
      EXPECT_EQ(inner_product(gradient(ball, f), u), inner_product(f, divergence(ball, u)));
      for (std::size_t v = 0; v < f.size(); ++v) {
        if (!ball.is_interior(v)) f[v] = 0;
      }
      auto gf = gradient(ball, f);
      EXPECT_EQ(inner_product(gf, gf), inner_product(f, divergence(ball, gf)));
    }
    auto z = divergence(ball, std::vector<Rational>(ball.num_edges(), Rational(0)));
    for (const auto& x : z) EXPECT_EQ(x, 0);
  }
}

TEST(CayleyTest, DeterministicOrderAndJson) {
  Group w = Group::parse("wreath(Z_2,Z)");
  BallIndex a(w, w.identity(), 3), b(w, w.identity(), 3);
  EXPECT_EQ(a.vertices(), b.vertices());
  EXPECT_EQ(a.to_json(), b.to_json());
  auto j = nlohmann::json::parse(a.to_json());
  EXPECT_EQ(j["vertices"].size(), a.num_vertices());
  EXPECT_EQ(j["edges"].size(), a.num_edges());
  EXPECT_EQ(j["vertices"][0], "[]@(0)");
}

TEST(CayleyTest, BudgetIsEnforced) {
  Group w = Group::parse("wreath(Z_2,Z)");
  try {
    BallIndex(w, w.identity(), 10, 100);
    FAIL() << "expected a resource error";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("100"), std::string::npos);
  }
  EXPECT_THROW(BallIndex(w, w.identity(), -1), UsageError);
}

TEST(CayleyTest, ShortestPathWalksEdges) {
  Group z2 = Group::parse("Z^2");
  BallIndex ball(z2, z2.identity(), 4);
  auto path = ball.shortest_path(ball.index_of(E({-2, 0})), ball.index_of(E({1, 1})));
  ASSERT_TRUE(path);
  EXPECT_EQ(path->size(), 4u);
  std::size_t at = ball.index_of(E({-2, 0}));
  for (std::size_t e : *path) {
    EXPECT_EQ(ball.edge(e).src, at);
    at = ball.edge(e).dst;
  }
  EXPECT_EQ(at, ball.index_of(E({1, 1})));
}

}  // namespace
}  // namespace trlab
