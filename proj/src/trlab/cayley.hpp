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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "trlab/errors.hpp"
#include "trlab/group.hpp"

namespace trlab {

// Directed labelled Cayley edge src -> dst with dst = s^-1 * src, where s is
// generator number `gen`.
struct Edge {
  std::uint32_t src;
  std::uint32_t dst;
  std::uint32_t gen;
};

struct Distance {
  std::int64_t value;
  bool exact;  // false: only an upper bound (geodesic may leave the ball)
};

// The ball of given radius around `center` in cay(G, S). Vertices are in BFS
// order (generators tried in generating-set order); edges are sorted by
// (src, gen). Immutable after construction.
class BallIndex {
 public:
  static constexpr std::size_t kDefaultBudget = 2'000'000;

  BallIndex(Group group, Element center, int radius, std::size_t vertex_budget = kDefaultBudget);

  const Group& group() const { return group_; }
  const Element& center() const { return center_; }
  int radius() const { return radius_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const Element& vertex(std::size_t v) const { return vertices_[v]; }
  const std::vector<Element>& vertices() const { return vertices_; }
  int dist(std::size_t v) const { return dist_[v]; }

  std::optional<std::size_t> find(const Element& e) const;
  // Throws DomainError if e is outside the ball.
  std::size_t index_of(const Element& e) const;

  const Edge& edge(std::size_t e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Edge leaving v with generator s, if its endpoint is in the ball.
  std::optional<std::size_t> edge_from(std::size_t v, std::size_t gen) const;
  // The same edge traversed backwards: (dst, src, inverse generator).
  std::size_t reverse(std::size_t e) const { return reverse_[e]; }
  // Edge ids leaving v, in generator order.
  std::span<const std::uint32_t> out_edges(std::size_t v) const;

  // BFS distances inside the ball from vertex `from` (-1 if unreachable).
  std::vector<std::int64_t> distances_from(std::size_t from) const;
  // A shortest edge path inside the ball, or nullopt if none exists.
  std::optional<std::vector<std::size_t>> shortest_path(std::size_t from, std::size_t to) const;

  // Vertices at distance < radius: every neighbour is in the ball.
  bool is_interior(std::size_t v) const { return dist_[v] < radius_; }

  // {"group", "center", "radius", "vertices", "dist", "edges": [[src,dst,label],...]}
  std::string to_json() const;

 private:
  Group group_;
  Element center_;
  int radius_;
  std::vector<Element> vertices_;
  std::vector<int> dist_;
  std::unordered_map<Element, std::uint32_t, ElementHash> index_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> reverse_;
  std::vector<std::uint32_t> out_start_;
  std::vector<std::uint32_t> out_ids_;
};

// Length of a shortest path between x and y inside the ball. Flagged exact
// when dist(x) + dist(y) <= radius, which keeps some geodesic in the ball.
Distance graph_distance(const BallIndex& ball, const Element& x, const Element& y);

// grad f (a) = f(dst a) - f(src a).
template <class T>
std::vector<T> gradient(const BallIndex& ball, const std::vector<T>& f) {
  if (f.size() != ball.num_vertices()) throw UsageError("gradient: vertex function has wrong size");
  std::vector<T> out(ball.num_edges());
  for (std::size_t e = 0; e < ball.num_edges(); ++e) {
    const Edge& a = ball.edge(e);
    out[e] = f[a.dst] - f[a.src];
  }
  return out;
}

// Formal adjoint of gradient: div u (v) = sum of u over edges entering v
// minus sum over edges leaving v, so <grad f, u> = <f, div u>.
template <class T>
std::vector<T> divergence(const BallIndex& ball, const std::vector<T>& u) {
  if (u.size() != ball.num_edges()) throw UsageError("divergence: edge function has wrong size");
  std::vector<T> out(ball.num_vertices(), T(0));
  for (std::size_t e = 0; e < ball.num_edges(); ++e) {
    const Edge& a = ball.edge(e);
    out[a.dst] += u[e];
    out[a.src] -= u[e];
  }
  return out;
}

template <class T>
T inner_product(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw UsageError("inner product of vectors of different sizes");
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace trlab
