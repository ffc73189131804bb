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

#include <algorithm>
#include <limits>
#include <queue>

#include "trlab/errors.hpp"
#include "trlab/transport.hpp"

namespace trlab {

namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

void check_transport_inputs(const Measure& xi, const Measure& phi) {
  if (!(xi.group() == phi.group())) throw UsageError("transport between measures on different groups");
  if (!xi.is_nonnegative() || !phi.is_nonnegative()) throw DomainError("transport needs nonnegative measures");
  if (xi.total_mass() != phi.total_mass()) {
    throw DomainError("transport: total masses differ (" + to_string(xi.total_mass()) + " vs " +
                      to_string(phi.total_mass()) + ")");
  }
}

int half_up(std::int64_t a) { return static_cast<int>((a + 1) / 2); }

// Radius needed for the supports, measured with in-ball distances (which are
// exact whenever the result does not exceed the ball radius).
int radius_needed_in_ball(const Measure& xi, const Measure& phi, const BallIndex& ball) {
  if (xi == phi) return 0;
  std::vector<std::size_t> targets;
  for (const auto& [y, m] : phi.atoms()) targets.push_back(ball.index_of(y));
  int need = 0;
  for (const auto& [x, m] : xi.atoms()) {
    std::size_t vx = ball.index_of(x);
    auto dist = ball.distances_from(vx);
    for (std::size_t vy : targets) {
      if (dist[vy] < 0) return std::numeric_limits<int>::max();
      need = std::max(need, half_up(ball.dist(vx) + ball.dist(vy) + dist[vy]));
    }
  }
  return need;
}

}  // namespace

Rational total_mass(const EdgeMeasure& m) {
  Rational s = 0;
  for (const auto& [e, w] : m) s += w;
  return s;
}

std::optional<int> required_radius(const Measure& xi, const Measure& phi) {
  const Group& g = xi.group();
  std::map<Element, std::int64_t> len;
  auto length = [&](const Element& x) -> std::optional<std::int64_t> {
    if (auto it = len.find(x); it != len.end()) return it->second;
    auto l = g.word_length(x);
    if (l) len.emplace(x, *l);
    return l;
  };
  int need = 0;
  if (xi == phi) {
    for (const auto& [x, mx] : xi.atoms()) {
      auto lx = length(x);
      if (!lx) return std::nullopt;
      need = std::max<int>(need, *lx);
    }
    return need;
  }
  for (const auto& [x, mx] : xi.atoms()) {
    auto lx = length(x);
    if (!lx) return std::nullopt;
    for (const auto& [y, my] : phi.atoms()) {
      auto ly = length(y);
      auto dxy = g.word_length(g.multiply(x, g.invert(y)));
      if (!ly || !dxy) return std::nullopt;
      need = std::max(need, half_up(*lx + *ly + *dxy));
    }
  }
  return need;
}

std::shared_ptr<const BallIndex> ball_for_measures(const Measure& xi, const Measure& phi, std::size_t vertex_budget) {
  check_transport_inputs(xi, phi);
  const Group& g = xi.group();
  if (auto r = required_radius(xi, phi)) return std::make_shared<const BallIndex>(g, g.identity(), *r, vertex_budget);
  int r = 1;
  auto ball = std::make_shared<const BallIndex>(g, g.identity(), r, vertex_budget);
  auto inside = [&] {
    for (const Measure* m : {&xi, &phi}) {
      for (const auto& [x, w] : m->atoms()) {
        if (!ball->find(x)) return false;
      }
    }
    return true;
  };
  while (!inside()) {
    r *= 2;
    ball = std::make_shared<const BallIndex>(g, g.identity(), r, vertex_budget);
  }
  while (true) {
    int need = radius_needed_in_ball(xi, phi, *ball);
    if (need <= r) return ball;
    r = need;
    ball = std::make_shared<const BallIndex>(g, g.identity(), r, vertex_budget);
  }
}

FlowResult trc_flow(const Measure& xi, const Measure& phi, const BallIndex& ball) {
  check_transport_inputs(xi, phi);
  if (!(xi.group() == ball.group())) throw UsageError("trc_flow: ball and measures live on different groups");
  for (const Measure* m : {&xi, &phi}) {
    for (const auto& [x, w] : m->atoms()) {
      if (!ball.find(x)) {
        throw ResourceError("trc_flow: support point " + xi.group().format(x) + " lies outside the ball of radius " +
                            std::to_string(ball.radius()));
      }
    }
  }
  int need = radius_needed_in_ball(xi, phi, ball);
  if (need > ball.radius()) {
    throw ResourceError("trc_flow: ball radius " + std::to_string(ball.radius()) + " is too small; need at least " +
                        std::to_string(need));
  }

  const std::size_t V = ball.num_vertices(), E = ball.num_edges();
  std::vector<Rational> excess(V, Rational(0));
  for (const auto& [x, w] : xi.atoms()) excess[ball.index_of(x)] += w;
  for (const auto& [y, w] : phi.atoms()) excess[ball.index_of(y)] -= w;
  std::vector<Rational> flow(E, Rational(0));
  std::vector<std::int64_t> pi(V, 0);
  std::vector<std::int64_t> dist(V);
  std::vector<std::int64_t> via(V);  // edge id, negated-minus-one for cancel arcs

  using Item = std::pair<std::int64_t, std::size_t>;
  while (true) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::fill(dist.begin(), dist.end(), kUnreached);
    std::fill(via.begin(), via.end(), 0);
    bool any = false;
    for (std::size_t v = 0; v < V; ++v) {
      if (excess[v] > 0) {
        dist[v] = 0;
        heap.emplace(0, v);
        any = true;
      }
    }
    if (!any) break;
    std::optional<std::size_t> sink;
    std::vector<bool> done(V, false);
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (done[u]) continue;
      done[u] = true;
      if (excess[u] < 0) {
        sink = u;
        break;
      }
      for (std::uint32_t e : ball.out_edges(u)) {
        std::size_t w = ball.edge(e).dst;
        if (done[w]) continue;
        // Cancelling flow on the reverse edge is cheaper than a new unit.
        bool cancel = flow[ball.reverse(e)] > 0;
        std::int64_t rc = (cancel ? -1 : 1) + pi[u] - pi[w];
        std::int64_t nd = du + rc;
        if (nd < dist[w]) {
          dist[w] = nd;
          via[w] = cancel ? -static_cast<std::int64_t>(e) - 1 : static_cast<std::int64_t>(e) + 1;
          heap.emplace(nd, w);
        }
      }
    }
    if (!sink) throw DomainError("trc_flow: supply cannot reach demand inside the ball");
    const std::int64_t D = dist[*sink];
    for (std::size_t v = 0; v < V; ++v) pi[v] += std::min(dist[v], D);

    Rational push = -excess[*sink];
    std::size_t v = *sink;
    while (via[v] != 0) {
      std::size_t e = static_cast<std::size_t>(via[v] > 0 ? via[v] - 1 : -via[v] - 1);
      if (via[v] < 0) push = std::min(push, flow[ball.reverse(e)]);
      v = ball.edge(e).src;
    }
    push = std::min(push, excess[v]);
    excess[v] -= push;
    excess[*sink] += push;
    for (std::size_t u = *sink; via[u] != 0;) {
      std::size_t e = static_cast<std::size_t>(via[u] > 0 ? via[u] - 1 : -via[u] - 1);
      if (via[u] > 0) {
        flow[e] += push;
      } else {
        flow[ball.reverse(e)] -= push;
      }
      u = ball.edge(e).src;
    }
  }

  FlowResult out;
  out.cost = 0;
  for (std::size_t e = 0; e < E; ++e) {
    if (flow[e] != 0) {
      out.flow.emplace(e, flow[e]);
      out.cost += flow[e];
    }
  }
  out.potential = std::move(pi);
  return out;
}

}  // namespace trlab
