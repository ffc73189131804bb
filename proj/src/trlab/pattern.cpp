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

#include "trlab/errors.hpp"
#include "trlab/transport.hpp"

namespace trlab {

std::size_t path_target(const BallIndex& ball, const PatternPath& p) {
  return p.edges.empty() ? p.source : ball.edge(p.edges.back()).dst;
}

void validate(const BallIndex& ball, const Pattern& m) {
  for (const PatternPath& p : m.paths) {
    if (p.mass < 0) throw DomainError("pattern path with negative mass");
    if (p.source >= ball.num_vertices()) throw DomainError("pattern path starts outside the ball");
    std::size_t at = p.source;
    for (std::size_t e : p.edges) {
      if (e >= ball.num_edges() || ball.edge(e).src != at) throw DomainError("pattern path is not connected");
      at = ball.edge(e).dst;
    }
  }
}

std::pair<Measure, Measure> marginals(const BallIndex& ball, const Pattern& m) {
  Measure src(ball.group()), dst(ball.group());
  for (const PatternPath& p : m.paths) {
    src.add(ball.vertex(p.source), p.mass);
    dst.add(ball.vertex(path_target(ball, p)), p.mass);
  }
  return {src, dst};
}

EdgeMeasure flatten(const Pattern& m) {
  EdgeMeasure out;
  for (const PatternPath& p : m.paths) {
    if (p.mass == 0) continue;
    for (std::size_t e : p.edges) {
      Rational& slot = out[e];
      slot += p.mass;
      if (slot == 0) out.erase(e);
    }
  }
  return out;
}

Rational priced_cost(const Pattern& m, const std::map<std::size_t, Rational>& price) {
  Rational s = 0;
  for (const auto& [e, w] : flatten(m)) {
    auto it = price.find(e);
    if (it == price.end()) throw DomainError("priced_cost: edge " + std::to_string(e) + " has no price");
    s += it->second * w;
  }
  return s;
}

Pattern reversed(const BallIndex& ball, const Pattern& m) {
  Pattern out;
  for (const PatternPath& p : m.paths) {
    PatternPath r{path_target(ball, p), {}, p.mass};
    for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it) r.edges.push_back(ball.reverse(*it));
    out.paths.push_back(std::move(r));
  }
  return out;
}

Pattern decompose_flow(const BallIndex& ball, const EdgeMeasure& flow, const Measure& xi, const Measure& phi) {
  const std::size_t V = ball.num_vertices();
  std::vector<Rational> supply(V, Rational(0)), demand(V, Rational(0)), net(V, Rational(0));
  Pattern out;
  for (const auto& [x, w] : xi.atoms()) net[ball.index_of(x)] += w;
  for (const auto& [y, w] : phi.atoms()) net[ball.index_of(y)] -= w;
  for (const auto& [x, w] : xi.atoms()) {
    std::size_t v = ball.index_of(x);
    Rational stay = std::min(w, phi.mass(x));
    if (stay > 0) out.paths.push_back({v, {}, stay});
  }
  // Feasibility: out(v) - in(v) = xi(v) - phi(v).
  std::vector<Rational> balance(V, Rational(0));
  std::map<std::size_t, Rational> left;
  for (const auto& [e, w] : flow) {
    if (e >= ball.num_edges()) throw DomainError("decompose_flow: edge outside the ball");
    if (w < 0) throw DomainError("decompose_flow: negative flow");
    balance[ball.edge(e).src] += w;
    balance[ball.edge(e).dst] -= w;
    if (w > 0) left.emplace(e, w);
  }
  for (std::size_t v = 0; v < V; ++v) {
    if (balance[v] != net[v]) throw DomainError("decompose_flow: flow is not feasible for the given measures");
    if (net[v] > 0) supply[v] = net[v];
    if (net[v] < 0) demand[v] = -net[v];
  }

  // Positive-flow out-edges per vertex, in edge order.
  auto next_edge = [&](std::size_t v) -> std::optional<std::size_t> {
    for (std::uint32_t e : ball.out_edges(v)) {
      auto it = left.find(e);
      if (it != left.end() && it->second > 0) return e;
    }
    return std::nullopt;
  };
  auto take = [&](std::size_t e, const Rational& w) {
    auto it = left.find(e);
    it->second -= w;
    if (it->second == 0) left.erase(it);
  };

  for (std::size_t s = 0; s < V; ++s) {
    while (supply[s] > 0) {
      std::vector<std::size_t> walk;
      std::vector<std::size_t> at{s};
      std::map<std::size_t, std::size_t> pos{{s, 0}};
      while (true) {
        std::size_t v = at.back();
        if (v != s && demand[v] > 0) break;
        auto e = next_edge(v);
        if (!e) throw DomainError("decompose_flow: flow stops before reaching demand");
        std::size_t w = ball.edge(*e).dst;
        walk.push_back(*e);
        at.push_back(w);
        if (auto hit = pos.find(w); hit != pos.end()) {
          // Cancel the cycle and resume from where it closed.
          std::size_t from = hit->second;
          Rational c = left.at(walk[from]);
          for (std::size_t j = from; j < walk.size(); ++j) c = std::min(c, left.at(walk[j]));
          for (std::size_t j = from; j < walk.size(); ++j) take(walk[j], c);
          for (std::size_t j = from + 1; j < at.size(); ++j) pos.erase(at[j]);
          walk.resize(from);
          at.resize(from + 1);
          continue;
        }
        pos.emplace(w, at.size() - 1);
      }
      std::size_t t = at.back();
      Rational push = std::min(supply[s], demand[t]);
      for (std::size_t e : walk) push = std::min(push, left.at(e));
      for (std::size_t e : walk) take(e, push);
      supply[s] -= push;
      demand[t] -= push;
      out.paths.push_back({s, walk, push});
    }
  }
  return out;
}

}  // namespace trlab
