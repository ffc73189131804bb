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

#include "trlab/cayley.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include "json.hpp"

namespace trlab {

BallIndex::BallIndex(Group group, Element center, int radius, std::size_t vertex_budget)
    : group_(std::move(group)), center_(std::move(center)), radius_(radius) {
  if (radius < 0) throw UsageError("ball radius must be nonnegative");
  if (!group_.contains(center_)) throw UsageError("ball center is not an element of " + group_.spec());
  const GeneratingSet& S = group_.generators();
  std::vector<Element> inverses;
  for (std::size_t s = 0; s < S.size(); ++s) inverses.push_back(S.element(S.inverse_index(s)));

  auto budget_error = [&] {
    return ResourceError("ball of radius " + std::to_string(radius) + " in " + group_.spec() +
                         " exceeds the vertex budget of " + std::to_string(vertex_budget));
  };
  if (vertex_budget == 0) throw budget_error();
  vertices_.push_back(center_);
  dist_.push_back(0);
  index_.emplace(center_, 0);
  for (std::size_t head = 0; head < vertices_.size(); ++head) {
    if (dist_[head] == radius_) continue;
    for (std::size_t s = 0; s < S.size(); ++s) {
      Element y = group_.multiply(inverses[s], vertices_[head]);
      if (index_.contains(y)) continue;
      if (vertices_.size() >= vertex_budget) throw budget_error();
      index_.emplace(y, static_cast<std::uint32_t>(vertices_.size()));
      vertices_.push_back(std::move(y));
      dist_.push_back(dist_[head] + 1);
    }
  }

  // Second pass for the edges; vertices at the rim may have neighbours
  // outside the ball, which are dropped.
  std::vector<std::int64_t> slot(vertices_.size() * S.size(), -1);
  out_start_.assign(vertices_.size() + 1, 0);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    out_start_[v] = static_cast<std::uint32_t>(edges_.size());
    for (std::size_t s = 0; s < S.size(); ++s) {
      std::uint32_t dst;
      if (dist_[v] < radius_) {
        dst = index_.at(group_.multiply(inverses[s], vertices_[v]));
      } else {
        auto it = index_.find(group_.multiply(inverses[s], vertices_[v]));
        if (it == index_.end()) continue;
        dst = it->second;
      }
      slot[v * S.size() + s] = static_cast<std::int64_t>(edges_.size());
      edges_.push_back({static_cast<std::uint32_t>(v), dst, static_cast<std::uint32_t>(s)});
    }
  }
  out_start_[vertices_.size()] = static_cast<std::uint32_t>(edges_.size());
  out_ids_.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) out_ids_[e] = static_cast<std::uint32_t>(e);
  reverse_.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& a = edges_[e];
    std::int64_t r = slot[a.dst * S.size() + S.inverse_index(a.gen)];
    if (r < 0 || edges_[static_cast<std::size_t>(r)].dst != a.src) {
      throw std::logic_error("Cayley edge without reverse edge");
    }
    reverse_[e] = static_cast<std::uint32_t>(r);
  }
}

std::optional<std::size_t> BallIndex::find(const Element& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t BallIndex::index_of(const Element& e) const {
  auto v = find(e);
  if (!v) throw DomainError(group_.format(e) + " is not in the ball of radius " + std::to_string(radius_));
  return *v;
}

std::optional<std::size_t> BallIndex::edge_from(std::size_t v, std::size_t gen) const {
  for (std::uint32_t e : out_edges(v)) {
    if (edges_[e].gen == gen) return e;
    if (edges_[e].gen > gen) break;
  }
  return std::nullopt;
}

std::span<const std::uint32_t> BallIndex::out_edges(std::size_t v) const {
  return std::span<const std::uint32_t>(out_ids_.data() + out_start_[v], out_start_[v + 1] - out_start_[v]);
}

std::vector<std::int64_t> BallIndex::distances_from(std::size_t from) const {
  std::vector<std::int64_t> d(vertices_.size(), -1);
  std::deque<std::size_t> queue{from};
  d[from] = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::uint32_t e : out_edges(v)) {
      std::size_t w = edges_[e].dst;
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return d;
}

std::optional<std::vector<std::size_t>> BallIndex::shortest_path(std::size_t from, std::size_t to) const {
  std::vector<std::int64_t> via(vertices_.size(), -1);
  std::vector<bool> seen(vertices_.size(), false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty() && !seen[to]) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::uint32_t e : out_edges(v)) {
      std::size_t w = edges_[e].dst;
      if (!seen[w]) {
        seen[w] = true;
        via[w] = e;
        queue.push_back(w);
      }
    }
  }
  if (!seen[to]) return std::nullopt;
  std::vector<std::size_t> path;
  for (std::size_t v = to; v != from; v = edges_[static_cast<std::size_t>(via[v])].src) {
    path.push_back(static_cast<std::size_t>(via[v]));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::string BallIndex::to_json() const {
  nlohmann::ordered_json j;
  j["group"] = group_.spec();
  j["center"] = group_.format(center_);
  j["radius"] = radius_;
  auto& vs = j["vertices"] = nlohmann::ordered_json::array();
  for (const Element& v : vertices_) vs.push_back(group_.format(v));
  j["dist"] = dist_;
  auto& es = j["edges"] = nlohmann::ordered_json::array();
  for (const Edge& a : edges_) es.push_back({a.src, a.dst, group_.generators().label(a.gen)});
  return j.dump();
}

Distance graph_distance(const BallIndex& ball, const Element& x, const Element& y) {
  std::size_t vx = ball.index_of(x), vy = ball.index_of(y);
  bool exact = ball.dist(vx) + ball.dist(vy) <= ball.radius();
  std::int64_t d = ball.distances_from(vx)[vy];
  if (d < 0) throw DomainError("graph_distance: points are not connected inside the ball");
  return {d, exact};
}

}  // namespace trlab
