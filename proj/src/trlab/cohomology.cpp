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

#include "trlab/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

#include "trlab/errors.hpp"

namespace trlab {

namespace {

Rational rational_pow(const Rational& x, unsigned long k) {
  Rational r = 1;
  for (unsigned long i = 0; i < k; ++i) r *= x;
  return r;
}

void require_size(const BallIndex& ball, std::size_t n, const char* what) {
  if (n != ball.num_vertices()) throw UsageError(std::string(what) + ": vertex function has wrong size");
}

}  // namespace

DomainFunction DomainFunction::full(std::vector<Rational> values) {
  DomainFunction f;
  f.valid.assign(values.size(), 1);
  f.values = std::move(values);
  return f;
}

std::size_t DomainFunction::domain_size() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), 1));
}

DomainFunction convolve(const BallIndex& ball, const Measure& xi, const DomainFunction& f) {
  require_size(ball, f.values.size(), "convolve");
  if (!(xi.group() == ball.group())) throw UsageError("convolve: kernel and ball live on different groups");
  const Group& g = ball.group();
  std::vector<std::pair<Element, Rational>> kernel;
  for (const auto& [x, w] : xi.atoms()) kernel.emplace_back(g.invert(x), w);

  DomainFunction out;
  out.values.assign(ball.num_vertices(), Rational(0));
  out.valid.assign(ball.num_vertices(), 0);
  std::size_t count = 0;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    Rational s = 0;
    bool ok = true;
    for (const auto& [ginv, w] : kernel) {
      auto u = ball.find(g.multiply(ginv, ball.vertex(v)));
      if (!u || !f.defined(*u)) {
        ok = false;
        break;
      }
      s += w * f.values[*u];
    }
    if (!ok) continue;
    out.values[v] = s;
    out.valid[v] = 1;
    ++count;
  }
  if (count == 0) throw DomainError("convolve: effective domain is empty; enlarge the ball");
  return out;
}

DomainFunction convolve(const BallIndex& ball, const Measure& xi, const std::vector<Rational>& f) {
  return convolve(ball, xi, DomainFunction::full(f));
}

DomainFunction directional_gradient(const BallIndex& ball, std::size_t gen, const DomainFunction& f) {
  require_size(ball, f.values.size(), "directional_gradient");
  if (gen >= ball.group().generators().size()) throw UsageError("directional_gradient: no such generator");
  DomainFunction out;
  out.values.assign(ball.num_vertices(), Rational(0));
  out.valid.assign(ball.num_vertices(), 0);
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    auto e = ball.edge_from(v, gen);
    if (!e || !f.defined(v)) continue;
    std::size_t u = ball.edge(*e).dst;
    if (!f.defined(u)) continue;
    out.values[v] = f.values[u] - f.values[v];
    out.valid[v] = 1;
  }
  return out;
}

DomainFunction grad_conv(const BallIndex& ball, std::size_t gen, const Measure& xi, const std::vector<Rational>& f) {
  const Group& g = ball.group();
  if (gen >= g.generators().size()) throw UsageError("grad_conv: no such generator");
  Measure kernel = convolve(Measure::dirac(g, g.generators().element(gen)), xi).plus(xi, Rational(-1));
  return convolve(ball, kernel, f);
}

DecayReport pointwise_decay_check(const BallIndex& ball, std::size_t gen, const Measure& xi,
                                  const std::vector<Rational>& f) {
  DomainFunction gc = grad_conv(ball, gen, xi, f);
  DecayReport r;
  r.l1_shift = l1_distance(act(xi, ball.group().generators().element(gen), Action::kLambda), xi);
  r.sup_f = 0;
  for (const Rational& x : f) r.sup_f = std::max(r.sup_f, Rational(abs(x)));
  r.rhs = r.l1_shift * r.sup_f;
  r.max_lhs = 0;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    if (!gc.defined(v)) continue;
    ++r.domain;
    Rational a = abs(gc.values[v]);
    r.max_lhs = std::max(r.max_lhs, a);
    if (a > r.rhs) r.holds = false;
  }
  return r;
}

namespace {

struct FlatEdge {
  Element x;  // source vertex of the pattern edge
  std::size_t gen;
  Rational mass;
};

std::vector<FlatEdge> flat_edges(const BallIndex& pattern_ball, const Pattern& pattern) {
  std::vector<FlatEdge> out;
  for (const auto& [e, w] : flatten(pattern)) {
    const Edge& a = pattern_ball.edge(e);
    out.push_back({pattern_ball.vertex(a.src), a.gen, w});
  }
  return out;
}

// Work-ball edge ids of the translates a.eta, or nullopt if one is missing.
std::optional<std::vector<std::size_t>> translate_edges(const BallIndex& work, const std::vector<FlatEdge>& flat,
                                                        const Element& eta) {
  const Group& g = work.group();
  std::vector<std::size_t> ids;
  ids.reserve(flat.size());
  for (const FlatEdge& a : flat) {
    auto v = work.find(g.multiply(a.x, eta));
    if (!v) return std::nullopt;
    auto e = work.edge_from(*v, a.gen);
    if (!e) return std::nullopt;
    ids.push_back(*e);
  }
  return ids;
}

}  // namespace

DomainFunction transport_operator(const BallIndex& work, const BallIndex& pattern_ball, const Pattern& pattern,
                                  const std::vector<Rational>& price) {
  if (!(work.group() == pattern_ball.group())) throw UsageError("transport_operator: balls on different groups");
  if (price.size() != work.num_edges()) throw UsageError("transport_operator: edge function has wrong size");
  auto flat = flat_edges(pattern_ball, pattern);
  DomainFunction out;
  out.values.assign(work.num_vertices(), Rational(0));
  out.valid.assign(work.num_vertices(), 0);
  for (std::size_t v = 0; v < work.num_vertices(); ++v) {
    auto ids = translate_edges(work, flat, work.vertex(v));
    if (!ids) continue;
    Rational s = 0;
    for (std::size_t k = 0; k < flat.size(); ++k) s += flat[k].mass * price[(*ids)[k]];
    out.values[v] = s;
    out.valid[v] = 1;
  }
  return out;
}

DomainFunction transport_operator(const BallIndex& work, std::size_t gen, const Measure& xi,
                                  const BallIndex& pattern_ball, const Pattern& pattern,
                                  const std::vector<Rational>& price) {
  const Group& g = pattern_ball.group();
  if (gen >= g.generators().size()) throw UsageError("transport_operator: no such generator");
  Measure target = vee(xi);
  Measure source = act(target, g.generators().element(gen), Action::kRho);
  auto [src, dst] = marginals(pattern_ball, pattern);
  if (!(src == source) || !(dst == target)) {
    throw DomainError("transport_operator: pattern marginals are not (rho_s xi^vee, xi^vee)");
  }
  return transport_operator(work, pattern_ball, pattern, price);
}

OperatorBoundReport operator_bound_check(const BallIndex& pattern_ball, const Pattern& pattern,
                                         std::optional<Rational> p, int trials, std::uint64_t seed, int margin,
                                         std::size_t vertex_budget) {
  if (p && *p < 1) throw DomainError("operator_bound_check: p must be at least 1");
  if (trials < 1) throw UsageError("operator_bound_check: trials must be positive");
  validate(pattern_ball, pattern);
  const Group& g = pattern_ball.group();
  if (!(pattern_ball.center() == g.identity())) throw UsageError("operator_bound_check: pattern ball must be centred at e");
  BallIndex work(g, g.identity(), pattern_ball.radius() + margin, vertex_budget);

  auto flat = flat_edges(pattern_ball, pattern);
  std::unordered_map<std::size_t, std::size_t> local;  // work edge -> price slot
  std::vector<std::vector<std::size_t>> rows;           // per eta: price slots of the translates
  for (std::size_t v = 0; v < work.num_vertices(); ++v) {
    auto ids = translate_edges(work, flat, work.vertex(v));
    if (!ids) continue;
    for (std::size_t& e : *ids) e = local.emplace(e, local.size()).first->second;
    rows.push_back(std::move(*ids));
  }

  OperatorBoundReport r;
  r.p = !p ? "inf" : (p->get_den() == 1 ? p->get_num().get_str() : to_string(*p));
  r.trials = trials;
  r.domain = rows.size();
  r.edges = local.size();
  r.flat_mass = 0;
  for (const FlatEdge& a : flat) r.flat_mass += a.mass;
  r.bound = Rational(static_cast<long>(g.generators().size())) * r.flat_mass;
  if (r.edges == 0) return r;

  const bool integral = p && p->get_den() == 1;
  const unsigned long k = integral ? p->get_num().get_ui() : 0;
  const double pd = p ? to_double(*p) : 0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-20, 20), den(1, 12);
  std::vector<Rational> price(r.edges);
  std::vector<Rational> image(rows.size());
  for (int t = 0; t < trials; ++t) {
    for (Rational& x : price) x = make_rational(num(rng), den(rng));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < flat.size(); ++j) s += flat[j].mass * price[rows[i][j]];
      image[i] = s;
    }
    double lhs, rhs;
    bool ok;
    if (!p) {
      Rational a = 0, b = 0;
      for (const Rational& x : image) a = std::max(a, Rational(abs(x)));
      for (const Rational& x : price) b = std::max(b, Rational(abs(x)));
      if (b == 0) continue;
      ok = a <= r.bound * b;
      lhs = to_double(a);
      rhs = to_double(b);
    } else if (integral) {
      Rational a = 0, b = 0;
      for (const Rational& x : image) a += rational_pow(abs(x), k);
      for (const Rational& x : price) b += rational_pow(abs(x), k);
      if (b == 0) continue;
      ok = a <= rational_pow(r.bound, k) * b;
      lhs = std::pow(to_double(a), 1.0 / pd);
      rhs = std::pow(to_double(b), 1.0 / pd);
    } else {
      double a = 0, b = 0;
      for (const Rational& x : image) a += std::pow(std::fabs(to_double(x)), pd);
      for (const Rational& x : price) b += std::pow(std::fabs(to_double(x)), pd);
      if (b == 0) continue;
      lhs = std::pow(a, 1.0 / pd);
      rhs = std::pow(b, 1.0 / pd);
      ok = lhs <= to_double(r.bound) * rhs * (1 + 1e-12);
    }
    r.max_ratio = std::max(r.max_ratio, lhs / rhs);
    if (!ok) ++r.violations;
  }
  return r;
}

std::vector<VanishingRow> vanishing_probe(const BallIndex& ball, const std::vector<std::pair<int, Measure>>& measures,
                                          const std::vector<Rational>& f, double p, std::optional<Rational> K) {
  require_size(ball, f.size(), "vanishing_probe");
  if (p < 1) throw DomainError("vanishing_probe: p must be at least 1");
  const std::size_t S = ball.group().generators().size();
  double grad = 0;
  for (const Rational& d : gradient(ball, f)) grad += std::pow(std::fabs(to_double(d)), p);
  grad = std::pow(grad, 1.0 / p);

  std::vector<VanishingRow> rows;
  for (const auto& [n, xi] : measures) {
    VanishingRow row;
    row.n = n;
    row.mass = xi.total_mass();
    row.gradient_norm = grad;
    if (K) row.bound = static_cast<double>(S) * to_double(*K) * grad;
    try {
      Rational top = 0, here = 0;
      bool here_known = true;
      const std::size_t e = ball.index_of(ball.group().identity());
      double sum = 0;
      std::size_t domain = ball.num_vertices();
      for (std::size_t s = 0; s < S; ++s) {
        DomainFunction gc = grad_conv(ball, s, xi, f);
        domain = std::min(domain, gc.domain_size());
        if (gc.defined(e)) {
          here = std::max(here, Rational(abs(gc.values[e])));
        } else {
          here_known = false;
        }
        for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
          if (!gc.defined(v)) continue;
          Rational a = abs(gc.values[v]);
          top = std::max(top, a);
          sum += std::pow(to_double(a), p);
        }
      }
      row.max_pointwise = top;
      if (here_known) row.at_identity = here;
      row.grad_conv_norm = std::pow(sum, 1.0 / p);
      row.domain = domain;
    } catch (const DomainError& e) {
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string vanishing_csv(const std::vector<VanishingRow>& rows) {
  std::ostringstream out;
  out << "n,mass,max_pointwise,at_identity,grad_conv_norm,gradient_norm,bound,domain,note\n";
  for (const VanishingRow& r : rows) {
    out << r.n << ',' << to_string(r.mass) << ',' << (r.max_pointwise ? to_string(*r.max_pointwise) : "") << ','
        << (r.at_identity ? to_string(*r.at_identity) : "") << ','
        << (r.grad_conv_norm ? format_double(*r.grad_conv_norm) : "") << ',' << format_double(r.gradient_norm) << ','
        << (r.bound ? format_double(*r.bound) : "") << ',' << r.domain << ',' << r.note << '\n';
  }
  return out.str();
}

}  // namespace trlab
