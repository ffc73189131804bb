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
#include <set>

#include "trlab/errors.hpp"
#include "trlab/transport.hpp"

namespace trlab {

namespace {

Rational binomial(std::int64_t n, std::int64_t k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

Rational rpow(std::int64_t base, std::int64_t exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return Rational(r);
}

// Builds a path as a list of left factors applied to a wreath element,
// tracking the lamplighter position and the lamp values it changes.
class Router {
 public:
  Router(const Group& w, Element start) : w_(w), base_(w.base_group()), lamp_(w.lamp_group()), x_(std::move(start)) {
    cursor_ = w_.wreath_parts(x_).position;
  }

  void walk_to(const Element& q) {
    Element diff = base_.multiply(base_.invert(cursor_), q);
    for (std::size_t g : base_.geodesic_word(diff)) {
      apply(w_.wreath_element({}, base_.generators().element(g)));
    }
    cursor_ = q;
  }

  // Right-multiplies the lamp under the lamplighter by `by`.
  void toggle(const Element& by) {
    for (std::size_t g : lamp_.geodesic_word(by)) {
      apply(w_.wreath_element({{base_.identity(), lamp_.generators().element(g)}}, base_.identity()));
    }
  }

  const Element& current() const { return x_; }
  const std::vector<Element>& factors() const { return factors_; }

 private:
  void apply(const Element& left) {
    x_ = w_.multiply(left, x_);
    factors_.push_back(left);
  }

  const Group& w_;
  const Group& base_;
  const Group& lamp_;
  Element x_;
  Element cursor_;
  std::vector<Element> factors_;
};

struct ElementPath {
  Element source;
  std::vector<Element> factors;
  Element target;
  int lit = 0;
};

Element lamp_at(const WreathParts& parts, const Element& where, const Group& lamp) {
  for (const auto& [p, v] : parts.lamps) {
    if (p == where) return v;
  }
  return lamp.identity();
}

std::vector<Element> shifted(const Group& base, const std::vector<Element>& pts, const Element& by) {
  std::vector<Element> out;
  for (const Element& p : pts) out.push_back(base.multiply(p, by));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

WreathPattern build_wreath_pattern(const Group& group, int n, const Element& z, int inner, std::size_t vertex_budget) {
  if (group.kind() != Group::Kind::kWreath) throw UsageError("build_wreath_pattern needs a wreath product");
  auto gen = group.generators().find_element(z);
  if (!gen) throw UsageError("build_wreath_pattern: z must be a generator");
  FolnerSet F = wreath_folner(group, n, inner);
  const WreathShape& shape = *F.wreath_shape();
  const Group& base = group.base_group();
  const Group& lamp = group.lamp_group();

  Measure xi = uniform_measure(F, 1'000'000);
  Measure target = vee(xi);
  Measure source = act(target, z, Action::kRho);
  const Rational w = xi.atoms().begin()->second;

  WreathBound rep;
  rep.cells = static_cast<std::int64_t>(shape.base_box.size());
  rep.c = static_cast<std::int64_t>(shape.lamp_values.size());
  rep.d = shape.base_diameter;
  rep.k = shape.lamp_diameter;
  WreathParts zp = group.wreath_parts(z);
  rep.base_move = zp.lamps.empty();

  std::vector<ElementPath> paths;
  if (rep.base_move) {
    const Element& h = zp.position;
    const std::vector<Element>& A = shape.base_box;
    std::vector<Element> Ah = shifted(base, A, h);
    std::vector<Element> vac, fresh;
    std::set_difference(A.begin(), A.end(), Ah.begin(), Ah.end(), std::back_inserter(vac));
    std::set_difference(Ah.begin(), Ah.end(), A.begin(), A.end(), std::back_inserter(fresh));
    rep.boundary = static_cast<std::int64_t>(vac.size());
    // phi: translation by n h when it lines the two strips up, else sorted order.
    Element jump = base.power(h, n);
    std::vector<Element> image = shifted(base, vac, jump);
    std::map<Element, Element> phi;
    for (std::size_t i = 0; i < vac.size(); ++i) {
      phi.emplace(vac[i], image == fresh ? base.multiply(vac[i], jump) : fresh[i]);
    }
    for (const auto& [y, m] : source.atoms()) {
      WreathParts parts = group.wreath_parts(y);
      const Element& m0 = parts.position;
      std::vector<std::pair<Element, Element>> lit;  // (position, value), lexicographic
      for (const Element& a : vac) {
        Element p = base.multiply(m0, a);
        Element v = lamp_at(parts, p, lamp);
        if (v != lamp.identity()) lit.emplace_back(p, v);
      }
      Router r(group, y);
      for (const auto& [p, v] : lit) {
        r.walk_to(p);
        r.toggle(lamp.invert(v));
      }
      for (auto it = lit.rbegin(); it != lit.rend(); ++it) {
        Element rel = base.multiply(base.invert(m0), it->first);
        r.walk_to(base.multiply(m0, phi.at(rel)));
        r.toggle(it->second);
      }
      r.walk_to(base.multiply(m0, h));
      paths.push_back({y, r.factors(), r.current(), static_cast<int>(lit.size())});
    }
    const std::int64_t N = rep.boundary;
    for (std::int64_t i = 0; i <= N; ++i) {
      LampCountRow row;
      row.lit = static_cast<int>(i);
      row.count = rpow(rep.c, rep.cells - N) * rpow(rep.c - 1, i) * binomial(N, i);
      row.cap = 2 * i * (rep.d + rep.k) + rep.d;
      row.enumerated = 0;
      rep.rows.push_back(row);
    }
    rep.bound = Rational(2 * N * (rep.d + rep.k) + rep.d * rep.c) / Rational(rep.cells * rep.c);
    rep.stated_all_off = Rational(N) / (Rational(rep.cells) * rpow(rep.c, N));
  } else {
    // Lamp generator: only configurations whose origin lamp leaves A' move.
    const Element& a = zp.lamps.front().second;
    std::set<Element> tv, sv;
    for (const Element& v : shape.lamp_values) tv.insert(lamp.invert(v));
    for (const Element& u : tv) sv.insert(lamp.multiply(lamp.invert(a), u));
    std::vector<Element> esc, holes;
    std::set_difference(sv.begin(), sv.end(), tv.begin(), tv.end(), std::back_inserter(esc));
    std::set_difference(tv.begin(), tv.end(), sv.begin(), sv.end(), std::back_inserter(holes));
    std::map<Element, Element> psi;
    for (std::size_t i = 0; i < esc.size(); ++i) psi.emplace(esc[i], holes[i]);
    rep.boundary = static_cast<std::int64_t>(esc.size());
    for (const auto& [y, m] : source.atoms()) {
      if (target.mass(y) != 0) {
        paths.push_back({y, {}, y, 0});
        continue;
      }
      WreathParts parts = group.wreath_parts(y);
      Element v = lamp_at(parts, base.identity(), lamp);
      Router r(group, y);
      r.walk_to(base.identity());
      r.toggle(lamp.multiply(lamp.invert(v), psi.at(v)));
      r.walk_to(parts.position);
      paths.push_back({y, r.factors(), r.current(), 1});
    }
    for (int i = 0; i <= 1; ++i) {
      LampCountRow row;
      row.lit = i;
      row.cap = i == 0 ? 0 : 2 * (rep.d + rep.k);
      row.count = 0;
      row.enumerated = 0;
      rep.rows.push_back(row);
    }
    rep.bound = Rational(2 * (rep.d + rep.k) * rep.boundary) / Rational(rep.cells * rep.c);
    rep.stated_all_off = 0;
  }

  // Ball containing every vertex of every path.
  int radius = 0;
  for (const ElementPath& p : paths) {
    Element x = p.source;
    for (std::size_t j = 0; j <= p.factors.size(); ++j) {
      if (j > 0) x = group.multiply(p.factors[j - 1], x);
      auto len = group.word_length(x);
      if (!len) throw ResourceError("build_wreath_pattern: no exact word length for " + group.format(x));
      radius = std::max<int>(radius, static_cast<int>(*len));
    }
  }
  auto ball = std::make_shared<const BallIndex>(group, group.identity(), radius, vertex_budget);

  WreathPattern out{ball, {}, source, target, rep};
  Rational all_off = 0;
  for (const ElementPath& p : paths) {
    if (target.mass(p.target) != w) throw std::logic_error("wreath routing left the target set");
    PatternPath path{ball->index_of(p.source), {}, w};
    std::size_t at = path.source;
    for (const Element& left : p.factors) {
      auto s = group.generators().find_element(group.invert(left));
      auto e = ball->edge_from(at, *s);
      if (!e) throw std::logic_error("wreath routing step leaves the ball");
      path.edges.push_back(*e);
      at = ball->edge(*e).dst;
    }
    auto len = static_cast<std::int64_t>(path.edges.size());
    LampCountRow& row = out.report.rows.at(static_cast<std::size_t>(p.lit));
    row.longest = std::max(row.longest, len);
    row.enumerated += 1;
    if (len > row.cap) out.report.caps_hold = false;
    if (p.lit == 0 && rep.base_move) all_off += w * len;
    out.pattern.paths.push_back(std::move(path));
  }
  out.report.exact_all_off = all_off;
  out.report.cost = total_mass(flatten(out.pattern));
  return out;
}

}  // namespace trlab
