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

#include "trlab/folner.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "trlab/errors.hpp"

namespace trlab {

namespace {

constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 62;

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kMaxSize / base) throw ResourceError("Folner set size overflows 2^62");
    r *= base;
  }
  return r;
}

std::vector<Element> box_points(int rank, int n) {
  std::vector<Element> out;
  std::vector<std::int64_t> c(static_cast<std::size_t>(rank), 0);
  std::uint64_t total = checked_pow(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rank));
  if (total > 50'000'000) throw ResourceError("box has more than 5e7 points");
  out.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    out.emplace_back(c);
    for (std::size_t j = c.size(); j-- > 0;) {
      if (++c[j] < n) break;
      c[j] = 0;
    }
  }
  return out;  // lexicographic, hence sorted
}

bool sorted_contains(const std::vector<Element>& v, const Element& x) {
  return std::binary_search(v.begin(), v.end(), x);
}

std::int64_t max_pairwise(const Group& g, const std::vector<Element>& pts) {
  std::int64_t best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      auto d = g.word_length(g.multiply(g.invert(pts[i]), pts[j]));
      if (!d) throw DomainError("diameter: no exact word length in " + g.spec());
      best = std::max(best, *d);
    }
  }
  return best;
}

// Abelian box: the l1 diameter splits over coordinates.
std::int64_t box_diameter(const Group& g, const std::vector<Element>& pts) {
  if (pts.size() <= 2000) return max_pairwise(g, pts);
  std::int64_t d = 0;
  for (std::size_t j = 0; j < pts.front().coords.size(); ++j) {
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [j](const Element& a, const Element& b) {
      return a.coords[j] < b.coords[j];
    });
    d += hi->coords[j] - lo->coords[j];
  }
  return d;
}

// max over p, q in A of the shortest walk p -> q visiting all of A.
std::optional<std::int64_t> max_covering_walk(const Group& base, const std::vector<Element>& A) {
  const std::size_t m = A.size();
  if (base.kind() == Group::Kind::kFreeAbelian && base.rank() == 1) {
    std::int64_t best = 0;
    for (const Element& p : A) {
      for (const Element& q : A) best = std::max(best, *covering_walk_length(base, p, A, q));
    }
    return best;
  }
  if (m > 16) return std::nullopt;
  std::vector<std::int64_t> dist(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      auto d = base.word_length(base.multiply(base.invert(A[i]), A[j]));
      if (!d) return std::nullopt;
      dist[i * m + j] = *d;
    }
  }
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<std::int64_t> dp((full + 1) * m);
  std::int64_t best = 0;
  for (std::size_t start = 0; start < m; ++start) {
    std::fill(dp.begin(), dp.end(), kInf);
    dp[(std::size_t{1} << start) * m + start] = 0;
    for (std::size_t mask = 1; mask <= full; ++mask) {
      if (!(mask >> start & 1)) continue;
      for (std::size_t i = 0; i < m; ++i) {
        std::int64_t cur = dp[mask * m + i];
        if (cur >= kInf) continue;
        const std::int64_t* row = &dist[i * m];
        for (std::size_t j = 0; j < m; ++j) {
          if (mask >> j & 1) continue;
          std::int64_t& slot = dp[(mask | (std::size_t{1} << j)) * m + j];
          slot = std::min(slot, cur + row[j]);
        }
      }
    }
    // Ending anywhere: the walk may finish by moving from the last stop to q.
    for (std::size_t q = 0; q < m; ++q) {
      std::int64_t shortest = kInf;
      for (std::size_t i = 0; i < m; ++i) shortest = std::min(shortest, dp[full * m + i] + dist[i * m + q]);
      best = std::max(best, shortest);
    }
  }
  return best;
}

}  // namespace

FolnerSet::FolnerSet(Group group, std::string label, std::uint64_t size,
                     std::function<bool(const Element&)> contains, std::function<void(const Visitor&)> enumerate,
                     std::int64_t diameter_lower, std::int64_t diameter_upper)
    : group_(std::move(group)),
      label_(std::move(label)),
      size_(size),
      contains_(std::move(contains)),
      enumerate_(std::move(enumerate)),
      diameter_lower_(diameter_lower),
      diameter_upper_(diameter_upper) {}

std::vector<Element> FolnerSet::elements(std::size_t budget) const {
  if (size_ > budget) {
    throw ResourceError("Folner set " + label_ + " has " + std::to_string(size_) + " elements, over the budget of " +
                        std::to_string(budget));
  }
  std::vector<Element> out;
  out.reserve(size_);
  for_each([&](const Element& x) { out.push_back(x); });
  std::sort(out.begin(), out.end());
  return out;
}

FolnerSet box_folner(const Group& group, int n) {
  if (group.kind() != Group::Kind::kFreeAbelian) throw UsageError("box_folner needs Z^k, got " + group.spec());
  if (n < 1) throw UsageError("box_folner needs n >= 1");
  auto pts = std::make_shared<const std::vector<Element>>(box_points(group.rank(), n));
  std::int64_t diam = box_diameter(group, *pts);
  return FolnerSet(
      group, "box(" + group.spec() + "," + std::to_string(n) + ")", pts->size(),
      [n](const Element& x) {
        return std::all_of(x.coords.begin(), x.coords.end(), [n](std::int64_t c) { return c >= 0 && c < n; });
      },
      [pts](const FolnerSet::Visitor& visit) {
        for (const Element& x : *pts) visit(x);
      },
      diam, diam);
}

FolnerSet wreath_folner(const Group& group, int n, int inner) {
  if (group.kind() != Group::Kind::kWreath) throw UsageError("wreath_folner needs a wreath product");
  const Group& base = group.base_group();
  const Group& lamp = group.lamp_group();
  if (!base.is_abelian() || base.kind() != Group::Kind::kFreeAbelian) {
    throw UsageError("wreath_folner: unsupported base group " + base.spec() + " (needs Z^k)");
  }
  if (n < 1) throw UsageError("wreath_folner needs n >= 1");
  WreathShape shape;
  shape.n = n;
  shape.base_box = box_points(base.rank(), n);
  if (lamp.is_finite()) {
    shape.lamp_values = lamp.enumerate();
    std::sort(shape.lamp_values.begin(), shape.lamp_values.end());
  } else if (lamp.kind() == Group::Kind::kFreeAbelian) {
    if (inner < 1) throw UsageError("wreath_folner: an infinite lamp group needs inner >= 1");
    shape.inner = inner;
    shape.lamp_values = box_points(lamp.rank(), inner);
  } else {
    throw UsageError("wreath_folner: unsupported lamp group " + lamp.spec());
  }
  shape.base_diameter = box_diameter(base, shape.base_box);
  shape.lamp_diameter = max_pairwise(lamp, shape.lamp_values);

  const std::uint64_t cells = shape.base_box.size();
  const std::uint64_t c = shape.lamp_values.size();
  std::uint64_t size = checked_pow(c, cells);
  if (size > kMaxSize / cells) throw ResourceError("Folner set size overflows 2^62");
  size *= cells;

  std::int64_t lower, upper;
  if (shape.lamp_diameter == 0) {
    lower = upper = shape.base_diameter;
  } else {
    const std::int64_t lamps = static_cast<std::int64_t>(cells) * shape.lamp_diameter;
    if (auto walk = max_covering_walk(base, shape.base_box)) {
      lower = upper = *walk + lamps;
    } else {
      // A box has a Hamiltonian snake path; reaching its start and leaving
      // its end costs at most one base diameter each.
      const std::int64_t snake = static_cast<std::int64_t>(cells) - 1;
      lower = std::max<std::int64_t>(snake, shape.base_diameter) + lamps;
      upper = snake + 2 * shape.base_diameter + lamps;
    }
  }

  auto sh = std::make_shared<const WreathShape>(shape);
  Group g = group;
  auto contains = [g, sh](const Element& x) {
    if (!g.contains(x)) return false;
    WreathParts parts = g.wreath_parts(x);
    if (!sorted_contains(sh->base_box, parts.position)) return false;
    for (const auto& [where, value] : parts.lamps) {
      if (!sorted_contains(sh->base_box, where) || !sorted_contains(sh->lamp_values, value)) return false;
    }
    return true;
  };
  auto enumerate = [g, sh](const FolnerSet::Visitor& visit) {
    const std::size_t cells = sh->base_box.size();
    const Element id = g.lamp_group().identity();
    std::vector<std::size_t> digit(cells, 0);
    while (true) {
      std::map<Element, Element> lamps;
      for (std::size_t j = 0; j < cells; ++j) {
        if (sh->lamp_values[digit[j]] != id) lamps.emplace(sh->base_box[j], sh->lamp_values[digit[j]]);
      }
      for (const Element& p : sh->base_box) visit(g.wreath_element(lamps, p));
      std::size_t j = 0;
      while (j < cells && ++digit[j] == sh->lamp_values.size()) digit[j++] = 0;
      if (j == cells) break;
    }
  };
  std::string label = "wreath_box(" + group.spec() + "," + std::to_string(n) +
                      (shape.inner ? "," + std::to_string(shape.inner) : "") + ")";
  FolnerSet F(group, label, size, contains, enumerate, lower, upper);
  F.set_wreath_shape(std::move(shape));
  return F;
}

namespace {

// Left multiplication by a wreath generator only touches the lamplighter
// (base move) or the lamp under it (lamp move), so escapes factor into a
// count over one coordinate times the free choices elsewhere.
std::optional<std::uint64_t> wreath_generator_escapes(const FolnerSet& F, const Element& gamma) {
  const auto& shape = F.wreath_shape();
  const Group& g = F.group();
  if (!shape || !g.generators().find_element(gamma)) return std::nullopt;
  const std::uint64_t cells = shape->base_box.size(), c = shape->lamp_values.size();
  WreathParts s = g.wreath_parts(gamma);
  if (s.lamps.empty()) {
    const Group& base = g.base_group();
    std::uint64_t out = 0;
    for (const Element& p : shape->base_box) out += !sorted_contains(shape->base_box, base.multiply(p, s.position));
    return out * checked_pow(c, cells);
  }
  const Group& lamp = g.lamp_group();
  const Element& a = s.lamps.front().second;
  std::uint64_t out = 0;
  for (const Element& v : shape->lamp_values) out += !sorted_contains(shape->lamp_values, lamp.multiply(v, a));
  return out * cells * checked_pow(c, cells - 1);
}

}  // namespace

std::uint64_t escape_count(const FolnerSet& F, const Element& gamma, bool left) {
  const Group& g = F.group();
  if (left) {
    if (auto fast = wreath_generator_escapes(F, gamma)) return *fast;
  }
  std::uint64_t count = 0;
  F.for_each([&](const Element& x) {
    if (!F.contains(left ? g.multiply(gamma, x) : g.multiply(x, gamma))) ++count;
  });
  return count;
}

Rational boundary_ratio(const FolnerSet& F, const Element& gamma, Side side) {
  std::uint64_t out = escape_count(F, gamma, side == Side::kLeft);
  Rational r(mpz_class(std::to_string(2 * out)), mpz_class(std::to_string(F.size())));
  r.canonicalize();
  return r;
}

ControlReport is_controlled(const std::vector<FolnerSet>& sets, const GeneratingSet& S, std::optional<Rational> cap) {
  if (sets.size() < 2) throw UsageError("is_controlled needs at least two sets");
  ControlReport rep;
  rep.K = 0;
  for (const FolnerSet& F : sets) {
    Rational worst = 0;
    for (const Element& s : S.elements()) worst = std::max(worst, boundary_ratio(F, s));
    rep.K_n.push_back(worst * F.diameter());
    rep.K_n_lower.push_back(worst * F.diameter_lower());
    rep.K = std::max(rep.K, rep.K_n.back());
  }
  rep.growing = true;
  for (std::size_t i = 1; i < rep.K_n.size(); ++i) rep.growing = rep.growing && rep.K_n_lower[i] > rep.K_n[i - 1];
  rep.controlled = !cap || rep.K <= *cap;
  return rep;
}

Measure uniform_measure(const FolnerSet& F, std::size_t budget) {
  if (F.size() == 0) throw DomainError("uniform measure of an empty set");
  Rational w(1, static_cast<unsigned long>(F.size()));
  Measure xi(F.group());
  for (const Element& x : F.elements(budget)) xi.add(x, w);
  return xi;
}

std::vector<Measure> conjugacy_class_measures(const Group& heisenberg, int count) {
  if (heisenberg.kind() != Group::Kind::kHeisenberg) throw UsageError("conjugacy_class_measures needs Heis");
  if (count < 1) throw UsageError("conjugacy_class_measures needs count >= 1");
  std::vector<Measure> out;
  for (std::int64_t j = 1; j <= count; ++j) out.push_back(Measure::dirac(heisenberg, Element({0, 0, j * j})));
  return out;
}

std::pair<Rational, Rational> inner_scale_ratios(const FolnerSet& lamp_set, const FolnerSet& base_set) {
  const Rational d = base_set.diameter(), k = lamp_set.diameter();
  const Rational a = static_cast<unsigned long>(base_set.size());
  const Rational a_inner = static_cast<unsigned long>(lamp_set.size());
  Rational first = 0, second = 0;
  for (const Element& z : lamp_set.group().generators().elements()) {
    Rational esc = static_cast<unsigned long>(escape_count(lamp_set, z));
    first = std::max(first, Rational(2 * (d + k) * esc / (a * a_inner)));
  }
  for (const Element& z : base_set.group().generators().elements()) {
    Rational esc = static_cast<unsigned long>(escape_count(base_set, z));
    second = std::max(second, Rational((2 * (d + k) * esc + d * a_inner) / (a * a_inner)));
  }
  return {first, second};
}

std::vector<InnerScaleRow> select_inner_scale(const std::vector<FolnerSet>& lamp_sets,
                                              const std::vector<FolnerSet>& base_sets, const Rational& threshold) {
  if (lamp_sets.empty()) throw UsageError("select_inner_scale needs at least one lamp set");
  std::vector<InnerScaleRow> rows;
  for (std::size_t n = 0; n < base_sets.size(); ++n) {
    InnerScaleRow row;
    row.n_index = n;
    for (std::size_t i = lamp_sets.size(); i-- > 0;) {
      auto [r1, r2] = inner_scale_ratios(lamp_sets[i], base_sets[n]);
      bool feasible = r1 <= threshold && r2 <= threshold;
      if (feasible || i == 0) {
        row.inner = feasible ? static_cast<int>(i) + 1 : 0;
        row.first_ratio = r1;
        row.second_ratio = r2;
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string folner_table_csv(const std::vector<FolnerSet>& sets, const std::vector<int>& ns) {
  if (sets.size() != ns.size()) throw UsageError("folner table: size mismatch");
  std::ostringstream out;
  if (sets.empty()) return "";
  const GeneratingSet& S = sets.front().group().generators();
  out << "n,size,diam,diam_exact";
  for (const auto& l : S.labels()) out << ",ratio_" << l;
  out << ",K_n\n";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const FolnerSet& F = sets[i];
    out << ns[i] << "," << F.size() << "," << F.diameter() << "," << (F.diameter_exact() ? "true" : "false");
    Rational worst = 0;
    for (const Element& s : S.elements()) {
      Rational r = boundary_ratio(F, s);
      worst = std::max(worst, r);
      out << "," << to_string(r);
    }
    out << "," << to_string(Rational(worst * F.diameter())) << "\n";
  }
  return out.str();
}

std::string folner_table_json(const std::vector<FolnerSet>& sets, const std::vector<int>& ns) {
  if (sets.size() != ns.size()) throw UsageError("folner table: size mismatch");
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const FolnerSet& F = sets[i];
    const GeneratingSet& S = F.group().generators();
    nlohmann::ordered_json row;
    row["n"] = ns[i];
    row["label"] = F.label();
    row["size"] = F.size();
    row["diam"] = F.diameter();
    row["diam_exact"] = F.diameter_exact();
    nlohmann::ordered_json ratios = nlohmann::ordered_json::object();
    Rational worst = 0;
    for (std::size_t s = 0; s < S.size(); ++s) {
      Rational r = boundary_ratio(F, S.element(s));
      worst = std::max(worst, r);
      ratios[S.label(s)] = to_string(r);
    }
    row["ratios"] = std::move(ratios);
    row["K_n"] = to_string(Rational(worst * F.diameter()));
    rows.push_back(std::move(row));
  }
  return rows.dump();
}

}  // namespace trlab
