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

#include "trlab/group.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "trlab/errors.hpp"

namespace trlab {

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ e.coords.size();
  for (std::int64_t c : e.coords) {
    std::uint64_t x = static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    x ^= x >> 31;
    x *= 0xbf58476d1ce4e5b9ULL;
    h ^= x;
  }
  return static_cast<std::size_t>(h);
}

GeneratingSet::GeneratingSet(std::vector<Element> elements, std::vector<std::string> labels,
                             std::vector<std::size_t> inverse_index)
    : elements_(std::move(elements)), labels_(std::move(labels)), inverse_(std::move(inverse_index)) {
  if (elements_.size() != labels_.size() || elements_.size() != inverse_.size()) {
    throw UsageError("generating set: inconsistent sizes");
  }
  for (std::size_t i = 0; i < inverse_.size(); ++i) {
    if (inverse_[i] >= inverse_.size() || inverse_[inverse_[i]] != i) {
      throw UsageError("generating set: inverse index is not an involution");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) throw UsageError("generating set: duplicate label " + labels_[i]);
    }
  }
}

std::optional<std::size_t> GeneratingSet::find_label(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> GeneratingSet::find_element(const Element& e) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] == e) return i;
  }
  return std::nullopt;
}

struct Group::Node {
  Kind kind = Kind::kFreeAbelian;
  int rank = 0;
  std::int64_t modulus = 0;
  std::vector<Group> factors;
  std::vector<std::shared_ptr<const Node>> factor_nodes;
  std::vector<std::size_t> offsets;  // product: start coordinate of each factor
  std::shared_ptr<const Node> lamp;
  std::shared_ptr<const Node> base;
  std::size_t dim = 0;  // coordinate count; for wreath the base dimension
  std::string spec;
  GeneratingSet gens;
};

namespace {

using Node = Group::Node;
using Coords = std::vector<std::int64_t>;
using CSpan = std::span<const std::int64_t>;

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Flat (non-wreath) group law on coordinate spans.
void flat_mul(const Node& n, CSpan a, CSpan b, std::int64_t* out) {
  switch (n.kind) {
    case Group::Kind::kFreeAbelian:
      for (std::size_t i = 0; i < n.dim; ++i) out[i] = a[i] + b[i];
      return;
    case Group::Kind::kCyclic:
      for (std::size_t i = 0; i < n.dim; ++i) out[i] = mod(a[i] + b[i], n.modulus);
      return;
    case Group::Kind::kHeisenberg: {
      std::int64_t x = a[0] + b[0], y = a[1] + b[1], z = a[2] + b[2] + a[0] * b[1];
      out[0] = x;
      out[1] = y;
      out[2] = z;
      return;
    }
    case Group::Kind::kProduct:
      for (std::size_t f = 0; f < n.factors.size(); ++f) {
        const Node& fn = *n.factor_nodes[f];
        std::size_t off = n.offsets[f];
        flat_mul(fn, a.subspan(off, fn.dim), b.subspan(off, fn.dim), out + off);
      }
      return;
    case Group::Kind::kWreath:
      break;
  }
  throw UsageError("flat_mul on a wreath product");
}

void flat_inv(const Node& n, CSpan a, std::int64_t* out) {
  switch (n.kind) {
    case Group::Kind::kFreeAbelian:
      for (std::size_t i = 0; i < n.dim; ++i) out[i] = -a[i];
      return;
    case Group::Kind::kCyclic:
      for (std::size_t i = 0; i < n.dim; ++i) out[i] = mod(-a[i], n.modulus);
      return;
    case Group::Kind::kHeisenberg: {
      std::int64_t x = a[0], y = a[1], z = a[2];
      out[0] = -x;
      out[1] = -y;
      out[2] = -z + x * y;
      return;
    }
    case Group::Kind::kProduct:
      for (std::size_t f = 0; f < n.factors.size(); ++f) {
        const Node& fn = *n.factor_nodes[f];
        flat_inv(fn, a.subspan(n.offsets[f], fn.dim), out + n.offsets[f]);
      }
      return;
    case Group::Kind::kWreath:
      break;
  }
  throw UsageError("flat_inv on a wreath product");
}

bool flat_valid(const Node& n, CSpan a) {
  if (a.size() != n.dim) return false;
  switch (n.kind) {
    case Group::Kind::kCyclic:
      return std::all_of(a.begin(), a.end(), [&](std::int64_t r) { return r >= 0 && r < n.modulus; });
    case Group::Kind::kProduct:
      for (std::size_t f = 0; f < n.factors.size(); ++f) {
        const Node& fn = *n.factor_nodes[f];
        if (!flat_valid(fn, a.subspan(n.offsets[f], fn.dim))) return false;
      }
      return true;
    default:
      return true;
  }
}

bool is_zero(CSpan a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t c) { return c == 0; });
}

// Wreath element as (sorted lamp blocks, position).
struct Unpacked {
  std::vector<std::pair<Coords, Coords>> lamps;
  Coords pos;
};

Unpacked unpack(const Node& w, const Element& e) {
  const std::size_t db = w.base->dim, dl = w.lamp->dim;
  Unpacked u;
  u.pos.assign(e.coords.begin(), e.coords.begin() + static_cast<std::ptrdiff_t>(db));
  for (std::size_t i = db; i < e.coords.size(); i += db + dl) {
    auto it = e.coords.begin() + static_cast<std::ptrdiff_t>(i);
    u.lamps.emplace_back(Coords(it, it + static_cast<std::ptrdiff_t>(db)),
                         Coords(it + static_cast<std::ptrdiff_t>(db), it + static_cast<std::ptrdiff_t>(db + dl)));
  }
  return u;
}

Element pack(const Node& w, std::map<Coords, Coords>&& lamps, Coords&& pos) {
  Coords out = std::move(pos);
  out.reserve(out.size() + lamps.size() * (w.base->dim + w.lamp->dim));
  for (auto& [where, value] : lamps) {
    if (is_zero(value)) continue;
    out.insert(out.end(), where.begin(), where.end());
    out.insert(out.end(), value.begin(), value.end());
  }
  return Element(std::move(out));
}

Element wreath_mul(const Node& w, const Element& x, const Element& y) {
  // x * y = (f_y . tau_{p_y} f_x, p_y p_x)
  const Node& B = *w.base;
  const Node& L = *w.lamp;
  Unpacked ux = unpack(w, x), uy = unpack(w, y);
  std::map<Coords, Coords> lamps;
  for (auto& [where, value] : uy.lamps) lamps.emplace(std::move(where), std::move(value));
  Coords t(B.dim), prod(L.dim);
  for (const auto& [where, value] : ux.lamps) {
    flat_mul(B, uy.pos, where, t.data());
    auto it = lamps.find(t);
    if (it == lamps.end()) {
      lamps.emplace(t, value);
    } else {
      flat_mul(L, it->second, value, prod.data());
      it->second = prod;
    }
  }
  Coords pos(B.dim);
  flat_mul(B, uy.pos, ux.pos, pos.data());
  return pack(w, std::move(lamps), std::move(pos));
}

Element wreath_inv(const Node& w, const Element& x) {
  // (f, p)^-1 = (tau_{p^-1} f^-1, p^-1)
  const Node& B = *w.base;
  const Node& L = *w.lamp;
  Unpacked u = unpack(w, x);
  Coords pinv(B.dim);
  flat_inv(B, u.pos, pinv.data());
  std::map<Coords, Coords> lamps;
  Coords t(B.dim), vinv(L.dim);
  for (const auto& [where, value] : u.lamps) {
    flat_mul(B, pinv, where, t.data());
    flat_inv(L, value, vinv.data());
    lamps.emplace(t, vinv);
  }
  return pack(w, std::move(lamps), std::move(pinv));
}

std::string format_coords(CSpan c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + ")";
}

std::string join_label(const std::string& prefix, const std::string& label) { return prefix + "." + label; }

GeneratingSet make_flat_generators(const Node& n) {
  std::vector<Element> els;
  std::vector<std::string> labels;
  std::vector<std::size_t> inv;
  auto unit = [&](std::size_t i, std::int64_t v) {
    Coords c(n.dim, 0);
    c[i] = v;
    return Element(std::move(c));
  };
  switch (n.kind) {
    case Group::Kind::kFreeAbelian:
      for (int i = 0; i < n.rank; ++i) {
        std::size_t k = els.size();
        els.push_back(unit(static_cast<std::size_t>(i), 1));
        els.push_back(unit(static_cast<std::size_t>(i), -1));
        labels.push_back("x" + std::to_string(i + 1));
        labels.push_back("x" + std::to_string(i + 1) + "^-1");
        inv.push_back(k + 1);
        inv.push_back(k);
      }
      break;
    case Group::Kind::kCyclic:
      for (int i = 0; i < n.rank; ++i) {
        std::size_t k = els.size();
        els.push_back(unit(static_cast<std::size_t>(i), 1));
        labels.push_back("c" + std::to_string(i + 1));
        if (n.modulus == 2) {
          inv.push_back(k);
        } else {
          els.push_back(unit(static_cast<std::size_t>(i), n.modulus - 1));
          labels.push_back("c" + std::to_string(i + 1) + "^-1");
          inv.push_back(k + 1);
          inv.push_back(k);
        }
      }
      break;
    case Group::Kind::kHeisenberg:
      els = {Element({1, 0, 0}), Element({-1, 0, 0}), Element({0, 1, 0}), Element({0, -1, 0})};
      labels = {"X", "X^-1", "Y", "Y^-1"};
      inv = {1, 0, 3, 2};
      break;
    case Group::Kind::kProduct:
      for (std::size_t f = 0; f < n.factors.size(); ++f) {
        const GeneratingSet& fg = n.factors[f].generators();
        std::size_t base = els.size();
        for (std::size_t i = 0; i < fg.size(); ++i) {
          Coords c(n.dim, 0);
          std::copy(fg.element(i).coords.begin(), fg.element(i).coords.end(),
                    c.begin() + static_cast<std::ptrdiff_t>(n.offsets[f]));
          els.emplace_back(std::move(c));
          labels.push_back(join_label(std::to_string(f + 1), fg.label(i)));
          inv.push_back(base + fg.inverse_index(i));
        }
      }
      break;
    case Group::Kind::kWreath:
      throw UsageError("flat generators requested for a wreath product");
  }
  return GeneratingSet(std::move(els), std::move(labels), std::move(inv));
}

// ---- mini-language parser -------------------------------------------------

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    }
  }

  Group parse_all() {
    Group g = parse_group();
    if (pos_ != s_.size()) fail("trailing input");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw UsageError("group spec '" + s_ + "': " + why + " at offset " + std::to_string(pos_));
  }
  bool accept(std::string_view tok) {
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  std::int64_t integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 9) fail("expected a positive integer");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  Group parse_group() {
    if (accept("prod(")) {
      std::vector<Group> fs{parse_group()};
      while (accept(",")) fs.push_back(parse_group());
      expect(")");
      return Group::product(std::move(fs));
    }
    if (accept("wreath(")) {
      Group lamp = parse_group();
      expect(",");
      Group base = parse_group();
      expect(")");
      return Group::wreath(lamp, base);
    }
    if (accept("Heis")) return Group::heisenberg();
    if (accept("Z_")) {
      std::int64_t m = integer();
      int k = accept("^") ? static_cast<int>(integer()) : 1;
      return Group::cyclic(m, k);
    }
    if (accept("Z")) {
      int k = accept("^") ? static_cast<int>(integer()) : 1;
      return Group::free_abelian(k);
    }
    fail("unknown group");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

class ElementParser {
 public:
  explicit ElementParser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    }
  }
  bool done() const { return pos_ == s_.size(); }
  bool accept(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool accept(std::string_view tok) {
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  Coords tuple() {
    expect('(');
    Coords c;
    if (accept(')')) return c;
    do {
      c.push_back(integer());
    } while (accept(','));
    expect(')');
    return c;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw UsageError("element '" + s_ + "': " + why);
  }

 private:
  std::int64_t integer() {
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (digits == pos_ || pos_ - digits > 18) fail("expected an integer");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  std::string s_;
  std::size_t pos_ = 0;
};

std::shared_ptr<Node> new_node(Group::Kind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  return n;
}

}  // namespace


Group Group::free_abelian(int rank) {
  if (rank < 1 || rank > 16) throw UsageError("Z^k needs 1 <= k <= 16");
  auto n = new_node(Kind::kFreeAbelian);
  n->rank = rank;
  n->dim = static_cast<std::size_t>(rank);
  n->spec = rank == 1 ? "Z" : "Z^" + std::to_string(rank);
  n->gens = make_flat_generators(*n);
  return Group(std::move(n));
}

Group Group::cyclic(std::int64_t modulus, int rank) {
  if (modulus < 2) throw UsageError("Z_m needs m >= 2");
  if (rank < 1 || rank > 16) throw UsageError("Z_m^k needs 1 <= k <= 16");
  auto n = new_node(Kind::kCyclic);
  n->rank = rank;
  n->modulus = modulus;
  n->dim = static_cast<std::size_t>(rank);
  n->spec = "Z_" + std::to_string(modulus) + (rank == 1 ? "" : "^" + std::to_string(rank));
  n->gens = make_flat_generators(*n);
  return Group(std::move(n));
}

Group Group::heisenberg() {
  auto n = new_node(Kind::kHeisenberg);
  n->dim = 3;
  n->spec = "Heis";
  n->gens = make_flat_generators(*n);
  return Group(std::move(n));
}

Group Group::product(std::vector<Group> factors) {
  if (factors.empty()) throw UsageError("prod() needs at least one factor");
  auto n = new_node(Kind::kProduct);
  n->spec = "prod(";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].kind() == Kind::kWreath) throw UsageError("wreath products cannot be product factors");
    n->offsets.push_back(n->dim);
    n->dim += factors[i].node().dim;
    n->factor_nodes.push_back(factors[i].node_);
    n->spec += (i ? "," : "") + factors[i].spec();
  }
  n->spec += ")";
  n->factors = std::move(factors);
  n->gens = make_flat_generators(*n);
  return Group(std::move(n));
}

Group Group::wreath(const Group& lamp, const Group& base) {
  if (lamp.kind() == Kind::kWreath || base.kind() == Kind::kWreath) {
    throw UsageError("nested wreath products are not supported");
  }
  auto n = new_node(Kind::kWreath);
  n->lamp = lamp.node_;
  n->base = base.node_;
  n->dim = base.node().dim;
  n->spec = "wreath(" + lamp.spec() + "," + base.spec() + ")";
  n->factors = {lamp, base};
  std::vector<Element> els;
  std::vector<std::string> labels;
  std::vector<std::size_t> inv;
  const std::size_t db = base.node().dim;
  const GeneratingSet& lg = lamp.generators();
  for (std::size_t i = 0; i < lg.size(); ++i) {
    Coords c(db, 0);
    c.insert(c.end(), db, 0);
    c.insert(c.end(), lg.element(i).coords.begin(), lg.element(i).coords.end());
    els.emplace_back(std::move(c));
    labels.push_back(join_label("a", lg.label(i)));
    inv.push_back(lg.inverse_index(i));
  }
  const GeneratingSet& bg = base.generators();
  const std::size_t off = els.size();
  for (std::size_t i = 0; i < bg.size(); ++i) {
    els.push_back(bg.element(i));
    labels.push_back(join_label("t", bg.label(i)));
    inv.push_back(off + bg.inverse_index(i));
  }
  n->gens = GeneratingSet(std::move(els), std::move(labels), std::move(inv));
  return Group(std::move(n));
}

Group Group::parse(std::string_view spec) { return SpecParser(spec).parse_all(); }

Group::Kind Group::kind() const { return node_->kind; }
const std::string& Group::spec() const { return node_->spec; }
const GeneratingSet& Group::generators() const { return node_->gens; }

Element Group::identity() const { return Element(Coords(node_->dim, 0)); }

bool Group::contains(const Element& e) const {
  const Node& n = *node_;
  if (n.kind != Kind::kWreath) return flat_valid(n, e.coords);
  const std::size_t db = n.base->dim, dl = n.lamp->dim;
  if (e.coords.size() < db || (e.coords.size() - db) % (db + dl) != 0) return false;
  if (!flat_valid(*n.base, CSpan(e.coords).subspan(0, db))) return false;
  const Coords* prev = nullptr;
  Unpacked u = unpack(n, e);
  for (const auto& [where, value] : u.lamps) {
    if (!flat_valid(*n.base, where) || !flat_valid(*n.lamp, value) || is_zero(value)) return false;
    if (prev && !(*prev < where)) return false;
    prev = &where;
  }
  return true;
}

Element Group::multiply(const Element& a, const Element& b) const {
  if (!contains(a) || !contains(b)) {
    throw UsageError("multiply: operand is not a canonical element of " + spec());
  }
  const Node& n = *node_;
  if (n.kind == Kind::kWreath) return wreath_mul(n, a, b);
  Coords out(n.dim);
  flat_mul(n, a.coords, b.coords, out.data());
  return Element(std::move(out));
}

Element Group::invert(const Element& a) const {
  if (!contains(a)) throw UsageError("invert: operand is not a canonical element of " + spec());
  const Node& n = *node_;
  if (n.kind == Kind::kWreath) return wreath_inv(n, a);
  Coords out(n.dim);
  flat_inv(n, a.coords, out.data());
  return Element(std::move(out));
}

Element Group::power(const Element& a, std::int64_t k) const {
  Element base = k < 0 ? invert(a) : a;
  std::uint64_t m = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  Element result = identity();
  while (m) {
    if (m & 1) result = multiply(result, base);
    m >>= 1;
    if (m) base = multiply(base, base);
  }
  return result;
}

std::string Group::format(const Element& e) const {
  const Node& n = *node_;
  if (n.kind != Kind::kWreath) return format_coords(e.coords);
  Unpacked u = unpack(n, e);
  std::string s = "[";
  for (std::size_t i = 0; i < u.lamps.size(); ++i) {
    if (i) s += ",";
    s += format_coords(u.lamps[i].first) + "->" + format_coords(u.lamps[i].second);
  }
  return s + "]@" + format_coords(u.pos);
}

Element Group::parse_element(std::string_view text) const {
  const Node& n = *node_;
  ElementParser p(text);
  Element result;
  if (n.kind != Kind::kWreath) {
    Coords c = p.tuple();
    if (c.size() != n.dim) p.fail("expected " + std::to_string(n.dim) + " coordinates");
    if (n.kind == Kind::kCyclic) {
      for (auto& r : c) r = mod(r, n.modulus);
    }
    result = Element(std::move(c));
    if (!contains(result)) p.fail("not an element of " + spec());
  } else {
    Group lamp(n.lamp), base(n.base);
    std::map<Element, Element> lamps;
    p.expect('[');
    if (!p.accept(']')) {
      do {
        Element where(p.tuple());
        if (!p.accept("->")) p.fail("expected '->'");
        Element value(p.tuple());
        if (!lamps.emplace(std::move(where), std::move(value)).second) p.fail("duplicate lamp position");
      } while (p.accept(','));
      p.expect(']');
    }
    p.expect('@');
    Element pos(p.tuple());
    result = wreath_element(lamps, pos);
  }
  if (!p.done()) p.fail("trailing input");
  return result;
}

bool Group::is_abelian() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kFreeAbelian:
    case Kind::kCyclic:
      return true;
    case Kind::kProduct:
      return std::all_of(n.factors.begin(), n.factors.end(), [](const Group& g) { return g.is_abelian(); });
    default:
      return false;
  }
}

std::optional<std::int64_t> Group::order() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kCyclic: {
      std::int64_t o = 1;
      for (int i = 0; i < n.rank; ++i) o *= n.modulus;
      return o;
    }
    case Kind::kProduct: {
      std::int64_t o = 1;
      for (const Group& f : n.factors) {
        auto fo = f.order();
        if (!fo) return std::nullopt;
        o *= *fo;
      }
      return o;
    }
    default:
      return std::nullopt;
  }
}

std::vector<Element> Group::enumerate() const {
  auto o = order();
  if (!o) throw DomainError("enumerate: " + spec() + " is infinite");
  if (*o > 1'000'000) throw ResourceError("enumerate: group order exceeds 10^6");
  const Node& n = *node_;
  std::vector<Element> out;
  if (n.kind == Kind::kCyclic) {
    Coords c(n.dim, 0);
    for (std::int64_t i = 0; i < *o; ++i) {
      out.emplace_back(c);
      for (std::size_t j = 0; j < n.dim; ++j) {
        if (++c[j] < n.modulus) break;
        c[j] = 0;
      }
    }
    return out;
  }
  // product of finite factors: odometer over factor enumerations
  std::vector<std::vector<Element>> parts;
  for (const Group& f : n.factors) parts.push_back(f.enumerate());
  std::vector<std::size_t> idx(parts.size(), 0);
  for (std::int64_t i = 0; i < *o; ++i) {
    Coords c;
    for (std::size_t f = 0; f < parts.size(); ++f) {
      const auto& pc = parts[f][idx[f]].coords;
      c.insert(c.end(), pc.begin(), pc.end());
    }
    out.emplace_back(std::move(c));
    for (std::size_t f = 0; f < parts.size(); ++f) {
      if (++idx[f] < parts[f].size()) break;
      idx[f] = 0;
    }
  }
  return out;
}

int Group::rank() const {
  if (node_->kind != Kind::kFreeAbelian && node_->kind != Kind::kCyclic) {
    throw UsageError("rank() is only defined for Z^k and Z_m^k");
  }
  return node_->rank;
}

std::int64_t Group::modulus() const {
  if (node_->kind != Kind::kCyclic) throw UsageError("modulus() is only defined for Z_m^k");
  return node_->modulus;
}

const std::vector<Group>& Group::factors() const { return node_->factors; }

const Group& Group::lamp_group() const {
  if (node_->kind != Kind::kWreath) throw UsageError(spec() + " is not a wreath product");
  return node_->factors[0];
}

const Group& Group::base_group() const {
  if (node_->kind != Kind::kWreath) throw UsageError(spec() + " is not a wreath product");
  return node_->factors[1];
}

namespace {

// Breadth-first search of short Heisenberg words (right multiplication).
std::optional<std::vector<std::size_t>> heisenberg_word(const Group& g, const Element& target,
                                                        int max_radius) {
  std::unordered_map<Element, std::pair<std::size_t, std::size_t>, ElementHash> parent;
  std::vector<Element> frontier{g.identity()};
  std::vector<Element> order{g.identity()};
  parent.emplace(g.identity(), std::make_pair(SIZE_MAX, SIZE_MAX));
  const GeneratingSet& S = g.generators();
  std::size_t head = 0;
  std::vector<int> depth{0};
  while (head < order.size()) {
    Element x = order[head];
    int d = depth[head];
    std::size_t xi = head++;
    if (x == target) {
      std::vector<std::size_t> word;
      Element cur = x;
      while (true) {
        auto [from, gen] = parent.at(cur);
        if (from == SIZE_MAX) break;
        word.push_back(gen);
        cur = order[from];
      }
      std::reverse(word.begin(), word.end());
      return word;
    }
    if (d == max_radius) continue;
    for (std::size_t s = 0; s < S.size(); ++s) {
      Element y = g.multiply(x, S.element(s));
      if (parent.emplace(y, std::make_pair(xi, s)).second) {
        order.push_back(y);
        depth.push_back(d + 1);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::int64_t> Group::word_length(const Element& e) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kFreeAbelian: {
      std::int64_t s = 0;
      for (auto c : e.coords) s += c < 0 ? -c : c;
      return s;
    }
    case Kind::kCyclic: {
      std::int64_t s = 0;
      for (auto c : e.coords) s += std::min(c, n.modulus - c);
      return s;
    }
    case Kind::kProduct: {
      std::int64_t s = 0;
      for (std::size_t f = 0; f < n.factors.size(); ++f) {
        auto first = e.coords.begin() + static_cast<std::ptrdiff_t>(n.offsets[f]);
        auto len = n.factors[f].word_length(
            Element(Coords(first, first + static_cast<std::ptrdiff_t>(n.factor_nodes[f]->dim))));
        if (!len) return std::nullopt;
        s += *len;
      }
      return s;
    }
    case Kind::kHeisenberg:
      return std::nullopt;
    case Kind::kWreath: {
      const Group& lamp = n.factors[0];
      const Group& base = n.factors[1];
      WreathParts parts = wreath_parts(e);
      std::int64_t toggles = 0;
      std::vector<Element> stops;
      for (const auto& [where, value] : parts.lamps) {
        auto len = lamp.word_length(value);
        if (!len) return std::nullopt;
        toggles += *len;
        stops.push_back(where);
      }
      auto walk = covering_walk_length(base, base.identity(), stops, parts.position);
      if (!walk) return std::nullopt;
      return *walk + toggles;
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> Group::geodesic_word(const Element& e) const {
  const Node& n = *node_;
  std::vector<std::size_t> word;
  switch (n.kind) {
    case Kind::kFreeAbelian:
      for (std::size_t i = 0; i < n.dim; ++i) {
        std::size_t g = 2 * i + (e.coords[i] < 0 ? 1 : 0);
        for (std::int64_t k = 0; k < (e.coords[i] < 0 ? -e.coords[i] : e.coords[i]); ++k) word.push_back(g);
      }
      return word;
    case Kind::kCyclic: {
      std::size_t per = n.modulus == 2 ? 1 : 2;
      for (std::size_t i = 0; i < n.dim; ++i) {
        std::int64_t r = e.coords[i];
        bool down = r > n.modulus - r;
        std::int64_t steps = down ? n.modulus - r : r;
        for (std::int64_t k = 0; k < steps; ++k) word.push_back(per * i + (down ? 1 : 0));
      }
      return word;
    }
    case Kind::kProduct: {
      std::size_t gen_offset = 0;
      for (std::size_t f = 0; f < n.factors.size(); ++f) {
        auto first = e.coords.begin() + static_cast<std::ptrdiff_t>(n.offsets[f]);
        Element part(Coords(first, first + static_cast<std::ptrdiff_t>(n.factor_nodes[f]->dim)));
        for (std::size_t g : n.factors[f].geodesic_word(part)) word.push_back(gen_offset + g);
        gen_offset += n.factors[f].generators().size();
      }
      return word;
    }
    case Kind::kHeisenberg: {
      auto w = heisenberg_word(*this, e, 12);
      if (!w) throw ResourceError("geodesic_word: Heisenberg element " + format(e) + " is beyond radius 12");
      return *w;
    }
    case Kind::kWreath:
      break;
  }
  throw UsageError("geodesic_word is not available for " + spec());
}

Element Group::wreath_element(const std::map<Element, Element>& lamps, const Element& position) const {
  const Node& n = *node_;
  if (n.kind != Kind::kWreath) throw UsageError(spec() + " is not a wreath product");
  if (!flat_valid(*n.base, position.coords)) throw UsageError("wreath_element: position is not in the base group");
  std::map<Coords, Coords> m;
  for (const auto& [where, value] : lamps) {
    if (!flat_valid(*n.base, where.coords)) throw UsageError("wreath_element: lamp position not in base group");
    if (!flat_valid(*n.lamp, value.coords)) throw UsageError("wreath_element: lamp value not in lamp group");
    m.emplace(where.coords, value.coords);
  }
  Coords pos = position.coords;
  return pack(n, std::move(m), std::move(pos));
}

WreathParts Group::wreath_parts(const Element& e) const {
  const Node& n = *node_;
  if (n.kind != Kind::kWreath) throw UsageError(spec() + " is not a wreath product");
  Unpacked u = unpack(n, e);
  WreathParts parts;
  parts.position = Element(std::move(u.pos));
  for (auto& [where, value] : u.lamps) parts.lamps.emplace_back(Element(std::move(where)), Element(std::move(value)));
  return parts;
}

std::optional<std::int64_t> covering_walk_length(const Group& base, const Element& start,
                                                 const std::vector<Element>& stops_in,
                                                 const Element& end) {
  std::vector<Element> stops = stops_in;
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  if (base.kind() == Group::Kind::kFreeAbelian && base.rank() == 1) {
    std::int64_t s = start.coords[0], t = end.coords[0];
    std::int64_t lo = std::min(s, t), hi = std::max(s, t);
    for (const auto& p : stops) {
      lo = std::min(lo, p.coords[0]);
      hi = std::max(hi, p.coords[0]);
    }
    return std::min((s - lo) + (hi - lo) + (hi - t), (hi - s) + (hi - lo) + (t - lo));
  }
  auto dist = [&](const Element& u, const Element& v) { return base.word_length(base.multiply(base.invert(u), v)); };
  if (stops.empty()) return dist(start, end);
  const std::size_t m = stops.size();
  if (m > 16) return std::nullopt;
  std::vector<std::int64_t> from_start(m), to_end(m), pair(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    auto a = dist(start, stops[i]);
    auto b = dist(stops[i], end);
    if (!a || !b) return std::nullopt;
    from_start[i] = *a;
    to_end[i] = *b;
    for (std::size_t j = 0; j < m; ++j) {
      auto c = dist(stops[i], stops[j]);
      if (!c) return std::nullopt;
      pair[i * m + j] = *c;
    }
  }
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<std::int64_t> dp((full + 1) * m, kInf);
  for (std::size_t i = 0; i < m; ++i) dp[(std::size_t{1} << i) * m + i] = from_start[i];
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t i = 0; i < m; ++i) {
      std::int64_t cur = dp[mask * m + i];
      if (cur >= kInf || !(mask >> i & 1)) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (mask >> j & 1) continue;
        std::size_t next = mask | (std::size_t{1} << j);
        std::int64_t cand = cur + pair[i * m + j];
        if (cand < dp[next * m + j]) dp[next * m + j] = cand;
      }
    }
  }
  std::int64_t best = kInf;
  for (std::size_t i = 0; i < m; ++i) best = std::min(best, dp[full * m + i] + to_end[i]);
  return best;
}

}  // namespace trlab
