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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trlab {

// A group element in canonical form. The coordinate layout is owned by the
// Group that produced it:
//   Z^k        k integers
//   Z_m^k      k residues in [0, m)
//   Heis       (x, y, z) with (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x*y')
//   prod(...)  concatenation of the factors' coordinates
//   wreath     base position, then one (base, lamp) block per non-identity
//              lamp, blocks sorted lexicographically by base coordinates
// Equality of elements is equality of coordinates.
struct Element {
  std::vector<std::int64_t> coords;

  Element() = default;
  explicit Element(std::vector<std::int64_t> c) : coords(std::move(c)) {}

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element& a, const Element& b) {
    return a.coords <=> b.coords;
  }
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

// Symmetric generating set with stable labels. inverse_index(i) is the index
// of the inverse of generator i (possibly i itself for involutions).
class GeneratingSet {
 public:
  GeneratingSet() = default;
  GeneratingSet(std::vector<Element> elements, std::vector<std::string> labels,
                std::vector<std::size_t> inverse_index);

  std::size_t size() const { return elements_.size(); }
  const Element& element(std::size_t i) const { return elements_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::size_t inverse_index(std::size_t i) const { return inverse_.at(i); }
  std::optional<std::size_t> find_label(std::string_view label) const;
  std::optional<std::size_t> find_element(const Element& e) const;
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<Element> elements_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> inverse_;
};

// Lamp configuration and lamplighter position of a wreath element.
struct WreathParts {
  std::vector<std::pair<Element, Element>> lamps;  // (base position, lamp value)
  Element position;
};

// An immutable finitely generated group with its standard symmetric
// generating set. Copies share state.
//
// Wreath products H' wr H use the convention
//   (f1, p1)(f2, p2) = (f2 . tau_{p2} f1, p2 p1),   (tau_p f)(x) = f(p^-1 x),
// so that left multiplication by a lamp generator changes the lamp under
// the lamplighter, left multiplication by (0, h) moves the lamplighter
// alone, and right multiplication by (0, h) moves the lamplighter together
// with every lamp. Cayley edges are gamma -> s^-1 gamma, hence a walk in the
// Cayley graph is the usual lamplighter walk. This is the opposite group of
// the textbook formula (f1 . tau_{p1} f2, p1 p2); word lengths agree but
// element-level products are reversed.
class Group {
 public:
  enum class Kind { kFreeAbelian, kCyclic, kProduct, kHeisenberg, kWreath };

  static Group free_abelian(int rank);
  static Group cyclic(std::int64_t modulus, int rank = 1);
  static Group heisenberg();
  static Group product(std::vector<Group> factors);
  static Group wreath(const Group& lamp, const Group& base);

  // Grammar (whitespace ignored):
  //   group := "Z" ["^" k] | "Z_" m ["^" k] | "Heis"
  //          | "prod(" group {"," group} ")" | "wreath(" lamp "," base ")"
  // Wreath factors and product factors may not themselves be wreath products.
  static Group parse(std::string_view spec);

  Kind kind() const;
  const std::string& spec() const;
  friend bool operator==(const Group& a, const Group& b) { return a.spec() == b.spec(); }

  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element invert(const Element& a) const;
  Element power(const Element& a, std::int64_t n) const;
  // True iff e is a canonical element of this group.
  bool contains(const Element& e) const;
  const GeneratingSet& generators() const;

  std::string format(const Element& e) const;
  Element parse_element(std::string_view text) const;

  bool is_abelian() const;
  std::optional<std::int64_t> order() const;
  bool is_finite() const { return order().has_value(); }
  // Every element of a finite group, in a fixed order.
  std::vector<Element> enumerate() const;

  int rank() const;              // Z^k and Z_m^k
  std::int64_t modulus() const;  // Z_m^k
  const std::vector<Group>& factors() const;
  const Group& lamp_group() const;
  const Group& base_group() const;

  // Exact word length when a closed form (or a small exact search) is
  // available; nullopt otherwise (callers fall back to BFS).
  std::optional<std::int64_t> word_length(const Element& e) const;
  // A geodesic word g_{w0} g_{w1} ... = e, as generator indices. Available
  // for Z^k, Z_m^k, products of those, and short Heisenberg elements.
  std::vector<std::size_t> geodesic_word(const Element& e) const;

  Element wreath_element(const std::map<Element, Element>& lamps,
                         const Element& position) const;
  WreathParts wreath_parts(const Element& e) const;

  // Internal representation; defined in group.cpp.
  struct Node;
  explicit Group(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const { return *node_; }

 private:
  std::shared_ptr<const Node> node_;
};

// Length of a shortest walk from `start` to `end` in the Cayley graph of
// `base` (right-multiplication metric) that visits every point of `stops`.
// Exact for rank-1 free abelian bases and for at most 16 stops; nullopt
// otherwise.
std::optional<std::int64_t> covering_walk_length(const Group& base, const Element& start,
                                                 const std::vector<Element>& stops,
                                                 const Element& end);

}  // namespace trlab
