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

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "trlab/group.hpp"
#include "trlab/measure.hpp"
#include "trlab/rational.hpp"

namespace trlab {

// Layout of a lamplighter Folner set F = B x A: every lamp configuration
// supported on the base box A with values in lamp_values, and every
// lamplighter position in A.
struct WreathShape {
  int n = 0;
  int inner = 0;                     // 0 when the lamp group is finite
  std::vector<Element> base_box;     // A, sorted
  std::vector<Element> lamp_values;  // A' (all of H' if finite), sorted
  std::int64_t base_diameter = 0;    // d
  std::int64_t lamp_diameter = 0;    // k
};

// A finite subset of a group, given by a membership predicate and an
// enumerator so that large sets never have to be stored.
class FolnerSet {
 public:
  using Visitor = std::function<void(const Element&)>;

  FolnerSet(Group group, std::string label, std::uint64_t size, std::function<bool(const Element&)> contains,
            std::function<void(const Visitor&)> enumerate, std::int64_t diameter_lower,
            std::int64_t diameter_upper);

  const Group& group() const { return group_; }
  const std::string& label() const { return label_; }
  std::uint64_t size() const { return size_; }
  bool contains(const Element& x) const { return contains_(x); }
  void for_each(const Visitor& visit) const { enumerate_(visit); }
  // Materialized and sorted; ResourceError above `budget` elements.
  std::vector<Element> elements(std::size_t budget = 2'000'000) const;

  // Maximum pairwise word distance. Exact unless the set is too large for
  // the exact covering-walk search, in which case [lower, upper] brackets it
  // and diameter() reports the upper bound.
  std::int64_t diameter() const { return diameter_upper_; }
  std::int64_t diameter_lower() const { return diameter_lower_; }
  bool diameter_exact() const { return diameter_lower_ == diameter_upper_; }

  const std::optional<WreathShape>& wreath_shape() const { return wreath_; }
  void set_wreath_shape(WreathShape w) { wreath_ = std::move(w); }

 private:
  Group group_;
  std::string label_;
  std::uint64_t size_;
  std::function<bool(const Element&)> contains_;
  std::function<void(const Visitor&)> enumerate_;
  std::int64_t diameter_lower_;
  std::int64_t diameter_upper_;
  std::optional<WreathShape> wreath_;
};

// {0, ..., n-1}^k in Z^k.
FolnerSet box_folner(const Group& group, int n);

// B_n x A_n in H' wr Z^k: lamplighter in the box A_n, lamps supported on A_n
// with values in all of H' (finite H') or in the box A'_inner (H' = Z^j).
FolnerSet wreath_folner(const Group& group, int n, int inner = 0);

// Number of x in F with g x (left) or x g (right) outside F; the symmetric
// difference |gF ^ F| is twice this.
std::uint64_t escape_count(const FolnerSet& F, const Element& gamma, bool left = true);

enum class Side { kLeft, kRight };

// |gF ^ F| / |F|  or  |Fg ^ F| / |F|.
Rational boundary_ratio(const FolnerSet& F, const Element& gamma, Side side = Side::kLeft);

struct ControlReport {
  // K_n = max_s ratio(F_n, s) * diam(F_n), using the diameter upper bound;
  // the lower-bound variant is reported alongside.
  std::vector<Rational> K_n;
  std::vector<Rational> K_n_lower;
  Rational K;
  bool growing = false;     // K_n strictly increasing over the prefix
  bool controlled = false;  // K <= cap
};

ControlReport is_controlled(const std::vector<FolnerSet>& sets, const GeneratingSet& S,
                            std::optional<Rational> cap = std::nullopt);

// 1_F / |F|.
Measure uniform_measure(const FolnerSet& F, std::size_t budget = 2'000'000);

// delta_{c^(j^2)}, j = 1..count, for the central generator c = [X, Y] of the
// Heisenberg group. The squares make the word length 4j strictly increasing.
std::vector<Measure> conjugacy_class_measures(const Group& heisenberg, int count);

struct InnerScaleRow {
  std::size_t n_index = 0;
  int inner = 0;  // 1-based index into the lamp family; 0 when none is feasible
  Rational first_ratio;
  Rational second_ratio;
};

// The two-scale ratios for lamp set A' and base set A:
//   first  = max_{z in S_H'} 2(d + k)|D_z A'| / (|A| |A'|)
//   second = max_{z in S_H}  (2(d + k)|D_z A| + d|A'|) / (|A| |A'|)
// with d = diam A, k = diam A', D_z X = zX \ X.
std::pair<Rational, Rational> inner_scale_ratios(const FolnerSet& lamp_set, const FolnerSet& base_set);

// For each base set, the largest lamp index whose ratios are both at most
// `threshold`. Infeasible rows report inner = 0 with the ratios at index 1.
std::vector<InnerScaleRow> select_inner_scale(const std::vector<FolnerSet>& lamp_sets,
                                              const std::vector<FolnerSet>& base_sets,
                                              const Rational& threshold = Rational(2));

// One row per set: n,size,diam,diam_exact,ratio_<label>...,K_n
std::string folner_table_csv(const std::vector<FolnerSet>& sets, const std::vector<int>& ns);
std::string folner_table_json(const std::vector<FolnerSet>& sets, const std::vector<int>& ns);

}  // namespace trlab
