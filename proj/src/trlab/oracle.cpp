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

namespace {

// Dense two-phase simplex over the rationals for
//   minimize c.x  subject to  A x = b, x >= 0,  with b >= 0.
// Bland's rule (smallest eligible index) prevents cycling.
class Simplex {
 public:
  Simplex(std::vector<std::vector<Rational>> A, std::vector<Rational> b, std::vector<Rational> c)
      : m_(A.size()), n_(c.size()), c_(std::move(c)) {
    const std::size_t width = n_ + m_ + 1;
    T_.assign(m_, std::vector<Rational>(width, Rational(0)));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) T_[i][j] = A[i][j];
      T_[i][n_ + i] = 1;
      T_[i][width - 1] = b[i];
      basis_[i] = n_ + i;
    }
  }

  std::vector<Rational> solve() {
    // Phase 1: minimize the sum of the artificials.
    std::vector<Rational> cost1(n_ + m_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) cost1[n_ + i] = 1;
    run(cost1, n_ + m_);
    if (objective_value(cost1) != 0) throw DomainError("coupling LP is infeasible");
    drive_out_artificials();
    std::vector<Rational> cost2(c_);
    cost2.resize(n_ + m_, Rational(0));
    run(cost2, n_);
    std::vector<Rational> x(n_, Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = T_[i].back();
    }
    return x;
  }

 private:
  Rational objective_value(const std::vector<Rational>& cost) const {
    Rational z = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i) z += cost[basis_[i]] * T_[i].back();
    return z;
  }

  void pivot(std::size_t row, std::size_t col) {
    auto& r = T_[row];
    Rational p = r[col];
    for (auto& x : r) x /= p;
    for (std::size_t i = 0; i < T_.size(); ++i) {
      if (i == row || T_[i][col] == 0) continue;
      Rational f = T_[i][col];
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (r[j] != 0) T_[i][j] -= f * r[j];
      }
    }
    basis_[row] = col;
  }

  // Minimizes cost over columns < allowed.
  void run(const std::vector<Rational>& cost, std::size_t allowed) {
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < allowed && !enter; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        Rational reduced = cost[j];
        for (std::size_t i = 0; i < basis_.size(); ++i) {
          if (T_[i][j] != 0) reduced -= cost[basis_[i]] * T_[i][j];
        }
        if (reduced < 0) enter = j;
      }
      if (!enter) return;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < T_.size(); ++i) {
        if (T_[i][*enter] <= 0) continue;
        Rational ratio = T_[i].back() / T_[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) throw DomainError("coupling LP is unbounded");
      pivot(*leave, *enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < T_.size();) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < n_ && !col; ++j) {
        if (T_[i][j] != 0) col = j;
      }
      if (col) {
        pivot(i, *col);
        ++i;
      } else {
        // Redundant constraint.
        T_.erase(T_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  std::size_t m_, n_;
  std::vector<Rational> c_;
  std::vector<std::vector<Rational>> T_;
  std::vector<std::size_t> basis_;
};

}  // namespace

CouplingResult trc_coupling_oracle(const Measure& xi, const Measure& phi, const BallIndex& ball,
                                   std::size_t atom_budget) {
  if (!(xi.group() == phi.group()) || !(xi.group() == ball.group())) {
    throw UsageError("coupling oracle: measures and ball live on different groups");
  }
  if (!xi.is_nonnegative() || !phi.is_nonnegative()) throw DomainError("coupling oracle needs nonnegative measures");
  if (xi.total_mass() != phi.total_mass()) throw DomainError("coupling oracle: total masses differ");
  if (xi.size() > atom_budget || phi.size() > atom_budget) {
    throw ResourceError("coupling oracle: more than " + std::to_string(atom_budget) + " atoms per side");
  }
  std::vector<std::pair<Element, Rational>> xs(xi.atoms().begin(), xi.atoms().end());
  std::vector<std::pair<Element, Rational>> ys(phi.atoms().begin(), phi.atoms().end());
  const std::size_t p = xs.size(), q = ys.size();
  std::vector<std::size_t> vy(q);
  for (std::size_t j = 0; j < q; ++j) vy[j] = ball.index_of(ys[j].first);

  std::vector<Rational> c(p * q);
  for (std::size_t i = 0; i < p; ++i) {
    auto dist = ball.distances_from(ball.index_of(xs[i].first));
    for (std::size_t j = 0; j < q; ++j) {
      if (dist[vy[j]] < 0) throw DomainError("coupling oracle: points are not connected inside the ball");
      c[i * q + j] = dist[vy[j]];
    }
  }
  std::vector<std::vector<Rational>> A(p + q, std::vector<Rational>(p * q, Rational(0)));
  std::vector<Rational> b(p + q);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      A[i][i * q + j] = 1;
      A[p + j][i * q + j] = 1;
    }
    b[i] = xs[i].second;
  }
  for (std::size_t j = 0; j < q; ++j) b[p + j] = ys[j].second;

  CouplingResult out;
  out.cost = 0;
  if (p == 0) return out;
  std::vector<Rational> x = Simplex(std::move(A), std::move(b), c).solve();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const Rational& m = x[i * q + j];
      if (m == 0) continue;
      out.coupling.emplace(std::make_pair(xs[i].first, ys[j].first), m);
      out.cost += m * c[i * q + j];
    }
  }
  return out;
}

}  // namespace trlab
