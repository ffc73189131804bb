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

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>

#include "trlab/cohomology.hpp"
#include "trlab/errors.hpp"

namespace trlab {

std::vector<double> mazur(const std::vector<double>& f, double p) {
  if (!(p > 1)) throw DomainError("mazur: p must exceed 1");
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double t = f[i];
    out[i] = t == 0 ? 0.0 : std::pow(std::fabs(t), p - 2) * t;
  }
  return out;
}

double p_dirichlet_energy(const BallIndex& ball, const std::vector<double>& f, double p) {
  if (p < 1) throw DomainError("p_dirichlet_energy: p must be at least 1");
  if (f.size() != ball.num_vertices()) throw UsageError("p_dirichlet_energy: vertex function has wrong size");
  double s = 0;
  for (const Edge& a : ball.edges()) s += std::pow(std::fabs(f[a.dst] - f[a.src]), p);
  return s;
}

double DirichletFunction::norm_p(double p) const {
  return p_dirichlet_energy(*ball, values, p) + std::pow(std::fabs(values[basepoint]), p);
}

double p_harmonic_residual(const BallIndex& ball, const std::vector<double>& h, double p) {
  std::vector<double> grad(ball.num_edges());
  for (std::size_t e = 0; e < ball.num_edges(); ++e) grad[e] = h[ball.edge(e).dst] - h[ball.edge(e).src];
  std::vector<double> div = divergence(ball, mazur(grad, p));
  double r = 0;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    if (ball.is_interior(v)) r = std::max(r, std::fabs(div[v]));
  }
  return r;
}

namespace {

class Solver {
 public:
  Solver(const BallIndex& ball, double p) : ball_(ball), p_(p), slot_(ball.num_vertices(), -1) {
    for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
      if (ball.is_interior(v)) {
        slot_[v] = static_cast<int>(interior_.size());
        interior_.push_back(v);
      }
    }
  }

  std::size_t unknowns() const { return interior_.size(); }

  double energy(const std::vector<double>& h) const { return p_dirichlet_energy(ball_, h, p_); }

  // Gradient of the energy in the interior unknowns.
  Eigen::VectorXd gradient(const std::vector<double>& h, double p) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(interior_.size()));
    for (const Edge& a : ball_.edges()) {
      double d = h[a.dst] - h[a.src];
      double phi = d == 0 ? 0.0 : p * std::pow(std::fabs(d), p - 2) * d;
      if (slot_[a.dst] >= 0) g[slot_[a.dst]] += phi;
      if (slot_[a.src] >= 0) g[slot_[a.src]] -= phi;
    }
    return g;
  }

  // Newton direction for the energy with exponent p, or empty on failure.
  Eigen::VectorXd newton_direction(const std::vector<double>& h, double p, const Eigen::VectorXd& g) const {
    const double floor = 1e-10;
    std::vector<Eigen::Triplet<double>> trip;
    for (const Edge& a : ball_.edges()) {
      double d = std::fabs(h[a.dst] - h[a.src]);
      if (p < 2) d = std::max(d, floor);
      double w = p * (p - 1) * (p == 2 ? 1.0 : std::pow(d, p - 2));
      int i = slot_[a.src], j = slot_[a.dst];
      if (i >= 0) trip.emplace_back(i, i, w);
      if (j >= 0) trip.emplace_back(j, j, w);
      if (i >= 0 && j >= 0) {
        trip.emplace_back(i, j, -w);
        trip.emplace_back(j, i, -w);
      }
    }
    const auto n = static_cast<Eigen::Index>(interior_.size());
    Eigen::SparseMatrix<double> H(n, n);
    H.setFromTriplets(trip.begin(), trip.end());
    double scale = 0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, H.coeff(i, i));
    for (double shift : {0.0, 1e-10 * scale, 1e-6 * scale}) {
      Eigen::SparseMatrix<double> M = H;
      if (shift > 0) {
        for (Eigen::Index i = 0; i < n; ++i) M.coeffRef(i, i) += shift;
      }
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(M);
      if (ldlt.info() != Eigen::Success) continue;
      Eigen::VectorXd d = ldlt.solve(-g);
      if (ldlt.info() == Eigen::Success && d.allFinite()) return d;
    }
    return {};
  }

  // E(h + t d) - E(h), summed edgewise with expm1/log1p so that changes far
  // below the rounding level of E itself keep their sign.
  double energy_change(const std::vector<double>& h, const Eigen::VectorXd& d, double t) const {
    double s = 0;
    for (const Edge& a : ball_.edges()) {
      double step = t * (dir(d, a.dst) - dir(d, a.src));
      if (step == 0) continue;
      double x = h[a.dst] - h[a.src];
      double y = x + step;
      if (x == 0) {
        s += std::pow(std::fabs(y), p_);
      } else if (y == 0 || (x > 0) != (y > 0)) {
        s += std::pow(std::fabs(y), p_) - std::pow(std::fabs(x), p_);
      } else {
        s += std::pow(std::fabs(x), p_) * std::expm1(p_ * std::log1p(step / x));
      }
    }
    return s;
  }

  std::vector<double> moved(const std::vector<double>& h, const Eigen::VectorXd& d, double t) const {
    std::vector<double> out = h;
    for (std::size_t i = 0; i < interior_.size(); ++i) out[interior_[i]] += t * d[static_cast<Eigen::Index>(i)];
    return out;
  }

  void difference(const std::vector<double>& a, const std::vector<double>& b, Eigen::VectorXd& out) const {
    for (std::size_t i = 0; i < interior_.size(); ++i) {
      out[static_cast<Eigen::Index>(i)] = a[interior_[i]] - b[interior_[i]];
    }
  }

  // One Gauss-Seidel sweep, each vertex moved to the exact 1-D minimizer.
  void coordinate_sweep(std::vector<double>& h) const {
    for (std::size_t v : interior_) {
      std::vector<double> nb;
      for (std::uint32_t e : ball_.out_edges(v)) nb.push_back(h[ball_.edge(e).dst]);
      double lo = *std::min_element(nb.begin(), nb.end());
      double hi = *std::max_element(nb.begin(), nb.end());
      auto slope = [&](double x) {
        double s = 0;
        for (double u : nb) {
          double d = x - u;
          if (d != 0) s += std::pow(std::fabs(d), p_ - 2) * d;
        }
        return s;
      };
      for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (slope(mid) > 0 ? hi : lo) = mid;
      }
      double best = 0.5 * (lo + hi);
      auto local = [&](double x) {
        double s = 0;
        for (double u : nb) s += std::pow(std::fabs(x - u), p_);
        return s;
      };
      if (local(best) <= local(h[v])) h[v] = best;
    }
  }

 private:
  double dir(const Eigen::VectorXd& d, std::size_t v) const {
    return slot_[v] >= 0 ? d[slot_[v]] : 0.0;
  }

  const BallIndex& ball_;
  double p_;
  std::vector<int> slot_;
  std::vector<std::size_t> interior_;
};

}  // namespace

PHarmonicResult p_harmonic_solve(const BallIndex& ball, const std::map<std::size_t, double>& boundary, double p,
                                 const PHarmonicOptions& opts) {
  if (!(p > 1) || !std::isfinite(p)) throw DomainError("p_harmonic_solve: need 1 < p < infinity");
  if (!(opts.tol > 0)) throw UsageError("p_harmonic_solve: tolerance must be positive");
  std::size_t sphere = 0;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) sphere += ball.dist(v) == ball.radius();
  if (boundary.size() != sphere) throw UsageError("p_harmonic_solve: boundary must give a value on every sphere vertex");
  for (const auto& [v, x] : boundary) {
    if (v >= ball.num_vertices() || ball.dist(v) != ball.radius()) {
      throw UsageError("p_harmonic_solve: boundary vertex " + std::to_string(v) + " is not on the sphere");
    }
    if (!std::isfinite(x)) throw UsageError("p_harmonic_solve: boundary values must be finite");
  }

  Solver solver(ball, p);
  std::vector<double> h(ball.num_vertices(), boundary.empty() ? 0.0 : boundary.begin()->second);
  for (const auto& [v, x] : boundary) h[v] = x;

  PHarmonicResult out;
  out.h.ball = &ball;
  out.h.basepoint = ball.index_of(ball.group().identity());

  if (solver.unknowns() > 0 && p_harmonic_residual(ball, h, p) > 0) {
    // Warm start: the harmonic extension, one exact Newton step for p = 2.
    Eigen::VectorXd g2 = solver.gradient(h, 2.0);
    Eigen::VectorXd d2 = solver.newton_direction(h, 2.0, g2);
    if (d2.size() > 0) h = solver.moved(h, d2, 1.0);
  }

  double E = solver.energy(h);
  double res = p_harmonic_residual(ball, h, p);
  out.energy.push_back(E);
  out.residuals.push_back(res);
  const double armijo = 1e-4;
  while (res > opts.tol) {
    if (out.iterations >= opts.max_iter) {
      throw NonConvergenceError("p_harmonic_solve: no convergence in " + std::to_string(opts.max_iter) +
                                    " iterations (residual " + format_double(res) + ")",
                                res);
    }
    ++out.iterations;
    Eigen::VectorXd g = solver.gradient(h, p);
    Eigen::VectorXd d = solver.newton_direction(h, p, g);
    bool stepped = false;
    if (d.size() > 0) {
      double slope = g.dot(d);
      if (slope < 0) {
        for (double t = 1; t > 1e-14; t *= 0.5) {
          double dE = solver.energy_change(h, d, t);
          if (dE <= armijo * t * slope) {
            h = solver.moved(h, d, t);
            E += dE;
            stepped = true;
            break;
          }
        }
      }
    }
    if (!stepped) {
      std::vector<double> trial = h;
      solver.coordinate_sweep(trial);
      ++out.coordinate_sweeps;
      Eigen::VectorXd delta(static_cast<Eigen::Index>(solver.unknowns()));
      solver.difference(trial, h, delta);
      double dE = solver.energy_change(h, delta, 1.0);
      if (dE <= 0) {
        h = std::move(trial);
        E += dE;
      }
    }
    res = p_harmonic_residual(ball, h, p);
    out.energy.push_back(E);
    out.residuals.push_back(res);
  }
  out.residual = res;
  out.h.values = std::move(h);
  return out;
}

}  // namespace trlab
