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
// Acceptance suite: one PASS/FAIL line per criterion. Exits 1 if any fails.

#include <gmpxx.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "trlab/cayley.hpp"
#include "trlab/cohomology.hpp"
#include "trlab/config.hpp"
#include "trlab/folner.hpp"
#include "trlab/group.hpp"
#include "trlab/measure.hpp"
#include "trlab/rational.hpp"
#include "trlab/suites.hpp"
#include "trlab/transport.hpp"

using namespace trlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double seconds_limit;  // 0: none
  std::function<Outcome()> run;
};

std::vector<FolnerSet> boxes(const Group& g, int lo, int hi) {
  std::vector<FolnerSet> out;
  for (int n = lo; n <= hi; ++n) out.push_back(box_folner(g, n));
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : " ") + x;
  return s;
}

Outcome suite_outcome(const std::string& suite, ExperimentConfig cfg, int min_cases) {
  SuiteReport r = run_suite(suite, cfg);
  Outcome o{r.passed(), ""};
  std::vector<std::string> parts;
  for (const SuiteCheck& c : r.checks) {
    if (c.cases < min_cases) o.pass = false;
    parts.push_back(c.name + ": " + std::to_string(c.failures) + "/" + std::to_string(c.cases) + " failed");
  }
  o.detail = join(parts);
  if (!r.reproducer.empty()) o.detail += " reproducer " + r.reproducer;
  return o;
}

// 1. trc(rho_s xi_n^vee, xi_n^vee) = 1 for boxes in Z and Z^2.
Outcome abelian_unit_cost() {
  Outcome o;
  int instances = 0;
  for (const auto& [spec, top] : std::vector<std::pair<std::string, int>>{{"Z", 12}, {"Z^2", 6}}) {
    Group g = Group::parse(spec);
    for (int n = 1; n <= top; ++n) {
      Measure target = vee(uniform_measure(box_folner(g, n)));
      for (const Element& s : g.generators().elements()) {
        Measure source = act(target, s, Action::kRho);
        auto ball = ball_for_measures(source, target);
        Rational cost = trc_flow(source, target, *ball).cost;
        ++instances;
        if (cost != 1) {
          o.pass = false;
          o.detail += spec + " n=" + std::to_string(n) + " " + g.format(s) + ": " + to_string(cost) + "; ";
        }
      }
    }
  }
  o.detail += std::to_string(instances) + " instances";
  return o;
}

// 4. The identity as stated, over the full range.
Outcome binomial_identity() {
  Outcome o;
  int failures = 0;
  std::string first;
  for (unsigned long N = 1; N <= 12; ++N) {
    for (unsigned long c = 2; c <= 6; ++c) {
      mpz_class lhs = 0, b, pw;
      for (unsigned long i = 1; i <= N; ++i) {
        mpz_bin_uiui(b.get_mpz_t(), N, i);
        mpz_ui_pow_ui(pw.get_mpz_t(), c - 1, i);
        lhs += pw * b * i;
      }
      mpz_ui_pow_ui(pw.get_mpz_t(), c, N - 1);
      mpz_class rhs = pw * N;
      if (N == 3 && c == 2 && lhs != 12) {
        o.pass = false;
        o.detail += "spot N=3 c=2 gives " + lhs.get_str() + "; ";
      }
      if (lhs != rhs) {
        ++failures;
        if (first.empty()) {
          first = "N=" + std::to_string(N) + " c=" + std::to_string(c) + ": " + lhs.get_str() + " vs " + rhs.get_str();
        }
      }
    }
  }
  if (failures > 0) o.pass = false;
  o.detail += std::to_string(failures) + "/60 mismatches";
  if (!first.empty()) o.detail += ", first " + first;
  return o;
}

// 5. Explicit lamplighter pattern: caps, counts, stated bound, trc <= cost.
Outcome wreath_pattern_bound() {
  Outcome o;
  Group g = Group::parse("wreath(Z_2,Z)");
  std::vector<std::string> bound_clause, notes;
  bool caps = true, counts = true, marginals_ok = true, below = true;
  for (int n = 2; n <= 4; ++n) {
    for (const char* label : {"t.x1", "t.x1^-1"}) {
      Element z = g.generators().element(*g.generators().find_label(label));
      WreathPattern wp = build_wreath_pattern(g, n, z);
      const WreathBound& rep = wp.report;
      for (const LampCountRow& row : rep.rows) {
        if (row.longest > 2 * row.lit * (rep.d + rep.k) + rep.d) caps = false;
        // c^(|A|-N) (c-1)^i binom(N, i) with c = 2, N = 1, per lamplighter
        // position; the pattern moves all |A| = n positions.
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), 1, static_cast<unsigned long>(row.lit));
        Rational count = Rational(mpz_class(1) << static_cast<unsigned>(n - 1)) * Rational(binom);
        if (row.count != count || row.enumerated != count * n) counts = false;
      }
      if (!rep.caps_hold) caps = false;
      auto [src, dst] = marginals(*wp.ball, wp.pattern);
      if (!(src == wp.source && dst == wp.target)) marginals_ok = false;
      Rational cost = priced_cost(wp.pattern, std::vector<Rational>(wp.ball->num_edges(), Rational(1)));
      // (2N(d+k) + dc) / (|A| c) with N = 1, k = 1, c = 2, d = n - 1, |A| = n.
      Rational stated = make_rational(2 * n + 2 * (n - 1), 2 * n);
      Rational allowed = stated + rep.exact_all_off;
      bool ok = cost <= allowed && rep.bound == stated;
      bound_clause.push_back("n=" + std::to_string(n) + " " + label + " " + to_string(cost) +
                             (ok ? "<=" : ">") + to_string(allowed));
      if (!ok) o.pass = false;
      auto ball = ball_for_measures(wp.source, wp.target);
      Rational trc = trc_flow(wp.source, wp.target, *ball).cost;
      if (!(trc <= cost)) below = false;
      notes.push_back("trc " + to_string(trc));
    }
  }
  if (!caps || !counts || !marginals_ok || !below) o.pass = false;
  o.detail = std::string("caps ") + (caps ? "ok" : "violated") + ", counts " + (counts ? "ok" : "wrong") +
             ", marginals " + (marginals_ok ? "ok" : "wrong") + ", trc<=cost " + (below ? "ok" : "violated") +
             "; cost vs stated bound + all-off: " + join(bound_clause) + "; " + join(notes);
  return o;
}

// 6. Box K <= 2k; lamplighter K_n growing.
Outcome controlled_folner() {
  Outcome o;
  std::vector<std::string> parts;
  for (const auto& [spec, k, top] : std::vector<std::tuple<std::string, int, int>>{{"Z", 1, 12}, {"Z^2", 2, 8},
                                                                                     {"Z^3", 3, 5}}) {
    Group g = Group::parse(spec);
    ControlReport rep = is_controlled(boxes(g, 1, top), g.generators());
    bool ok = rep.K <= 2 * k;
    if (!ok) o.pass = false;
    parts.push_back(spec + " K=" + to_string(rep.K) + (ok ? "<=" : ">") + std::to_string(2 * k));
  }
  Group w = Group::parse("wreath(Z_2,Z^2)");
  std::vector<FolnerSet> sets;
  for (int n = 2; n <= 4; ++n) sets.push_back(wreath_folner(w, n));
  ControlReport rep = is_controlled(sets, w.generators());
  bool growing = true;
  std::string ks;
  for (std::size_t i = 0; i < rep.K_n.size(); ++i) {
    if (i > 0 && !(rep.K_n[i] > rep.K_n[i - 1])) growing = false;
    ks += (i ? "," : "") + to_string(rep.K_n[i]);
  }
  if (!growing) o.pass = false;
  parts.push_back("wreath(Z_2,Z^2) K_n=" + ks + (growing ? " growing" : " not growing"));
  o.detail = join(parts);
  return o;
}

// 8. Sign function on Z: max |grad_conv| = 2/n = ||lambda_s xi - xi||_1 ||f||_inf.
Outcome pointwise_decay() {
  Outcome o;
  Group z = Group::parse("Z");
  BallIndex ball(z, z.identity(), 40);
  std::vector<Rational> sign(ball.num_vertices()), stair(ball.num_vertices());
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    std::int64_t x = ball.vertex(v).coords[0];
    sign[v] = x >= 0 ? 1 : -1;
    stair[v] = make_rational(std::clamp<std::int64_t>(x, -3, 3), 3);
  }
  Rational prev = 10;
  std::vector<std::string> values;
  for (int n = 2; n <= 10; ++n) {
    Measure xi = uniform_measure(box_folner(z, n));
    DecayReport a = pointwise_decay_check(ball, 0, xi, sign);
    DecayReport b = pointwise_decay_check(ball, 0, xi, stair);
    if (a.max_lhs != make_rational(2, n) || a.rhs != make_rational(2, n) || !a.holds || !b.holds) o.pass = false;
    if (!(a.max_lhs < prev)) o.pass = false;
    prev = a.max_lhs;
    values.push_back(to_string(a.max_lhs));
  }
  o.detail = "sign f maxima n=2..10: " + join(values);
  return o;
}

std::map<std::size_t, double> sphere_values(const BallIndex& ball, const std::function<double(std::size_t)>& f) {
  std::map<std::size_t, double> out;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    if (!ball.is_interior(v)) out[v] = f(v);
  }
  return out;
}

// 9. p-harmonic solver.
Outcome pharmonic() {
  Outcome o;
  std::vector<std::string> parts;
  Group z2 = Group::parse("Z^2");
  BallIndex ball(z2, z2.identity(), 4);

  double worst_const = 0;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    auto r = p_harmonic_solve(ball, sphere_values(ball, [](std::size_t) { return 0.75; }), p);
    worst_const = std::max(worst_const, r.residual);
  }
  if (worst_const != 0) o.pass = false;
  parts.push_back("constant residual " + format_double(worst_const));

  // Dense oracle: h(v) = mean of the neighbours at interior v.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  auto bdry = sphere_values(ball, [&](std::size_t) { return u(rng); });
  std::vector<int> slot(ball.num_vertices(), -1);
  int m = 0;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    if (ball.is_interior(v)) slot[v] = m++;
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    if (slot[v] < 0) continue;
    for (std::uint32_t e : ball.out_edges(v)) {
      std::size_t w = ball.edge(e).dst;
      A(slot[v], slot[v]) += 1;
      if (slot[w] >= 0) {
        A(slot[v], slot[w]) -= 1;
      } else {
        rhs(slot[v]) += bdry.at(w);
      }
    }
  }
  Eigen::VectorXd x = A.partialPivLu().solve(rhs);
  auto r2 = p_harmonic_solve(ball, bdry, 2.0);
  double err2 = 0;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    double want = slot[v] >= 0 ? x(slot[v]) : bdry.at(v);
    err2 = std::max(err2, std::abs(r2.h.values[v] - want));
  }
  if (!(err2 <= 1e-8)) o.pass = false;
  parts.push_back("p=2 sup error " + format_double(err2));

  // On a path every p-harmonic function with two boundary values is linear.
  Group z = Group::parse("Z");
  BallIndex path(z, z.identity(), 6);
  auto ends = sphere_values(path, [&](std::size_t v) { return path.vertex(v).coords[0] > 0 ? 2.5 : -0.5; });
  auto r4 = p_harmonic_solve(path, ends, 4.0);
  double err4 = 0;
  for (std::size_t v = 0; v < path.num_vertices(); ++v) {
    double t = static_cast<double>(path.vertex(v).coords[0]);
    err4 = std::max(err4, std::abs(r4.h.values[v] - (1.0 + 0.25 * t)));
  }
  if (!(err4 <= 1e-8)) o.pass = false;
  parts.push_back("p=4 path error " + format_double(err4));

  int runs = 0, rises = 0;
  for (double p : {1.5, 3.0, 4.0, 6.0}) {
    for (int k = 0; k < 5; ++k) {
      auto b = sphere_values(ball, [&](std::size_t) { return u(rng); });
      auto r = p_harmonic_solve(ball, b, p);
      ++runs;
      for (std::size_t i = 1; i < r.energy.size(); ++i) {
        if (r.energy[i] > r.energy[i - 1]) ++rises;
      }
    }
  }
  if (rises > 0) o.pass = false;
  parts.push_back("energy increases " + std::to_string(rises) + " over " + std::to_string(runs) + " solves");
  o.detail = join(parts);
  return o;
}

// 10. Central Dirac measures commute with the directional gradient.
Outcome central_commutation() {
  Outcome o;
  Group h = Group::parse("Heis");
  BallIndex ball(h, h.identity(), 16);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-30, 30), den(1, 7);
  std::size_t compared = 0, mismatches = 0, empty = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> f(ball.num_vertices());
    for (auto& x : f) x = make_rational(num(rng), den(rng));
    DomainFunction full = DomainFunction::full(f);
    for (std::int64_t n = 1; n <= 10; ++n) {
      Measure xi = Measure::dirac(h, Element({0, 0, n}));
      for (std::size_t s = 0; s < h.generators().size(); ++s) {
        DomainFunction lhs = grad_conv(ball, s, xi, f);
        DomainFunction rhs = convolve(ball, xi, directional_gradient(ball, s, full));
        std::size_t here = 0;
        for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
          if (!lhs.defined(v) || !rhs.defined(v)) continue;
          ++here;
          if (lhs.values[v] != rhs.values[v]) ++mismatches;
        }
        if (here == 0) ++empty;
        compared += here;
      }
    }
  }
  if (mismatches > 0 || empty > 0) o.pass = false;
  o.detail = std::to_string(compared) + " values compared, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(empty) + " empty domains";
  return o;
}

// 11. Two-scale second ratio.
Outcome two_scale_ratios() {
  Outcome o;
  Group z = Group::parse("Z"), z2 = Group::parse("Z^2");
  auto lamps = boxes(z, 1, 16);
  auto line = select_inner_scale(lamps, boxes(z, 2, 8));
  Rational last = line.back().second_ratio;
  Rational gap = abs(last - 1);
  if (!(gap <= make_rational(1, 4))) o.pass = false;
  auto plane = select_inner_scale(lamps, boxes(z2, 2, 6));
  std::string trend;
  for (std::size_t i = 0; i < plane.size(); ++i) {
    if (i > 0 && !(plane[i].second_ratio < plane[i - 1].second_ratio)) o.pass = false;
    trend += (i ? "," : "") + to_string(plane[i].second_ratio);
  }
  o.detail = "Z wr Z n=8 second ratio " + to_string(last) + " (inner " + std::to_string(line.back().inner) +
             "); Z wr Z^2 n=2..6: " + trend;
  return o;
}

}  // namespace

int main() {
  ExperimentConfig base;
  base.seed = 20261015;
  std::vector<Criterion> criteria = {
      {1, "abelian boxes: trc(rho_s xi^vee, xi^vee) = 1", 10, abelian_unit_cost},
      {2, "trc_flow = coupling LP on 100 random instances", 60,
       [&] {
         ExperimentConfig c = base;
         c.cases = 100;
         return suite_outcome("oracle", c, 100);
       }},
      {3, "telescoping: priced_cost(m, grad f) = <f,phi> - <f,xi>", 0,
       [&] {
         ExperimentConfig c = base;
         c.cases = 200;
         return suite_outcome("telescoping", c, 100);
       }},
      {4, "sum (c-1)^i i binom(N,i) = N c^(N-1), N<=12, 2<=c<=6", 0, binomial_identity},
      {5, "lamplighter pattern: caps, stated bound, trc <= cost", 300, wreath_pattern_bound},
      {6, "controlled Folner: boxes K <= 2k, lamplighter K_n grows", 0, controlled_folner},
      {7, "operator bound |S| m_flat(E) for p in 1,3/2,2,3,inf", 0,
       [&] {
         ExperimentConfig c = base;
         c.trials = 100;
         return suite_outcome("interpolation", c, 100);
       }},
      {8, "pointwise decay 2/n on Z boxes", 0, pointwise_decay},
      {9, "p-harmonic solver", 0, pharmonic},
      {10, "central Dirac measures commute with gradients on Heis", 0, central_commutation},
      {11, "two-scale second ratio trends", 0, two_scale_ratios},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.seconds_limit > 0 && secs > c.seconds_limit) {
      o.pass = false;
      o.detail += "; over time limit " + format_double(c.seconds_limit) + " s";
    }
    if (!o.pass) ++failed;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::printf("%s criterion %d: %s [%s] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), timing,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
