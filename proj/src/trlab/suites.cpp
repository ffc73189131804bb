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

#include "trlab/suites.hpp"

#include <gmpxx.h>

#include <sstream>

#include "json.hpp"
#include "trlab/cohomology.hpp"
#include "trlab/errors.hpp"
#include "trlab/folner.hpp"
#include "trlab/transport.hpp"

namespace trlab {

using ojson = nlohmann::ordered_json;

namespace {

std::vector<Group> groups_or(const ExperimentConfig& cfg, const std::vector<std::string>& fallback) {
  std::vector<Group> out;
  if (!cfg.group.empty()) {
    out.push_back(Group::parse(cfg.group));
  } else {
    for (const auto& spec : fallback) out.push_back(Group::parse(spec));
  }
  return out;
}

int cases_or(const ExperimentConfig& cfg, int fallback) { return cfg.cases > 0 ? cfg.cases : fallback; }

std::string family_of(const Group& g, const std::string& folner) {
  if (folner != "auto") return folner;
  return g.kind() == Group::Kind::kWreath ? "wreath" : "box";
}

FolnerSet family_set(const Group& g, const std::string& family, int n, int inner) {
  return family == "wreath" ? wreath_folner(g, n, inner) : box_folner(g, n);
}

ojson measure_json(const Measure& m) { return ojson::parse(m.to_json()); }

ojson pattern_json(const BallIndex& ball, const Pattern& m) {
  const Group& g = ball.group();
  ojson paths = ojson::array();
  for (const PatternPath& p : m.paths) {
    ojson labels = ojson::array();
    for (std::size_t e : p.edges) labels.push_back(g.generators().label(ball.edge(e).gen));
    paths.push_back({{"source", g.format(ball.vertex(p.source))}, {"labels", labels}, {"mass", to_string(p.mass)}});
  }
  return paths;
}

// A pattern of random walks with random rational masses.
Pattern random_walks(const BallIndex& ball, std::mt19937_64& rng, int reach) {
  std::vector<std::size_t> pool;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    if (ball.dist(v) <= reach) pool.push_back(v);
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> paths(1, 4), len(0, 6), num(1, 9);
  Pattern m;
  for (int k = paths(rng); k > 0; --k) {
    PatternPath p{pool[pick(rng)], {}, make_rational(num(rng), 12)};
    std::size_t at = p.source;
    for (int j = len(rng); j > 0; --j) {
      auto outs = ball.out_edges(at);
      if (outs.empty()) break;
      std::size_t e = outs[std::uniform_int_distribution<std::size_t>(0, outs.size() - 1)(rng)];
      p.edges.push_back(e);
      at = ball.edge(e).dst;
    }
    m.paths.push_back(std::move(p));
  }
  return m;
}

std::vector<Rational> random_function(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 9);
  std::vector<Rational> f(n);
  for (auto& x : f) x = make_rational(num(rng), den(rng));
  return f;
}

Rational pair(const std::vector<Rational>& f, const BallIndex& ball, const Measure& m) {
  Rational s = 0;
  for (const auto& [x, w] : m.atoms()) s += w * f[ball.index_of(x)];
  return s;
}

void fail(SuiteReport& r, SuiteCheck& c, const ojson& inputs) {
  ++c.failures;
  if (r.reproducer.empty()) r.reproducer = ojson{{"check", c.name}, {"inputs", inputs}}.dump();
}

SuiteReport telescoping(const ExperimentConfig& cfg) {
  SuiteReport r{"telescoping", cfg.seed, {}, {}, {}};
  auto groups = groups_or(cfg, {"Z", "Z^2", "Z^3", "Heis", "wreath(Z_2,Z)", "wreath(Z_3,Z)", "wreath(Z,Z)"});
  std::vector<BallIndex> balls;
  for (const Group& g : groups) balls.emplace_back(g, g.identity(), 4, cfg.budget_vertices);
  std::mt19937_64 rng(cfg.seed);
  SuiteCheck walks{"random walk patterns", 0, 0, ""}, flows{"decomposed optimal flows", 0, 0, ""};
  const int n = cases_or(cfg, 200);
  for (int i = 0; i < n; ++i) {
    const BallIndex& ball = balls[static_cast<std::size_t>(i) % balls.size()];
    bool use_flow = i % 2 == 1;
    SuiteCheck& c = use_flow ? flows : walks;
    ++c.cases;
    Pattern m;
    Measure xi(ball.group()), phi(ball.group());
    if (use_flow) {
      xi = random_probability_measure(ball, rng, 4, 2);
      phi = random_probability_measure(ball, rng, 4, 2);
      m = decompose_flow(ball, trc_flow(xi, phi, ball).flow, xi, phi);
    } else {
      m = random_walks(ball, rng, 2);
    }
    auto [src, dst] = marginals(ball, m);
    auto f = random_function(ball.num_vertices(), rng);
    Rational lhs = priced_cost(m, gradient(ball, f));
    Rational rhs = pair(f, ball, dst) - pair(f, ball, src);
    bool ok = lhs == rhs && (!use_flow || (src == xi && dst == phi));
    if (!ok) {
      ojson fv = ojson::object();
      for (std::size_t v = 0; v < ball.num_vertices(); ++v) fv[ball.group().format(ball.vertex(v))] = to_string(f[v]);
      fail(r, c, {{"group", ball.group().spec()}, {"pattern", pattern_json(ball, m)}, {"f", fv},
                  {"priced_cost", to_string(lhs)}, {"difference", to_string(rhs)}});
    }
  }
  r.checks = {walks, flows};
  return r;
}

SuiteReport oracle(const ExperimentConfig& cfg) {
  SuiteReport r{"oracle", cfg.seed, {}, {}, {}};
  auto groups = groups_or(cfg, {"Z", "Z^2", "Heis"});
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> atoms(1, 6), radius(2, 6);
  SuiteCheck c{"trc_flow = coupling LP", 0, 0, ""};
  const int n = cases_or(cfg, 100);
  for (int i = 0; i < n; ++i) {
    const Group& g = groups[static_cast<std::size_t>(i) % groups.size()];
    BallIndex ball(g, g.identity(), radius(rng), cfg.budget_vertices);
    int reach = ball.radius() / 2;
    Measure xi = random_probability_measure(ball, rng, atoms(rng), reach);
    Measure phi = random_probability_measure(ball, rng, atoms(rng), reach);
    ++c.cases;
    Rational a = trc_flow(xi, phi, ball).cost;
    Rational b = trc_coupling_oracle(xi, phi, ball, cfg.budget_atoms).cost;
    if (a != b) {
      fail(r, c, {{"group", g.spec()}, {"radius", ball.radius()}, {"xi", measure_json(xi)}, {"phi", measure_json(phi)},
                  {"flow", to_string(a)}, {"lp", to_string(b)}});
    }
  }
  r.checks = {c};
  return r;
}

struct Transport {
  std::string label;
  std::shared_ptr<const BallIndex> ball;
  Pattern pattern;
};

// Criterion instances: optimal patterns for boxes, explicit ones for lamplighters.
std::vector<Transport> transport_instances(const ExperimentConfig& cfg) {
  struct Family {
    std::string spec;
    std::vector<int> ns;
  };
  std::vector<Family> fams;
  if (!cfg.group.empty()) {
    fams.push_back({cfg.group, cfg.ns.empty() ? std::vector<int>{1, 2, 3} : cfg.ns});
  } else {
    fams = {{"Z", parse_int_list("1..12")}, {"Z^2", parse_int_list("1..6")}, {"wreath(Z_2,Z)", {2, 3, 4}}};
  }
  std::vector<Transport> out;
  for (const Family& fam : fams) {
    Group g = Group::parse(fam.spec);
    std::string family = family_of(g, cfg.folner);
    const GeneratingSet& S = g.generators();
    for (int n : fam.ns) {
      for (std::size_t s = 0; s < S.size(); ++s) {
        std::string label = fam.spec + " n=" + std::to_string(n) + " " + S.label(s);
        if (family == "wreath") {
          WreathPattern wp = build_wreath_pattern(g, n, S.element(s), cfg.inner, cfg.budget_vertices);
          if (!wp.report.base_move) continue;
          out.push_back({label, wp.ball, wp.pattern});
        } else {
          Measure target = vee(uniform_measure(box_folner(g, n), cfg.budget_vertices));
          Measure source = act(target, S.element(s), Action::kRho);
          auto ball = ball_for_measures(source, target, cfg.budget_vertices);
          out.push_back({label, ball, decompose_flow(*ball, trc_flow(source, target, *ball).flow, source, target)});
        }
      }
    }
  }
  return out;
}

SuiteReport interpolation(const ExperimentConfig& cfg) {
  SuiteReport r{"interpolation", cfg.seed, {}, {}, {}};
  auto ps = cfg.ps.empty() ? parse_p_list("1,3/2,2,3,inf") : cfg.ps;
  auto instances = transport_instances(cfg);
  for (const auto& p : ps) {
    SuiteCheck c{"p=" + format_p(p), 0, 0, ""};
    double worst = 0;
    std::uint64_t k = 0;
    for (const Transport& t : instances) {
      OperatorBoundReport rep = operator_bound_check(*t.ball, t.pattern, p, cfg.trials, cfg.seed + k++, 2,
                                                     cfg.budget_vertices);
      c.cases += rep.trials;
      worst = std::max(worst, rep.max_ratio / to_double(rep.bound));
      if (rep.violations > 0) {
        c.failures += rep.violations - 1;
        fail(r, c, {{"instance", t.label}, {"p", format_p(p)}, {"max_ratio", rep.max_ratio},
                    {"bound", to_string(rep.bound)}});
      }
    }
    c.detail = "max ratio/bound " + format_double(worst) + " over " + std::to_string(instances.size()) + " instances";
    r.checks.push_back(c);
  }
  return r;
}

std::vector<Rational> on_line(const BallIndex& ball, Rational (*f)(std::int64_t)) {
  std::vector<Rational> out(ball.num_vertices());
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) out[v] = f(ball.vertex(v).coords[0]);
  return out;
}

SuiteReport decay(const ExperimentConfig& cfg) {
  SuiteReport r{"decay", cfg.seed, {}, {}, {}};
  Group z = Group::parse("Z");
  auto ns = cfg.ns.empty() ? parse_int_list("2..10") : cfg.ns;
  int top = *std::max_element(ns.begin(), ns.end());
  BallIndex ball(z, z.identity(), 2 * top + 12, cfg.budget_vertices);
  auto sign = on_line(ball, [](std::int64_t x) { return Rational(x >= 0 ? 1 : -1); });
  auto step = on_line(ball, [](std::int64_t x) { return Rational(x > 0 ? 1 : 0); });
  auto stair = on_line(ball, [](std::int64_t x) { return Rational(std::clamp<std::int64_t>(x, 0, 4)); });
  std::mt19937_64 rng(cfg.seed);
  auto noise = random_function(ball.num_vertices(), rng);
  SuiteCheck bound{"|grad_conv| <= ||lambda_s xi - xi||_1 ||f||_inf", 0, 0, ""};
  SuiteCheck exact{"max values: sign 2/n, step 1/n, clamp min(n,4)/n", 0, 0, ""};
  SuiteCheck mono{"step maximum strictly decreasing in n", 0, 0, ""};
  Rational previous = -1;
  for (int n : ns) {
    Measure xi = uniform_measure(box_folner(z, n));
    for (std::size_t s = 0; s < 2; ++s) {
      for (const auto* f : {&sign, &step, &stair, &noise}) {
        ++bound.cases;
        if (!pointwise_decay_check(ball, s, xi, *f).holds) fail(r, bound, {{"n", n}, {"generator", s}});
      }
    }
    DecayReport a = pointwise_decay_check(ball, 0, xi, sign), b = pointwise_decay_check(ball, 0, xi, step),
                c = pointwise_decay_check(ball, 0, xi, stair);
    ++exact.cases;
    if (a.max_lhs != make_rational(2, n) || a.rhs != make_rational(2, n) || b.max_lhs != make_rational(1, n) ||
        c.max_lhs != make_rational(std::min(n, 4), n)) {
      fail(r, exact, {{"n", n}, {"sign", to_string(a.max_lhs)}, {"step", to_string(b.max_lhs)},
                      {"clamp", to_string(c.max_lhs)}});
    }
    ++mono.cases;
    if (previous >= 0 && !(b.max_lhs < previous)) fail(r, mono, {{"n", n}, {"value", to_string(b.max_lhs)}});
    previous = b.max_lhs;
  }
  r.checks = {bound, exact, mono};
  return r;
}

SuiteReport binomial(const ExperimentConfig& cfg) {
  SuiteReport r{"binomial", cfg.seed, {}, {}, {}};
  SuiteCheck stated{"sum_i (c-1)^i i binom(N,i) = N c^(N-1), 1<=N<=12, 2<=c<=6", 0, 0, ""};
  SuiteCheck scaled{"sum_i (c-1)^i i binom(N,i) = N (c-1) c^(N-1), 1<=N<=12, 2<=c<=6", 0, 0, ""};
  for (unsigned long N = 1; N <= 12; ++N) {
    for (unsigned long cc = 2; cc <= 6; ++cc) {
      mpz_class lhs = 0, binom, power;
      for (unsigned long i = 1; i <= N; ++i) {
        mpz_bin_uiui(binom.get_mpz_t(), N, i);
        mpz_ui_pow_ui(power.get_mpz_t(), cc - 1, i);
        lhs += power * binom * i;
      }
      mpz_ui_pow_ui(power.get_mpz_t(), cc, N - 1);
      mpz_class rhs = power * N;
      mpz_class rhs_scaled = rhs * (cc - 1);
      ++stated.cases;
      ++scaled.cases;
      if (lhs != rhs) fail(r, stated, {{"N", N}, {"c", cc}, {"lhs", lhs.get_str()}, {"rhs", rhs.get_str()}});
      if (lhs != rhs_scaled)
        fail(r, scaled, {{"N", N}, {"c", cc}, {"lhs", lhs.get_str()}, {"rhs", rhs_scaled.get_str()}});
      if (N == 3 && cc == 2) stated.detail = "N=3 c=2: " + lhs.get_str() + " = " + rhs.get_str();
    }
  }
  if (stated.failures > 0)
    r.notes.push_back("N c^(N-1) matches only for c=2; the sum equals N (c-1) c^(N-1) for every c");
  r.checks = {stated, scaled};
  return r;
}

SuiteReport controlled(const ExperimentConfig& cfg) {
  SuiteReport r{"controlled", cfg.seed, {}, {}, {}};
  if (!cfg.group.empty()) {
    Group g = Group::parse(cfg.group);
    std::string family = family_of(g, cfg.folner);
    auto ns = cfg.ns.empty() ? parse_int_list("1..4") : cfg.ns;
    std::vector<FolnerSet> sets;
    for (int n : ns) sets.push_back(family_set(g, family, n, cfg.inner));
    ControlReport rep = is_controlled(sets, g.generators(), cfg.threshold);
    SuiteCheck c{"K <= " + to_string(cfg.threshold) + " for " + cfg.group, 1, rep.controlled ? 0 : 1,
                 "K = " + to_string(rep.K)};
    if (!rep.controlled) r.reproducer = ojson{{"group", cfg.group}, {"K", to_string(rep.K)}}.dump();
    r.checks = {c};
    return r;
  }
  const std::vector<std::pair<std::string, std::string>> boxes = {{"Z", "1..12"}, {"Z^2", "1..8"}, {"Z^3", "1..5"}};
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    Group g = Group::parse(boxes[k].first);
    std::vector<FolnerSet> sets;
    for (int n : parse_int_list(boxes[k].second)) sets.push_back(box_folner(g, n));
    Rational cap(static_cast<long>(2 * (k + 1)));
    ControlReport rep = is_controlled(sets, g.generators(), cap);
    SuiteCheck c{boxes[k].first + " boxes K <= " + to_string(cap), 1, 0, "K = " + to_string(rep.K)};
    if (!rep.controlled) fail(r, c, {{"group", boxes[k].first}, {"K", to_string(rep.K)}});
    r.checks.push_back(c);
  }
  Group w = Group::parse("wreath(Z_2,Z^2)");
  std::vector<FolnerSet> sets;
  for (int n : {2, 3, 4}) sets.push_back(wreath_folner(w, n));
  ControlReport rep = is_controlled(sets, w.generators());
  std::string ks;
  for (const Rational& K : rep.K_n) ks += (ks.empty() ? "" : " ") + to_string(K);
  SuiteCheck c{"wreath(Z_2,Z^2) K_n strictly increasing over n=2..4", 1, 0, "K_n = " + ks};
  if (!rep.growing) fail(r, c, {{"K_n", ks}});
  r.checks.push_back(c);
  return r;
}

SuiteReport pattern(const ExperimentConfig& cfg) {
  SuiteReport r{"pattern", cfg.seed, {}, {}, {}};
  struct Family {
    std::string spec;
    std::vector<int> ns;
    int inner;
  };
  std::vector<Family> fams;
  if (!cfg.group.empty()) {
    fams.push_back({cfg.group, cfg.ns.empty() ? std::vector<int>{2, 3} : cfg.ns, cfg.inner});
  } else {
    fams = {{"wreath(Z_2,Z)", {2, 3, 4}, 0}, {"wreath(Z_3,Z)", {2, 3}, 0}, {"wreath(Z_2,Z^2)", {2}, 0},
            {"wreath(Z,Z)", {2}, 3}};
  }
  SuiteCheck marg{"marginals (rho_z xi^vee, xi^vee)", 0, 0, ""};
  SuiteCheck caps{"path length <= 2i(d+k)+d", 0, 0, ""};
  SuiteCheck counts{"paths per lit count = c^(|A|-N)(c-1)^i binom(N,i) |A|", 0, 0, ""};
  SuiteCheck opt{"trc <= pattern cost", 0, 0, ""};
  for (const Family& fam : fams) {
    Group g = Group::parse(fam.spec);
    if (g.kind() != Group::Kind::kWreath) throw UsageError("pattern suite needs a wreath product, got " + fam.spec);
    for (int n : fam.ns) {
      for (std::size_t s = 0; s < g.generators().size(); ++s) {
        const Element& z = g.generators().element(s);
        std::string label = fam.spec + " n=" + std::to_string(n) + " " + g.generators().label(s);
        WreathPattern wp = build_wreath_pattern(g, n, z, fam.inner, cfg.budget_vertices);
        const WreathBound& b = wp.report;
        auto [src, dst] = marginals(*wp.ball, wp.pattern);
        ++marg.cases;
        if (!(src == wp.source) || !(dst == wp.target)) fail(r, marg, {{"instance", label}});
        ++caps.cases;
        if (!b.caps_hold) fail(r, caps, {{"instance", label}});
        if (b.base_move) {
          ++counts.cases;
          bool ok = true;
          for (const auto& row : b.rows) ok = ok && row.enumerated == row.count * b.cells;
          if (!ok) fail(r, counts, {{"instance", label}});
          if (b.cost > b.bound + b.exact_all_off) {
            r.notes.push_back(label + ": pattern cost " + to_string(b.cost) + " exceeds stated bound " +
                              to_string(b.bound) + " + all-off " + to_string(b.exact_all_off));
          }
        }
        auto need = required_radius(wp.source, wp.target);
        if (!need || *need > 12) continue;
        try {
          auto ball = ball_for_measures(wp.source, wp.target, cfg.budget_vertices);
          ++opt.cases;
          Rational t = trc_flow(wp.source, wp.target, *ball).cost;
          if (t > b.cost) fail(r, opt, {{"instance", label}, {"trc", to_string(t)}, {"cost", to_string(b.cost)}});
        } catch (const ResourceError&) {
          r.notes.push_back(label + ": optimal trc skipped (ball budget)");
        }
      }
    }
  }
  r.checks = {marg, caps, counts, opt};
  return r;
}

}  // namespace

Measure random_probability_measure(const BallIndex& ball, std::mt19937_64& rng, int atoms, int reach) {
  std::vector<std::size_t> pool;
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
    if (ball.dist(v) <= reach) pool.push_back(v);
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> weight(1, 7);
  std::vector<std::pair<std::size_t, int>> raw;
  long total = 0;
  for (int a = 0; a < atoms; ++a) {
    raw.emplace_back(pool[pick(rng)], weight(rng));
    total += raw.back().second;
  }
  Measure m(ball.group());
  for (auto& [v, w] : raw) m.add(ball.vertex(v), make_rational(w, total));
  return m;
}

bool SuiteReport::passed() const {
  for (const auto& c : checks) {
    if (c.failures > 0) return false;
  }
  return true;
}

std::string SuiteReport::csv() const {
  std::ostringstream out;
  out << "# suite=" << suite << " seed=" << seed << " result=" << (passed() ? "pass" : "fail") << "\n";
  out << "check,cases,failures,detail\n";
  for (const auto& c : checks) {
    out << '"' << c.name << "\"," << c.cases << ',' << c.failures << ",\"" << c.detail << "\"\n";
  }
  for (const auto& n : notes) out << "# note: " << n << "\n";
  if (!reproducer.empty()) out << "# reproducer: " << reproducer << "\n";
  return out.str();
}

std::string SuiteReport::json() const {
  ojson j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["passed"] = passed();
  j["checks"] = ojson::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"cases", c.cases}, {"failures", c.failures}, {"detail", c.detail}});
  }
  j["notes"] = notes;
  j["reproducer"] = reproducer.empty() ? ojson() : ojson::parse(reproducer);
  return j.dump();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"telescoping", "oracle",     "interpolation", "decay",
                                                 "binomial",    "controlled", "pattern"};
  return names;
}

SuiteReport run_suite(const std::string& suite, const ExperimentConfig& cfg) {
  if (suite == "telescoping") return telescoping(cfg);
  if (suite == "oracle") return oracle(cfg);
  if (suite == "interpolation") return interpolation(cfg);
  if (suite == "decay") return decay(cfg);
  if (suite == "binomial") return binomial(cfg);
  if (suite == "controlled") return controlled(cfg);
  if (suite == "pattern") return pattern(cfg);
  throw UsageError("unknown suite '" + suite + "'");
}

}  // namespace trlab
