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

#include "trlab/runner.hpp"

#include <random>
#include <sstream>

#include "json.hpp"
#include "trlab/cohomology.hpp"
#include "trlab/errors.hpp"
#include "trlab/folner.hpp"
#include "trlab/suites.hpp"
#include "trlab/transport.hpp"

namespace trlab {

using ojson = nlohmann::ordered_json;

namespace {

Group require_group(const ExperimentConfig& cfg) {
  if (cfg.group.empty()) throw UsageError("missing --group");
  return Group::parse(cfg.group);
}

std::string family_of(const Group& g, const ExperimentConfig& cfg) {
  if (cfg.folner != "auto") return cfg.folner;
  return g.kind() == Group::Kind::kWreath ? "wreath" : "box";
}

std::string join(const std::vector<int>& ns) {
  std::string s;
  for (int n : ns) s += (s.empty() ? "" : ",") + std::to_string(n);
  return s;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CommandResult certificate(const ExperimentConfig& cfg) {
  Group g = require_group(cfg);
  std::vector<int> ns = cfg.ns.empty() ? parse_int_list("1..4") : cfg.ns;
  CertificateOptions opts;
  opts.family = family_of(g, cfg);
  opts.inner = cfg.inner;
  opts.vertex_budget = cfg.budget_vertices;
  auto rows = amenability_certificate(g, ns, opts);

  CommandResult r;
  bool complete = true;
  for (const auto& row : rows) complete = complete && row.trc.has_value();
  Rational K = rows.empty() ? Rational(0) : rows.back().running_K;
  if (!complete) {
    r.exit_code = kExitBudget;
    r.message = "certificate incomplete: some rows hit a budget (see notes)";
  } else if (K > cfg.threshold) {
    r.exit_code = kExitFailed;
    r.message = "K = " + to_string(K) + " exceeds threshold " + to_string(cfg.threshold);
  } else {
    r.message = "K = " + to_string(K);
  }
  if (cfg.format == "json") {
    ojson j;
    j["command"] = "certificate";
    j["group"] = g.spec();
    j["family"] = opts.family;
    j["inner"] = opts.inner;
    j["seed"] = cfg.seed;
    j["threshold"] = to_string(cfg.threshold);
    j["K"] = to_string(K);
    j["rows"] = ojson::parse(certificate_json(rows));
    r.output = j.dump() + "\n";
  } else {
    r.output = "# certificate group=" + g.spec() + " family=" + opts.family + " n=" + join(ns) +
               " seed=" + std::to_string(cfg.seed) + "\n" + certificate_csv(rows);
  }
  return r;
}

CommandResult verify(const ExperimentConfig& cfg, const std::string& suite) {
  if (suite.empty()) throw UsageError("verify needs a suite name");
  SuiteReport rep = run_suite(suite, cfg);
  CommandResult r;
  r.exit_code = rep.passed() ? kExitOk : kExitFailed;
  r.output = cfg.format == "json" ? rep.json() + "\n" : rep.csv();
  r.message = suite + (rep.passed() ? ": pass" : ": FAIL");
  if (!rep.reproducer.empty()) r.message += " reproducer " + rep.reproducer;
  return r;
}

std::map<std::size_t, double> boundary_values(const BallIndex& ball, const ExperimentConfig& cfg) {
  const std::string& spec = cfg.boundary;
  const Group& g = ball.group();
  std::map<std::size_t, double> out;
  auto sphere = [&](auto&& value) {
    for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
      if (ball.dist(v) == ball.radius()) out[v] = value(v);
    }
  };
  auto rest = [&](std::size_t prefix) { return spec.substr(prefix); };
  if (spec == "random") {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(-1, 1);
    sphere([&](std::size_t) { return U(rng); });
  } else if (spec.rfind("constant:", 0) == 0) {
    double c = to_double(parse_rational(rest(9)));
    sphere([&](std::size_t) { return c; });
  } else if (spec.rfind("coordinate:", 0) == 0) {
    auto idx = parse_int_list(rest(11));
    if (idx.size() != 1 || idx[0] < 0) throw UsageError("boundary coordinate:<i> needs one index");
    auto i = static_cast<std::size_t>(idx[0]);
    sphere([&](std::size_t v) {
      const auto& c = ball.vertex(v).coords;
      if (i >= c.size()) throw UsageError("boundary coordinate index out of range");
      return static_cast<double>(c[i]);
    });
  } else if (spec.rfind("values:", 0) == 0) {
    std::string body = rest(7);
    std::size_t start = 0;
    while (start < body.size()) {
      std::size_t end = body.find(';', start);
      std::string item = body.substr(start, end == std::string::npos ? std::string::npos : end - start);
      std::size_t eq = item.rfind('=');
      if (eq == std::string::npos) throw UsageError("boundary values need element=value items");
      std::size_t v = ball.index_of(g.parse_element(item.substr(0, eq)));
      out[v] = to_double(parse_rational(item.substr(eq + 1)));
      if (end == std::string::npos) break;
      start = end + 1;
    }
  } else {
    throw UsageError("unknown boundary spec '" + spec + "' (random, constant:c, coordinate:i, values:x=v;...)");
  }
  return out;
}

CommandResult pharmonic(const ExperimentConfig& cfg) {
  Group g = require_group(cfg);
  std::optional<Rational> pq = cfg.ps.empty() ? std::optional<Rational>(Rational(2)) : cfg.ps.front();
  if (!pq) throw UsageError("pharmonic needs a finite p");
  double p = to_double(*pq);
  BallIndex ball(g, g.identity(), cfg.radius, cfg.budget_vertices);
  auto bd = boundary_values(ball, cfg);
  PHarmonicOptions opts{cfg.tol, cfg.max_iter};

  CommandResult r;
  PHarmonicResult sol;
  try {
    sol = p_harmonic_solve(ball, bd, p, opts);
  } catch (const NonConvergenceError& e) {
    r.exit_code = kExitNonConvergence;
    r.message = e.what();
    ojson j{{"command", "pharmonic"}, {"group", g.spec()}, {"radius", cfg.radius}, {"p", format_p(pq)},
            {"converged", false}, {"residual", format_double(e.last_residual())}};
    r.output = j.dump() + "\n";
    return r;
  }
  double energy = p_dirichlet_energy(ball, sol.h.values, p);
  r.message = "residual " + format_double(sol.residual) + " after " + std::to_string(sol.iterations) + " iterations";
  if (cfg.format == "json") {
    ojson j;
    j["command"] = "pharmonic";
    j["group"] = g.spec();
    j["radius"] = cfg.radius;
    j["p"] = format_p(pq);
    j["boundary"] = cfg.boundary;
    j["seed"] = cfg.seed;
    j["converged"] = true;
    j["residual"] = format_double(sol.residual);
    j["energy"] = format_double(energy);
    j["iterations"] = sol.iterations;
    j["coordinate_sweeps"] = sol.coordinate_sweeps;
    ojson hist = ojson::array();
    for (double e : sol.energy) hist.push_back(format_double(e));
    j["energy_history"] = hist;
    ojson values = ojson::object();
    for (std::size_t v = 0; v < ball.num_vertices(); ++v) values[g.format(ball.vertex(v))] = format_double(sol.h.values[v]);
    j["values"] = values;
    r.output = j.dump() + "\n";
  } else {
    std::ostringstream out;
    out << "# pharmonic group=" << g.spec() << " radius=" << cfg.radius << " p=" << format_p(pq)
        << " boundary=" << cfg.boundary << " seed=" << cfg.seed << " residual=" << format_double(sol.residual)
        << " energy=" << format_double(energy) << " iterations=" << sol.iterations << "\n";
    out << "vertex,dist,value\n";
    for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
      out << quoted(g.format(ball.vertex(v))) << ',' << ball.dist(v) << ',' << format_double(sol.h.values[v]) << '\n';
    }
    r.output = out.str();
  }
  return r;
}

CommandResult ball_dump(const ExperimentConfig& cfg) {
  Group g = require_group(cfg);
  BallIndex ball(g, g.identity(), cfg.radius, cfg.budget_vertices);
  CommandResult r;
  r.message = std::to_string(ball.num_vertices()) + " vertices, " + std::to_string(ball.num_edges()) + " edges";
  if (cfg.format == "json") {
    r.output = ball.to_json() + "\n";
  } else {
    std::ostringstream out;
    out << "# ball group=" << g.spec() << " radius=" << cfg.radius << "\n";
    out << "index,vertex,dist\n";
    for (std::size_t v = 0; v < ball.num_vertices(); ++v) {
      out << v << ',' << quoted(g.format(ball.vertex(v))) << ',' << ball.dist(v) << '\n';
    }
    r.output = out.str();
  }
  return r;
}

CommandResult folner_table(const ExperimentConfig& cfg) {
  Group g = require_group(cfg);
  std::vector<int> ns = cfg.ns.empty() ? parse_int_list("1..4") : cfg.ns;
  std::string family = family_of(g, cfg);
  std::vector<FolnerSet> sets;
  for (int n : ns) sets.push_back(family == "wreath" ? wreath_folner(g, n, cfg.inner) : box_folner(g, n));
  CommandResult r;
  r.message = std::to_string(sets.size()) + " sets";
  if (cfg.format == "json") {
    r.output = folner_table_json(sets, ns) + "\n";
  } else {
    r.output = "# folner-table group=" + g.spec() + " family=" + family + " n=" + join(ns) + "\n" +
               folner_table_csv(sets, ns);
  }
  return r;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"certificate", "verify", "pharmonic", "ball-dump", "folner-table"};
  return names;
}

CommandResult run_command(const std::string& command, const ExperimentConfig& cfg, const std::string& suite) {
  try {
    if (command == "certificate") return certificate(cfg);
    if (command == "verify") return verify(cfg, suite);
    if (command == "pharmonic") return pharmonic(cfg);
    if (command == "ball-dump") return ball_dump(cfg);
    if (command == "folner-table") return folner_table(cfg);
    throw UsageError("unknown command '" + command + "'");
  } catch (const UsageError& e) {
    return {kExitUsage, "", e.what()};
  } catch (const DomainError& e) {
    return {kExitUsage, "", e.what()};
  } catch (const ResourceError& e) {
    return {kExitBudget, "", e.what()};
  } catch (const NonConvergenceError& e) {
    return {kExitNonConvergence, "", e.what()};
  } catch (const std::exception& e) {
    return {kExitInternal, "", std::string("internal error: ") + e.what()};
  }
}

}  // namespace trlab
