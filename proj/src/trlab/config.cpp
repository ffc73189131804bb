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

#include "trlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "trlab/errors.hpp"

namespace trlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("config: bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (std::string_view part : split(text, ',')) {
    if (part.empty()) throw UsageError("config: empty entry in list '" + std::string(text) + "'");
    auto dots = part.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_number<int>("n", part));
      continue;
    }
    int lo = parse_number<int>("n", part.substr(0, dots));
    int hi = parse_number<int>("n", part.substr(dots + 2));
    if (hi < lo) throw UsageError("config: empty range '" + std::string(part) + "'");
    for (int i = lo; i <= hi; ++i) out.push_back(i);
  }
  return out;
}

std::vector<std::optional<Rational>> parse_p_list(std::string_view text) {
  std::vector<std::optional<Rational>> out;
  for (std::string_view part : split(text, ',')) {
    if (part == "inf" || part == "infinity") {
      out.emplace_back(std::nullopt);
      continue;
    }
    Rational p = parse_rational(part);
    if (p < 1) throw UsageError("config: p must be at least 1, got " + std::string(part));
    out.emplace_back(p);
  }
  return out;
}

std::string format_p(const std::optional<Rational>& p) {
  if (!p) return "inf";
  return p->get_den() == 1 ? p->get_num().get_str() : to_string(*p);
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {"group", "folner", "inner", "n", "p", "seed", "budget-vertices",
                                             "budget-atoms", "out", "format", "threshold", "trials", "cases",
                                             "radius", "boundary", "tol", "max-iter"};
  return k;
}

void ExperimentConfig::set(std::string_view key, std::string_view raw) {
  std::string_view value = trim(raw);
  if (key == "group") {
    group = value;
  } else if (key == "folner") {
    if (value != "auto" && value != "box" && value != "wreath") {
      throw UsageError("config: folner must be auto, box or wreath");
    }
    folner = value;
  } else if (key == "inner") {
    inner = parse_number<int>(key, value);
    if (inner < 0) throw UsageError("config: inner must be non-negative");
  } else if (key == "n") {
    ns = parse_int_list(value);
  } else if (key == "p") {
    ps = parse_p_list(value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "budget-vertices") {
    budget_vertices = parse_number<std::size_t>(key, value);
  } else if (key == "budget-atoms") {
    budget_atoms = parse_number<std::size_t>(key, value);
  } else if (key == "out") {
    out = value;
  } else if (key == "format") {
    if (value != "csv" && value != "json") throw UsageError("config: format must be csv or json");
    format = value;
  } else if (key == "threshold") {
    threshold = parse_rational(value);
  } else if (key == "trials") {
    trials = parse_number<int>(key, value);
    if (trials < 1) throw UsageError("config: trials must be positive");
  } else if (key == "cases") {
    cases = parse_number<int>(key, value);
    if (cases < 0) throw UsageError("config: cases must be non-negative");
  } else if (key == "radius") {
    radius = parse_number<int>(key, value);
    if (radius < 0) throw UsageError("config: radius must be non-negative");
  } else if (key == "boundary") {
    boundary = value;
  } else if (key == "tol") {
    tol = parse_number<double>(key, value);
    if (!(tol > 0)) throw UsageError("config: tol must be positive");
  } else if (key == "max-iter") {
    max_iter = parse_number<int>(key, value);
    if (max_iter < 1) throw UsageError("config: max-iter must be positive");
  } else {
    throw UsageError("config: unknown key '" + std::string(key) + "'");
  }
}

std::string ExperimentConfig::get(std::string_view key) const {
  auto join = [](const auto& items, auto fmt) {
    std::string s;
    for (const auto& x : items) s += (s.empty() ? "" : ",") + fmt(x);
    return s;
  };
  if (key == "group") return group;
  if (key == "folner") return folner;
  if (key == "inner") return std::to_string(inner);
  if (key == "n") return join(ns, [](int n) { return std::to_string(n); });
  if (key == "p") return join(ps, [](const std::optional<Rational>& p) { return format_p(p); });
  if (key == "seed") return std::to_string(seed);
  if (key == "budget-vertices") return std::to_string(budget_vertices);
  if (key == "budget-atoms") return std::to_string(budget_atoms);
  if (key == "out") return out;
  if (key == "format") return format;
  if (key == "threshold") return to_string(threshold);
  if (key == "trials") return std::to_string(trials);
  if (key == "cases") return std::to_string(cases);
  if (key == "radius") return std::to_string(radius);
  if (key == "boundary") return boundary;
  if (key == "tol") return format_double(tol);
  if (key == "max-iter") return std::to_string(max_iter);
  throw UsageError("config: unknown key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig cfg) {
  std::set<std::string> seen;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    if (!seen.insert(key).second) {
      throw UsageError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const UsageError& e) {
      throw UsageError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

}  // namespace trlab
