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

#include <sstream>

#include "json.hpp"
#include "trlab/errors.hpp"
#include "trlab/transport.hpp"

namespace trlab {

std::vector<CertificateRow> amenability_certificate(const Group& group, const std::vector<int>& ns,
                                                    const CertificateOptions& opts) {
  if (opts.family != "box" && opts.family != "wreath") throw UsageError("unknown Folner family " + opts.family);
  const GeneratingSet& S = group.generators();
  std::vector<CertificateRow> rows;
  Rational K = 0;
  for (int n : ns) {
    std::vector<CertificateRow> block;
    for (std::size_t s = 0; s < S.size(); ++s) block.push_back({n, S.label(s), {}, {}, {}, 0, ""});
    try {
      FolnerSet F = opts.family == "box" ? box_folner(group, n) : wreath_folner(group, n, opts.inner);
      Measure target = vee(uniform_measure(F, opts.vertex_budget));
      std::vector<Measure> sources;
      std::optional<int> radius = 0;
      for (std::size_t s = 0; s < S.size(); ++s) {
        sources.push_back(act(target, S.element(s), Action::kRho));
        auto r = required_radius(sources.back(), target);
        radius = r && radius ? std::optional<int>(std::max(*r, *radius)) : std::nullopt;
      }
      std::shared_ptr<const BallIndex> shared;
      if (radius) shared = std::make_shared<const BallIndex>(group, group.identity(), *radius, opts.vertex_budget);
      for (std::size_t s = 0; s < S.size(); ++s) {
        CertificateRow& row = block[s];
        try {
          auto ball = shared ? shared : ball_for_measures(sources[s], target, opts.vertex_budget);
          row.trc = trc_flow(sources[s], target, *ball).cost;
          if (opts.family == "wreath") {
            WreathPattern wp = build_wreath_pattern(group, n, S.element(s), opts.inner, opts.vertex_budget);
            row.pattern_cost = wp.report.cost;
            row.stated_bound = wp.report.bound;
          }
        } catch (const Error& e) {
          row.note = e.what();
        }
      }
    } catch (const Error& e) {
      for (auto& row : block) row.note = e.what();
    }
    for (auto& row : block) {
      if (row.trc) K = std::max(K, *row.trc);
      row.running_K = K;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::string opt(const std::optional<Rational>& q) { return q ? to_string(*q) : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string certificate_csv(const std::vector<CertificateRow>& rows) {
  std::ostringstream out;
  out << "n,generator,trc,pattern_cost,stated_bound,K,note\n";
  for (const auto& r : rows) {
    out << r.n << "," << csv_field(r.generator) << "," << opt(r.trc) << "," << opt(r.pattern_cost) << ","
        << opt(r.stated_bound) << "," << to_string(r.running_K) << "," << csv_field(r.note) << "\n";
  }
  return out.str();
}

std::string certificate_json(const std::vector<CertificateRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["generator"] = r.generator;
    j["trc"] = r.trc ? nlohmann::ordered_json(to_string(*r.trc)) : nlohmann::ordered_json();
    j["pattern_cost"] = r.pattern_cost ? nlohmann::ordered_json(to_string(*r.pattern_cost)) : nlohmann::ordered_json();
    j["stated_bound"] = r.stated_bound ? nlohmann::ordered_json(to_string(*r.stated_bound)) : nlohmann::ordered_json();
    j["K"] = to_string(r.running_K);
    j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

}  // namespace trlab
