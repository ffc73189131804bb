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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trlab/rational.hpp"

namespace trlab {

// Settings shared by all commands. Keys mirror the command-line flags
// without the leading dashes.
struct ExperimentConfig {
  std::string group;
  std::string folner = "auto";  // auto | box | wreath
  int inner = 0;
  std::vector<int> ns;
  std::vector<std::optional<Rational>> ps;  // nullopt is p = infinity
  std::uint64_t seed = 1;
  std::size_t budget_vertices = 2'000'000;
  std::size_t budget_atoms = 40;
  std::string out;
  std::string format = "csv";
  Rational threshold = 2;
  int trials = 100;
  int cases = 0;  // 0: each suite's own default
  int radius = 4;
  std::string boundary = "random";
  double tol = 1e-9;
  int max_iter = 10000;

  // Throws UsageError for unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  // The value of a key in the syntax set() accepts.
  std::string get(std::string_view key) const;
  static const std::vector<std::string>& keys();
};

// "key = value" lines; '#' starts a comment. A key may appear once.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

// "1..12", "2,3,4", "1..3,6".
std::vector<int> parse_int_list(std::string_view text);
// "1,3/2,2,inf".
std::vector<std::optional<Rational>> parse_p_list(std::string_view text);
std::string format_p(const std::optional<Rational>& p);

}  // namespace trlab
