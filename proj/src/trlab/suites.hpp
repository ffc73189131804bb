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

#include <random>
#include <string>
#include <vector>

#include "trlab/cayley.hpp"
#include "trlab/config.hpp"
#include "trlab/measure.hpp"

namespace trlab {

struct SuiteCheck {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<SuiteCheck> checks;
  std::string reproducer;  // JSON of the first failing inputs, empty if none
  std::vector<std::string> notes;  // informational lines, never failures

  bool passed() const;
  std::string csv() const;
  std::string json() const;
};

const std::vector<std::string>& suite_names();

// Runs one of telescoping, oracle, interpolation, decay, binomial,
// controlled, pattern. Group, n, p, trials, cases and seed come from cfg.
SuiteReport run_suite(const std::string& suite, const ExperimentConfig& cfg);

// A random probability measure with `atoms` draws (weights 1..7) among the
// vertices at distance <= reach from the centre.
Measure random_probability_measure(const BallIndex& ball, std::mt19937_64& rng, int atoms, int reach);

}  // namespace trlab
