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
// Command-line front end. Uses only the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trlab/trlab.h"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

int report(trlab_status status) {
  std::cerr << "trlab: " << trlab_status_name(status) << ": " << trlab_last_error() << "\n";
  if (status == TRLAB_USAGE || status == TRLAB_DOMAIN) return kExitUsage;
  if (status == TRLAB_RESOURCE) return 2;
  if (status == TRLAB_NONCONVERGENCE) return 3;
  return kExitInternal;
}

struct Flag {
  const char* key;
  const char* help;
};

const std::vector<Flag> kFlags = {
    {"group", "group spec, e.g. Z^2, Heis, wreath(Z_2,Z)"},
    {"folner", "Folner family: auto, box or wreath"},
    {"inner", "inner scale for iterated wreath products (0: automatic)"},
    {"n", "scale list, e.g. 1..6 or 2,4,8"},
    {"p", "exponent list, e.g. 1,3/2,2,inf"},
    {"seed", "random seed"},
    {"budget-vertices", "maximum number of ball vertices"},
    {"budget-atoms", "maximum support size for the coupling oracle"},
    {"out", "output file (default: stdout)"},
    {"format", "csv or json"},
    {"threshold", "largest acceptable certificate constant"},
    {"trials", "random prices per operator-bound check"},
    {"cases", "random cases per verification suite (0: suite default)"},
    {"radius", "ball radius"},
    {"boundary", "random, constant:c, coordinate:i or values:elem=v;..."},
    {"tol", "p-harmonic residual tolerance"},
    {"max-iter", "p-harmonic iteration limit"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport and cohomology experiments on finitely generated groups"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(trlab_version()));

  std::string config_path;
  app.add_option("--config", config_path, "key = value file; flags override it");
  std::map<std::string, std::string> values;
  for (const auto& f : kFlags) app.add_option(std::string("--") + f.key, values[f.key], f.help);

  std::string suite;
  app.add_subcommand("certificate", "amenability certificate table");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "telescoping, oracle, interpolation, decay, binomial, controlled or pattern")
      ->required();
  app.add_subcommand("pharmonic", "solve the p-harmonic Dirichlet problem on a ball");
  app.add_subcommand("ball-dump", "list the vertices of a ball");
  app.add_subcommand("folner-table", "Folner ratios of a family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  trlab_config* cfg = nullptr;
  if (auto s = trlab_config_create(&cfg); s != TRLAB_OK) return report(s);
  int exit_code = 0;
  trlab_result* result = nullptr;
  char* out_path = nullptr;
  do {
    if (!config_path.empty()) {
      if (auto s = trlab_config_load(cfg, config_path.c_str()); s != TRLAB_OK) {
        exit_code = report(s);
        break;
      }
    }
    trlab_status s = TRLAB_OK;
    for (const auto& f : kFlags) {
      if (app.count(std::string("--") + f.key) == 0) continue;
      if ((s = trlab_config_set(cfg, f.key, values[f.key].c_str())) != TRLAB_OK) break;
    }
    if (s != TRLAB_OK) {
      exit_code = report(s);
      break;
    }
    std::string command = app.get_subcommands().front()->get_name();
    if ((s = trlab_run(cfg, command.c_str(), suite.c_str(), &result)) != TRLAB_OK) {
      exit_code = report(s);
      break;
    }
    if ((s = trlab_config_get(cfg, "out", &out_path)) != TRLAB_OK) {
      exit_code = report(s);
      break;
    }
    exit_code = trlab_result_exit_code(result);
    std::string output = trlab_result_output(result);
    if (!output.empty() && output.back() != '\n') output += '\n';
    if (!output.empty()) {
      if (*out_path != '\0') {
        std::ofstream file(out_path);
        if (!(file << output)) {
          std::cerr << "trlab: cannot write " << out_path << "\n";
          exit_code = kExitUsage;
        }
      } else {
        std::cout << output;
      }
    }
    if (*trlab_result_message(result) != '\0') std::cerr << trlab_result_message(result) << "\n";
  } while (false);

  trlab_string_free(out_path);
  trlab_result_free(result);
  trlab_config_free(cfg);
  return exit_code;
}
