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
#include "trlab/trlab.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "json.hpp"
#include "trlab/cayley.hpp"
#include "trlab/config.hpp"
#include "trlab/errors.hpp"
#include "trlab/group.hpp"
#include "trlab/measure.hpp"
#include "trlab/runner.hpp"
#include "trlab/transport.hpp"

struct trlab_config {
  trlab::ExperimentConfig cfg;
};

struct trlab_result {
  trlab::CommandResult result;
};

struct trlab_group {
  trlab::Group group;
};

struct trlab_ball {
  trlab::BallIndex ball;
};

namespace {

thread_local std::string last_error;

trlab_status fail(trlab_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
trlab_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return TRLAB_OK;
  } catch (const trlab::UsageError& e) {
    return fail(TRLAB_USAGE, e.what());
  } catch (const trlab::DomainError& e) {
    return fail(TRLAB_DOMAIN, e.what());
  } catch (const trlab::ResourceError& e) {
    return fail(TRLAB_RESOURCE, e.what());
  } catch (const trlab::NonConvergenceError& e) {
    return fail(TRLAB_NONCONVERGENCE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(TRLAB_USAGE, std::string("json: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(TRLAB_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(TRLAB_INTERNAL, e.what());
  } catch (...) {
    return fail(TRLAB_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw trlab::UsageError(std::string(what) + " is null");
}

trlab::Measure parse_measure(const trlab::Group& g, const char* text) {
  auto j = nlohmann::json::parse(text);
  if (j.is_object() && j.contains("atoms")) j = j.at("atoms");
  if (!j.is_object()) throw trlab::UsageError("measure: expected a JSON object");
  trlab::Measure m(g);
  for (const auto& [key, value] : j.items()) {
    std::string mass = value.is_string() ? value.get<std::string>() : value.dump();
    m.add(g.parse_element(key), trlab::parse_rational(mass));
  }
  if (!m.is_probability()) throw trlab::DomainError("measure: not a probability measure");
  return m;
}

}  // namespace

extern "C" {

const char* trlab_version(void) { return "1.0.0"; }

const char* trlab_status_name(trlab_status status) {
  switch (status) {
    case TRLAB_OK: return "ok";
    case TRLAB_USAGE: return "usage";
    case TRLAB_DOMAIN: return "domain";
    case TRLAB_RESOURCE: return "resource";
    case TRLAB_NONCONVERGENCE: return "nonconvergence";
    case TRLAB_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* trlab_last_error(void) { return last_error.c_str(); }

void trlab_string_free(char* s) { std::free(s); }

trlab_status trlab_config_create(trlab_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new trlab_config{};
  });
}

void trlab_config_free(trlab_config* cfg) { delete cfg; }

trlab_status trlab_config_set(trlab_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    cfg->cfg.set(key, value);
  });
}

trlab_status trlab_config_load(trlab_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "config");
    require(path, "path");
    cfg->cfg = trlab::load_config(path, cfg->cfg);
  });
}

trlab_status trlab_config_get(const trlab_config* cfg, const char* key, char** value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    *value = copy_string(cfg->cfg.get(key));
  });
}

trlab_status trlab_run(const trlab_config* cfg, const char* command, const char* suite, trlab_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(command, "command");
    require(out, "out");
    auto r = std::make_unique<trlab_result>();
    r->result = trlab::run_command(command, cfg->cfg, suite ? suite : "");
    *out = r.release();
  });
}

int trlab_result_exit_code(const trlab_result* r) { return r ? r->result.exit_code : trlab::kExitInternal; }

const char* trlab_result_output(const trlab_result* r) { return r ? r->result.output.c_str() : ""; }

const char* trlab_result_message(const trlab_result* r) { return r ? r->result.message.c_str() : ""; }

void trlab_result_free(trlab_result* r) { delete r; }

trlab_status trlab_group_parse(const char* spec, trlab_group** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = new trlab_group{trlab::Group::parse(spec)};
  });
}

void trlab_group_free(trlab_group* g) { delete g; }

size_t trlab_group_num_generators(const trlab_group* g) { return g ? g->group.generators().size() : 0; }

trlab_status trlab_group_generator_label(const trlab_group* g, size_t i, char** label) {
  return guarded([&] {
    require(g, "group");
    require(label, "label");
    if (i >= g->group.generators().size()) throw trlab::UsageError("generator index out of range");
    *label = copy_string(g->group.generators().label(i));
  });
}

trlab_status trlab_group_word_length(const trlab_group* g, const char* element, int64_t* length) {
  return guarded([&] {
    require(g, "group");
    require(element, "element");
    require(length, "length");
    auto n = g->group.word_length(g->group.parse_element(element));
    if (!n) throw trlab::DomainError("word length unavailable for " + g->group.spec());
    *length = *n;
  });
}

trlab_status trlab_ball_create(const trlab_group* g, int radius, size_t vertex_budget, trlab_ball** out) {
  return guarded([&] {
    require(g, "group");
    require(out, "out");
    if (radius < 0) throw trlab::UsageError("radius must be non-negative");
    *out = new trlab_ball{trlab::BallIndex(g->group, g->group.identity(), radius, vertex_budget)};
  });
}

void trlab_ball_free(trlab_ball* b) { delete b; }

size_t trlab_ball_num_vertices(const trlab_ball* b) { return b ? b->ball.num_vertices() : 0; }

size_t trlab_ball_num_edges(const trlab_ball* b) { return b ? b->ball.num_edges() : 0; }

trlab_status trlab_ball_to_json(const trlab_ball* b, char** json) {
  return guarded([&] {
    require(b, "ball");
    require(json, "json");
    *json = copy_string(b->ball.to_json());
  });
}

trlab_status trlab_trc(const trlab_group* g, const char* xi_json, const char* phi_json, size_t vertex_budget,
                       char** cost) {
  return guarded([&] {
    require(g, "group");
    require(xi_json, "xi");
    require(phi_json, "phi");
    require(cost, "cost");
    trlab::Measure xi = parse_measure(g->group, xi_json);
    trlab::Measure phi = parse_measure(g->group, phi_json);
    auto ball = trlab::ball_for_measures(xi, phi, vertex_budget);
    *cost = copy_string(trlab::to_string(trlab::trc_flow(xi, phi, *ball).cost));
  });
}

}  // extern "C"
