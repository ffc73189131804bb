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
#ifndef TRLAB_TRLAB_H_
#define TRLAB_TRLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TRLAB_API __declspec(dllexport)
#else
#define TRLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

// Every call returns a status. On failure the message of the most recent
// error on the calling thread is available from trlab_last_error().
typedef enum {
  TRLAB_OK = 0,
  TRLAB_USAGE = 1,           // malformed argument or configuration
  TRLAB_DOMAIN = 2,          // input outside the mathematical domain
  TRLAB_RESOURCE = 3,        // vertex or atom budget exceeded
  TRLAB_NONCONVERGENCE = 4,  // iterative solver did not converge
  TRLAB_INTERNAL = 5,
} trlab_status;

typedef struct trlab_config trlab_config;
typedef struct trlab_result trlab_result;
typedef struct trlab_group trlab_group;
typedef struct trlab_ball trlab_ball;

TRLAB_API const char* trlab_version(void);
TRLAB_API const char* trlab_status_name(trlab_status status);
TRLAB_API const char* trlab_last_error(void);
// Frees strings returned through char** out-parameters.
TRLAB_API void trlab_string_free(char* s);

// Configuration. Keys are the command-line flag names without dashes
// ("group", "n", "p", "seed", "budget-vertices", ...).
TRLAB_API trlab_status trlab_config_create(trlab_config** out);
TRLAB_API void trlab_config_free(trlab_config* cfg);
TRLAB_API trlab_status trlab_config_set(trlab_config* cfg, const char* key, const char* value);
// Applies a "key = value" file on top of the current settings.
TRLAB_API trlab_status trlab_config_load(trlab_config* cfg, const char* path);
TRLAB_API trlab_status trlab_config_get(const trlab_config* cfg, const char* key, char** value);

// Runs certificate, verify, pharmonic, ball-dump or folner-table. `suite`
// is used by verify only and may be NULL otherwise. Failures of the command
// itself are reported through the result's exit code, not the status.
TRLAB_API trlab_status trlab_run(const trlab_config* cfg, const char* command, const char* suite,
                                 trlab_result** out);
TRLAB_API int trlab_result_exit_code(const trlab_result* r);
TRLAB_API const char* trlab_result_output(const trlab_result* r);
TRLAB_API const char* trlab_result_message(const trlab_result* r);
TRLAB_API void trlab_result_free(trlab_result* r);

// Groups: "Z", "Z^2", "Z_5", "Heis", "wreath(Z_2,Z)", ...
TRLAB_API trlab_status trlab_group_parse(const char* spec, trlab_group** out);
TRLAB_API void trlab_group_free(trlab_group* g);
TRLAB_API size_t trlab_group_num_generators(const trlab_group* g);
TRLAB_API trlab_status trlab_group_generator_label(const trlab_group* g, size_t i, char** label);
TRLAB_API trlab_status trlab_group_word_length(const trlab_group* g, const char* element, int64_t* length);

// Ball of the given radius around the identity.
TRLAB_API trlab_status trlab_ball_create(const trlab_group* g, int radius, size_t vertex_budget, trlab_ball** out);
TRLAB_API void trlab_ball_free(trlab_ball* b);
TRLAB_API size_t trlab_ball_num_vertices(const trlab_ball* b);
TRLAB_API size_t trlab_ball_num_edges(const trlab_ball* b);
TRLAB_API trlab_status trlab_ball_to_json(const trlab_ball* b, char** json);

// Exact transport cost between two finitely supported probability measures
// given as JSON objects {"<element>": "p/q", ...}. The cost is written as
// a reduced fraction.
TRLAB_API trlab_status trlab_trc(const trlab_group* g, const char* xi_json, const char* phi_json,
                                 size_t vertex_budget, char** cost);

#ifdef __cplusplus
}
#endif

#endif  // TRLAB_TRLAB_H_
