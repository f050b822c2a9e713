// Copyright 2026 The athermal-markov Authors
//
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

#ifndef ATHERMAL_ATHERMAL_H_
#define ATHERMAL_ATHERMAL_H_

/* C interface to the athermal-markov library. Every function returns an
 * am_status; on failure am_last_error() holds a message for the calling
 * thread. Strings handed out through char** must be released with
 * am_string_free. Pointers inside am_row / am_check stay valid until the
 * owning result is freed. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AM_API __declspec(dllexport)
#else
#define AM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum am_status {
  AM_OK = 0,
  AM_ERR_INVALID_ARGUMENT = 1,
  AM_ERR_CONFIG = 2,
  AM_ERR_IO = 3,
  AM_ERR_INVALID_STATE = 4,
  AM_ERR_NOT_HERMITIAN = 5,
  AM_ERR_NOT_UNITARY = 6,
  AM_ERR_NOT_ENERGY_PRESERVING = 7,
  AM_ERR_DEGENERATE_SPECTRUM = 8,
  AM_ERR_PERTURBATION_TOO_STRONG = 9,
  AM_ERR_UNDEFINED_QUANTITY = 10,
  AM_ERR_NUMERICAL = 11,
  AM_ERR_UNSUPPORTED = 12,
  AM_ERR_INTERNAL = 13
} am_status;

typedef struct am_config am_config;
typedef struct am_result am_result;

typedef struct am_row {
  const char* measure;
  double epsilon;
  double temperature;
  double unperturbed;
  double perturbed;
  double delta;
  double chi_bound; /* NaN when has_chi_bound == 0 */
  int has_chi_bound;
  int converged;
} am_row;

typedef struct am_check {
  const char* name;
  const char* measure;
  int passed;
  const char* detail;
} am_check;

AM_API const char* am_last_error(void);
AM_API const char* am_status_string(am_status status);
AM_API void am_string_free(char* s);

/* name: fig2 | fig3 | distance */
AM_API am_status am_config_builtin(const char* name, am_config** out);
AM_API am_status am_config_load(const char* path, am_config** out);
AM_API am_status am_config_from_json(const char* text, am_config** out);
/* Dotted key; value is parsed as JSON and, failing that, taken as a string. */
AM_API am_status am_config_set(am_config* cfg, const char* key, const char* value);
/* Replace the temperature grid with n evenly spaced points. */
AM_API am_status am_config_set_grid(am_config* cfg, size_t n);
AM_API am_status am_config_name(const am_config* cfg, char** out);
AM_API am_status am_config_to_json(const am_config* cfg, char** out);
/* Human-readable summary of the built model (dims, phases, grid); runs nothing. */
AM_API am_status am_config_describe(const am_config* cfg, char** out);
AM_API void am_config_free(am_config* cfg);

AM_API am_status am_run(const am_config* cfg, am_result** out);
AM_API am_status am_run_properties(uint64_t seed, am_result** out);

AM_API size_t am_result_row_count(const am_result* r);
AM_API am_status am_result_row(const am_result* r, size_t i, am_row* out);
AM_API size_t am_result_check_count(const am_result* r);
AM_API am_status am_result_check(const am_result* r, size_t i, am_check* out);
AM_API size_t am_result_deviations(const am_result* r);
AM_API am_status am_result_metadata(const am_result* r, char** out);
/* Writes CSV tables, checks and metadata (plus SVG when svg != 0) into dir.
 * The newline-separated list of written files goes to *paths when non-NULL. */
AM_API am_status am_result_write(const am_result* r, const char* dir, int svg, char** paths);
AM_API void am_result_free(am_result* r);

#ifdef __cplusplus
}
#endif

#endif /* ATHERMAL_ATHERMAL_H_ */
