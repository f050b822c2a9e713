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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "athermal/athermal.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

TEST_CASE("built-in config runs through the C interface") {
  am_config* cfg = nullptr;
  REQUIRE(am_config_builtin("fig2", &cfg) == AM_OK);
  REQUIRE(am_config_set_grid(cfg, 3) == AM_OK);
  REQUIRE(am_config_set(cfg, "epsilons", "[0.1, 0.2]") == AM_OK);

  char* text = nullptr;
  REQUIRE(am_config_describe(cfg, &text) == AM_OK);
  CHECK(std::string(text).find("system dim: 2") != std::string::npos);
  am_string_free(text);

  am_result* r = nullptr;
  REQUIRE(am_run(cfg, &r) == AM_OK);
  CHECK(am_result_row_count(r) == 3 * 3);
  am_row row;
  REQUIRE(am_result_row(r, 8, &row) == AM_OK);
  CHECK(std::string(row.measure) == "log_negativity");
  CHECK(row.epsilon == doctest::Approx(0.2));
  CHECK(row.delta > 0);
  CHECK(row.has_chi_bound == 0);
  CHECK(std::isnan(row.chi_bound));
  CHECK(am_result_row(r, 9, &row) == AM_ERR_INVALID_ARGUMENT);
  CHECK(am_result_deviations(r) == 0);

  REQUIRE(am_result_metadata(r, &text) == AM_OK);
  CHECK(std::string(text).find("\"epsilons\"") != std::string::npos);
  am_string_free(text);

  const auto dir = std::filesystem::temp_directory_path() / "athermal-capi";
  std::filesystem::remove_all(dir);
  char* paths = nullptr;
  REQUIRE(am_result_write(r, dir.c_str(), 0, &paths) == AM_OK);
  CHECK(std::string(paths).find("fig2-log_negativity.csv") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "fig2-log_negativity.svg"));
  am_string_free(paths);

  am_result_free(r);
  am_config_free(cfg);
}

TEST_CASE("errors map onto status codes with a message") {
  am_config* cfg = nullptr;
  CHECK(am_config_builtin("fig9", &cfg) == AM_ERR_CONFIG);
  CHECK(std::string(am_last_error()).find("fig9") != std::string::npos);
  CHECK(am_config_load("/no/such/file.json", &cfg) == AM_ERR_IO);
  CHECK(std::string(am_last_error()).find("/no/such/file.json") != std::string::npos);
  CHECK(am_config_builtin(nullptr, &cfg) == AM_ERR_INVALID_ARGUMENT);
  CHECK(am_config_from_json("{", &cfg) == AM_ERR_CONFIG);

  REQUIRE(am_config_builtin("fig2", &cfg) == AM_OK);
  CHECK(am_config_set(cfg, "no.such.key", "1") == AM_ERR_CONFIG);
  CHECK(std::string(am_last_error()).find("no.such.key") != std::string::npos);
  CHECK(am_config_set(cfg, "name", "renamed") == AM_OK);
  char* name = nullptr;
  REQUIRE(am_config_name(cfg, &name) == AM_OK);
  CHECK(std::string(name) == "renamed");
  am_string_free(name);
  am_config_free(cfg);
  CHECK(std::string(am_status_string(AM_ERR_CONFIG)) == "config error");
}
