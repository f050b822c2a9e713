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

#include "athermal/error.hpp"
#include "athermal/experiments.hpp"
#include "../support/oracles.hpp"

#include <filesystem>
#include <fstream>

using namespace athermal;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an athermal::Error");
  return "";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("athermal-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("built-in configs round-trip through JSON and the shipped files") {
  for (const auto& name : builtin_names()) {
    const ExperimentConfig cfg = builtin_config(name);
    const json j = config_to_json(cfg);
    CHECK(config_to_json(config_from_json(j)) == j);
    CHECK(config_to_json(config_from_json(json::parse(j.dump()))) == j);
    const ExperimentConfig shipped = load_config(fs::path(ATHERMAL_SOURCE_DIR) / "configs" / (name + ".json"));
    CHECK(config_hash(shipped) == config_hash(cfg));
  }
}

TEST_CASE("schema errors name the offending field") {
  json j = config_to_json(builtin_config("fig2"));
  j.erase("initial_state");
  j["initial_state"] = {{"coefficients", {{"re", {{0.7, 0.0}, {0.0, 0.6}}}}}};
  CHECK(message_of([&] { config_from_json(j); }).find("initial_state") != std::string::npos);

  j = config_to_json(builtin_config("fig2"));
  j["system"] = {{"matrix", {{"re", {{1.0, 0.5}, {0.0, -1.0}}}}}};
  const std::string herm = message_of([&] { config_from_json(j); });
  CHECK(herm.find("system") != std::string::npos);
  CHECK(herm.find("asymmetry") != std::string::npos);

  j = config_to_json(builtin_config("fig2"));
  j["colour"] = "blue";
  CHECK(message_of([&] { config_from_json(j); }).find("colour") != std::string::npos);

  j = config_to_json(builtin_config("fig2"));
  j["measures"] = {"entropy"};
  CHECK(message_of([&] { config_from_json(j); }).find("measures") != std::string::npos);

  CHECK(message_of([] { load_config("/nonexistent/dir/x.json"); }).find("/nonexistent/dir/x.json") != std::string::npos);
}

TEST_CASE("overrides") {
  const ExperimentConfig base = builtin_config("fig2");
  const ExperimentConfig eps = apply_override(base, "epsilons", json::array({0.05}));
  CHECK(eps.epsilons == std::vector<double>{0.05});
  CHECK(config_hash(eps) != config_hash(base));
  CHECK(config_hash(apply_override(base, "epsilons", json::array({0.1, 0.15, 0.2}))) == config_hash(base));
  CHECK(apply_override(base, "optimizer.seed_sequence", 4).optimizer.seed_sequence == 4);
  CHECK(apply_override(base, "a", 0.6).initial_state.a == 0.6);
  CHECK(message_of([&] { apply_override(base, "bogus.key", 1); }).find("bogus.key") != std::string::npos);
  CHECK(message_of([&] { apply_override(base, "a", 1.5); }).find("initial_state.a") != std::string::npos);

  const ExperimentConfig grid = with_grid_points(base, 5);
  REQUIRE(grid.temperatures.size() == 5);
  CHECK(grid.temperatures.front() == doctest::Approx(3.0));
  CHECK(grid.temperatures.back() == doctest::Approx(5.0));
}

TEST_CASE("sweep rows agree with a direct recomputation") {
  const ExperimentConfig cfg = with_grid_points(builtin_config("fig2"), 3);
  const SweepResult r = run_experiment(cfg);
  REQUIRE(r.rows.size() == 4 * 3);
  CHECK(r.metadata["epsilons"] == json::array({0.1, 0.15, 0.2}));
  CHECK(r.metadata["config_hash"] == config_hash(cfg));

  const ExperimentModel m = build_model(cfg);
  for (const auto& row : r.rows) {
    const ThermalOperation op(m.h_sys, m.unitary, gibbs_state(m.h_bath, 1.0 / row.temperature));
    const Matrix base = op.joint(unperturbed_state(m.coefficients, m.h_sys).matrix());
    const Matrix pert = op.joint(perturbed_state_exact(m.coefficients, m.h_sys, PerturbationSpec(m.h_prime, row.epsilon)).matrix());
    CHECK(row.unperturbed == doctest::Approx(oracle::log_negativity(base, 2, 2)).epsilon(1e-9));
    CHECK(row.perturbed == doctest::Approx(oracle::log_negativity(pert, 2, 2)).epsilon(1e-9));
  }
}

TEST_CASE("outputs: CSV layout and atomic writes") {
  const SweepResult r = run_experiment(with_grid_points(builtin_config("fig2"), 2));
  const std::string csv = rows_to_csv(r, MeasureKind::log_negativity);
  CHECK(csv.rfind("experiment,measure,epsilon,temperature,unperturbed,perturbed,delta,chi_bound,converged\r\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 8);

  const fs::path dir = scratch_dir("out");
  const auto written = write_outputs(r, dir);
  CHECK(written.size() == 4);
  for (const auto& entry : fs::directory_iterator(dir)) CHECK(entry.path().extension() != ".tmp");
  CHECK(fs::exists(dir / "fig2-log_negativity.svg"));
  std::ifstream meta(dir / "fig2-meta.json");
  CHECK(json::parse(meta)["experiment"] == "fig2");

  // a regular file where the output directory should be: nothing is written
  const fs::path blocked = scratch_dir("blocked") / "file";
  std::ofstream(blocked) << "x";
  CHECK_THROWS_AS(write_outputs(r, blocked / "sub"), Error);
  CHECK_FALSE(fs::exists(blocked.parent_path() / "fig2-log_negativity.csv"));

  CHECK(rows_to_svg(r, MeasureKind::log_negativity).find("<svg") != std::string::npos);
}

TEST_CASE("checks report deviations") {
  ExperimentConfig cfg = with_grid_points(builtin_config("fig2"), 3);
  cfg.checks = {CheckSpec{"abs_delta_below", "log_negativity", 1e-6}};
  const SweepResult r = run_experiment(cfg);
  REQUIRE(r.checks.size() == 1);
  CHECK_FALSE(r.checks[0].passed);
  CHECK(r.deviations() == 1);
}
