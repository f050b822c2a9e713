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
#include "athermal/optimize.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

using namespace athermal;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an athermal::Error");
  return Errc::invalid_argument;
}

constexpr double kTwoPi = 2 * std::numbers::pi;

}  // namespace

TEST_CASE("Rosenbrock on a box") {
  const std::vector<Interval> box{{-2, 2}, {-1, 3}};
  OptimizerConfig cfg;
  cfg.xtol = 1e-9;
  cfg.ftol = 1e-14;
  const auto r = minimize([](std::span<const double> x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  }, box, cfg);
  CHECK(r.best_point[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.best_point[1] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.converged);
}

TEST_CASE("periodic coordinates wrap across the seam") {
  const std::vector<Interval> box{{0, kTwoPi, true}};
  const double target = kTwoPi - 0.01;
  const auto r = minimize([&](std::span<const double> x) { return -std::cos(x[0] - target); }, box);
  const double diff = std::remainder(r.best_point[0] - target, kTwoPi);
  CHECK(std::abs(diff) < 1e-4);
  CHECK(r.best_point[0] >= 0.0);
  CHECK(r.best_point[0] < kTwoPi);
}

TEST_CASE("minima on the boundary of a clamped coordinate") {
  const std::vector<Interval> box{{0, 1}, {0, 1}};
  const auto r = minimize([](std::span<const double> x) { return x[0] + std::pow(x[1] - 0.3, 2); }, box);
  CHECK(r.best_value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("runs are reproducible and the seed sequence shifts the grid") {
  const std::vector<Interval> box{{-3, 3}, {-3, 3}};
  auto f = [](std::span<const double> x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]) + 0.05 * (x[0] * x[0] + x[1] * x[1]); };
  const auto a = minimize(f, box), b = minimize(f, box);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best_point == b.best_point);
  OptimizerConfig shifted;
  shifted.seed_sequence = 3;
  CHECK(minimize(f, box, shifted).starts.front().start != a.starts.front().start);
}

TEST_CASE("config validation and helpers") {
  OptimizerConfig cfg;
  cfg.seeds = 0;
  CHECK(code_of([&] { cfg.validate(); }) == Errc::invalid_argument);
  const std::vector<double> v{3, 1, 2, 1};
  CHECK(best_indices(v, 3) == std::vector<std::size_t>{1, 3, 2});
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK(worker_count() >= 1);
}

TEST_CASE("phase manifolds") {
  const auto m = constrained_phase_manifold(4, AffinePhaseRelation{{-1, -1, 1, 1}, 0.5});
  CHECK(m.free_dim() == 3);
  const std::vector<double> free{0.3, 5.0, 2.2};
  const auto phases = m.phases(free);
  CHECK(m.residual(phases) < 1e-12);
  CHECK(m.free_coordinates(phases) == free);

  const auto full = constrained_phase_manifold(3, AffinePhaseRelation{{0, 0, 0}, kTwoPi});
  CHECK(full.free_dim() == 3);
  CHECK(code_of([] { constrained_phase_manifold(2, AffinePhaseRelation{{0, 0}, 1.0}); }) == Errc::inconsistent_relation);
  CHECK(code_of([] { constrained_phase_manifold(2, AffinePhaseRelation{{2, 2}, 0.0}); }) == Errc::inconsistent_relation);
  CHECK(code_of([] { constrained_phase_manifold(3, AffinePhaseRelation{{1, 1}, 0.0}); }) == Errc::invalid_argument);
}
