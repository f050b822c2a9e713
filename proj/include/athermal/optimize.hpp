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

#pragma once

// Grid-seeded multi-start Nelder-Mead on a box, with periodic coordinates for
// angles, and the affine phase-relation manifold used to parametrize
// Markovian thermal operations.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace athermal {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;
};

struct OptimizerConfig {
  std::size_t seeds = 40;          // Nelder-Mead starts taken from the best grid points
  std::size_t grid_per_dim = 0;    // 0 = largest grid that fits max_grid_points
  std::size_t max_grid_points = 4096;
  std::size_t max_iterations = 4000;  // per start
  double ftol = 1e-8;
  double xtol = 1e-6;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_step = 0.05;      // fraction of each interval width
  std::uint64_t seed_sequence = 0; // 0 = unshifted grid

  /// Throws Error(invalid_argument) naming the offending field.
  void validate() const;
};

struct StartTrace {
  std::vector<double> start;
  std::vector<double> point;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct OptimizationResult {
  double best_value = 0.0;
  std::vector<double> best_point;
  bool converged = false;  // the start that produced best_value converged
  std::size_t evaluations = 0;
  std::vector<StartTrace> starts;
};

using Objective = std::function<double(std::span<const double>)>;

OptimizationResult minimize(const Objective& f, std::span<const Interval> bounds,
                            const OptimizerConfig& cfg = {});

/// Nelder-Mead from each given start (no grid stage); `prior_evaluations`
/// is added to the reported count.
OptimizationResult minimize_from(const Objective& f, std::span<const Interval> bounds,
                                 std::span<const std::vector<double>> starts,
                                 const OptimizerConfig& cfg = {}, std::size_t prior_evaluations = 0);

/// Indices of the `count` smallest values, ties broken by index.
std::vector<std::size_t> best_indices(std::span<const double> values, std::size_t count);

/// Worker count: hardware concurrency capped by ATHERMAL_MARKOV_THREADS.
std::size_t worker_count();

/// Runs body(0..n-1) on up to worker_count() threads. Nested calls run inline,
/// and each index writes only its own slot, so results never depend on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// sum_k coefficients[k] * alpha_k == constant (mod 2 pi).
struct AffinePhaseRelation {
  std::vector<int> coefficients;
  double constant = 0.0;
};

/// Phases alpha_0..alpha_{dim-1} restricted to one affine relation. The
/// dependent phase is solved for, so every image point satisfies the relation.
class PhaseManifold {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t free_dim() const { return dependent_ ? dim_ - 1 : dim_; }
  std::optional<std::size_t> dependent_index() const { return dependent_; }
  const AffinePhaseRelation& relation() const { return relation_; }

  std::vector<double> phases(std::span<const double> free) const;
  /// Drops the dependent coordinate.
  std::vector<double> free_coordinates(std::span<const double> phases) const;
  std::vector<Interval> bounds() const;
  /// Distance of sum c_k alpha_k - constant from the nearest multiple of 2 pi.
  double residual(std::span<const double> phases) const;

 private:
  friend PhaseManifold constrained_phase_manifold(std::size_t, const AffinePhaseRelation&);
  std::size_t dim_ = 0;
  std::optional<std::size_t> dependent_;
  AffinePhaseRelation relation_;
};

PhaseManifold constrained_phase_manifold(std::size_t dim, const AffinePhaseRelation& relation);

}  // namespace athermal
