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

// Experiment configuration, the built-in sweeps and their tabular output.

#include "athermal/measures.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace athermal {

struct HamiltonianSpec {
  std::string name;       // pauli_x|pauli_y|pauli_z|gell_mann_1..8|identity, empty for explicit
  double scale = 1.0;
  std::size_t dim = 0;    // identity only
  std::optional<Matrix> matrix;

  Matrix build() const;
};

struct UnitarySpec {
  std::string basis = "energy";  // energy | computational | custom
  std::vector<double> phases;
  std::vector<Vector> kets;      // custom basis, computational coordinates
  std::vector<Matrix> blocks;    // energy basis: one intra-block unitary per H_T level
};

struct InitialStateSpec {
  std::optional<double> a;                   // populations (a, 1-a) on labels |0>, |1>
  std::vector<double> populations;           // per computational label
  std::optional<Matrix> coefficients;        // P_ij in the ascending eigenbasis of H_S

  LevelCoefficients build(const Hamiltonian& h_sys) const;
};

struct TemperatureRange {
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 0;
};

struct MtoFamilySpec {
  std::string basis = "custom";  // energy | computational | custom
  std::vector<Vector> kets;
  AffinePhaseRelation relation;
};

struct CheckSpec {
  std::string kind;     // see README for the list
  std::string measure;
  double value = 0.0;   // threshold or slack, per kind
};

struct ExperimentConfig {
  std::string name = "custom";
  HamiltonianSpec system;
  HamiltonianSpec bath;
  std::vector<double> temperatures;
  std::optional<TemperatureRange> temperature_range;
  UnitarySpec unitary;
  InitialStateSpec initial_state;
  HamiltonianSpec h_prime;
  std::vector<double> epsilons;
  std::vector<MeasureKind> measures;
  std::optional<MtoFamilySpec> mto_family;
  OptimizerConfig optimizer;
  std::vector<CheckSpec> checks;
  bool control_epsilon_zero = true;
  bool chi_bound = false;
  std::size_t cross_check_samples = 0;
  double tolerance = 1e-9;

  /// Throws Error(config) naming the offending field.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets a dotted path (aliases: epsilons, temperatures, a) to a JSON value
/// and re-validates the whole config.
ExperimentConfig apply_override(const ExperimentConfig& cfg, const std::string& key,
                                const nlohmann::json& value);
/// Replaces the temperature grid by `points` evenly spaced values over the
/// configured range (or over [min, max] of an explicit list).
ExperimentConfig with_grid_points(const ExperimentConfig& cfg, std::size_t points);

/// FNV-1a 64 of the canonical JSON serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

ExperimentConfig builtin_config(const std::string& name);  // fig2 | fig3 | distance
std::vector<std::string> builtin_names();

struct SweepRow {
  MeasureKind measure = MeasureKind::log_negativity;
  double epsilon = 0.0;
  double temperature = 0.0;
  double unperturbed = 0.0;
  double perturbed = 0.0;
  double delta = 0.0;
  std::optional<double> chi_bound;
  bool converged = true;
};

struct CheckResult {
  std::string name;
  std::string measure;
  bool passed = false;
  std::string detail;
};

struct SweepResult {
  std::string experiment;
  std::vector<SweepRow> rows;  // sorted by (measure, epsilon, temperature)
  std::vector<CheckResult> checks;
  nlohmann::json metadata;

  std::size_t deviations() const;
};

/// Built pieces shared by the sweep and the config dry run.
struct ExperimentModel {
  Hamiltonian h_sys;
  Hamiltonian h_bath;
  Hamiltonian h_prime;
  EnergyBlockUnitary unitary;
  LevelCoefficients coefficients;
  double commutator_norm = 0.0;
};
ExperimentModel build_model(const ExperimentConfig& cfg);

SweepResult run_experiment(const ExperimentConfig& cfg);
SweepResult run_fig2();
SweepResult run_fig3();
SweepResult run_distance_example();

struct PropertySuiteOptions {
  std::uint64_t seed = 20260101;
  std::size_t ppt_samples = 100;
  std::size_t mto_samples = 50;
  std::size_t fixed_point_samples = 50;
  std::size_t lemma_samples = 20;
};
SweepResult run_property_suite(const PropertySuiteOptions& opts = {});

/// |I^e - I - e theta| at eps_hi divided by the same at eps_lo, with
/// first-order perturbed inputs, at one temperature of `cfg`.
double first_order_remainder_ratio(const ExperimentConfig& cfg, double temperature, double eps_hi, double eps_lo);

struct WriteOptions {
  bool svg = true;
};
/// Writes <exp>-<measure>.csv (+ .svg), <exp>-checks.csv and <exp>-meta.json,
/// each through a temporary file and a rename. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const SweepResult& result,
                                                 const std::filesystem::path& dir,
                                                 const WriteOptions& opts = {});

std::string rows_to_csv(const SweepResult& result, MeasureKind kind);
std::string checks_to_csv(const SweepResult& result);
std::string rows_to_svg(const SweepResult& result, MeasureKind kind);

}  // namespace athermal
