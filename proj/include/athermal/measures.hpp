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

// Correlation measures on joint system-bath states and the quantities used to
// bound how they respond to a perturbation of the system Hamiltonian.

#include "athermal/optimize.hpp"
#include "athermal/thermal.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace athermal {

enum class MeasureKind { log_negativity, mutual_information, discord, choi_distance };

const char* to_string(MeasureKind kind) noexcept;
std::optional<MeasureKind> parse_measure_kind(std::string_view name);

struct MeasureDiagnostics {
  std::vector<double> argmin;  // (theta, phi) for discord, free phases for the distance
  bool converged = true;
  std::size_t evaluations = 0;
  std::vector<std::string> notes;
};

struct MeasureValue {
  MeasureKind kind = MeasureKind::log_negativity;
  double value = 0.0;
  MeasureDiagnostics diagnostics;
};

struct DeltaReport {
  MeasureValue unperturbed;
  MeasureValue perturbed;
  double delta = 0.0;
  double epsilon = 0.0;
};

/// Projectors onto psi = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> and its
/// orthogonal complement.
class ProjectiveMeasurementQubit {
 public:
  static ProjectiveMeasurementQubit make(double theta, double phi);
  double theta() const { return theta_; }
  double phi() const { return phi_; }
  Vector psi() const;
  Vector psi_perp() const;
  Matrix projector(int outcome) const;

 private:
  ProjectiveMeasurementQubit(double t, double p) : theta_(t), phi_(p) {}
  double theta_;
  double phi_;
};

MeasureValue log_negativity(const DensityMatrix& joint);
MeasureValue mutual_information(const DensityMatrix& joint);
/// Same functional on a Hermitian unit-trace matrix that need not be positive.
double mutual_information_bits(const Matrix& joint, Dims dims);

/// sum_i p_i S(rho_B^i) after measuring the first factor; p_i = 0 branches add 0.
double measured_conditional_entropy(const DensityMatrix& joint,
                                    const ProjectiveMeasurementQubit& m);

/// Grid 24x24 over (theta, phi) with local refinement from the 40 best points.
OptimizerConfig default_discord_optimizer();
MeasureValue discord(const DensityMatrix& joint,
                     const OptimizerConfig& cfg = default_discord_optimizer());

// ---------------------------------------------------------------------------
// Choi states and distance to Markovian thermal operations

using LinearMap = std::function<Matrix(const Matrix&)>;

/// (map (x) id)(Y) for Y on first (x) second, with map acting on the first factor.
Matrix apply_on_first(const LinearMap& map, const Matrix& y, Dims dims);

/// (map (x) id)|Phi><Phi| with |Phi> = (1/sqrt d) sum_i |k_i>|i>; the ancilla
/// uses its computational basis.
Matrix choi_matrix(const LinearMap& map, std::span<const Vector> kets);
DensityMatrix choi_state(const ThermalOperation& op, std::span<const Vector> kets);

enum class KetOrder { unperturbed, exact, first_order };
/// System kets for the Choi construction: |i>, exact |i'> or first-order |i'>.
std::vector<Vector> choi_kets(const Hamiltonian& h_sys, const std::optional<PerturbationSpec>& pert,
                              KetOrder order = KetOrder::exact);

/// Markovian thermal operations generated by spectral-form unitaries with
/// phases on `kets`, restricted to `manifold`.
struct MtoFamily {
  Hamiltonian h_sys;
  GibbsState bath;
  std::vector<Vector> kets;
  PhaseManifold manifold;

  ThermalOperation operation(std::span<const double> free) const;
};

/// Default multi-start settings for the distance and bound optimizations.
OptimizerConfig default_distance_optimizer();

struct DistanceOptions {
  OptimizerConfig optimizer = default_distance_optimizer();
  /// Random input states used to cross-check the Choi reformulation (0 = off).
  std::size_t cross_check_samples = 0;
  std::uint64_t cross_check_seed = 7;
};

/// min over the family of || ((Lambda - Lambda^M) (x) id)|Phi><Phi| ||_1 with
/// the Choi kets given explicitly.
MeasureValue distance_measure(const ThermalOperation& op, const MtoFamily& family,
                              std::span<const Vector> kets, const DistanceOptions& opts = {});

struct ThetaResult {
  double value = 0.0;
  bool support_truncated = false;  // some evolved state was rank deficient
};

/// C - A - B built from the first-order correction of the input state.
ThetaResult theta_lambda(const ThermalOperation& op, const LevelCoefficients& p,
                         const Hamiltonian& h_prime, double cutoff = kSupportCutoff);

/// Tr[B(I + log2 A - log2 sigma)] with A = U(rho (x) tau)U^dagger and
/// B = U(rho-tilde (x) tau)U^dagger.
double x_lambda(const ThermalOperation& op, const LevelCoefficients& p, const DensityMatrix& sigma,
                const Hamiltonian& h_prime, double cutoff = kSupportCutoff);

/// |Tr[(A+eB)log2(A+eB)] - Tr[A log2 A] - e Tr[B(I + log2 A)]|.
double expansion_lemma_residual(const Matrix& a, const Matrix& b, double epsilon,
                                double cutoff = kSupportCutoff);

/// The operator sum_{i,j,k!=i} c_ki |k i><j j| + h.c. on system (x) ancilla,
/// c_ki = <k|H'|i>/(E_i - E_k), in the computational basis of both factors.
Matrix choi_perturbation_direction(const Hamiltonian& h_sys, const Hamiltonian& h_prime);

struct ChiBound {
  double bound = 0.0;     // (eps/d1) * max
  double max_norm = 0.0;  // best-found max over the family
  MeasureDiagnostics diagnostics;
};

ChiBound chi_lambda_bound(const ThermalOperation& op, const MtoFamily& family,
                          const PerturbationSpec& pert,
                          const OptimizerConfig& cfg = default_distance_optimizer());

struct DeltaOptions {
  OptimizerConfig discord_optimizer = default_discord_optimizer();
  DistanceOptions distance;
  const MtoFamily* family = nullptr;  // required for choi_distance
};

/// Measure with the unperturbed input and with the exact perturbed input.
DeltaReport delta(MeasureKind kind, const ThermalOperation& op, const LevelCoefficients& p,
                  const PerturbationSpec& pert, const DeltaOptions& opts = {});

/// Single evaluation used by `delta`; `pert` empty means the unperturbed input.
MeasureValue evaluate_measure(MeasureKind kind, const ThermalOperation& op,
                              const LevelCoefficients& p,
                              const std::optional<PerturbationSpec>& pert,
                              const DeltaOptions& opts = {});

}  // namespace athermal
