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

// Hamiltonians, Gibbs states, energy-block global unitaries and the
// system-bath channels they generate, plus the Markovianity constraint check
// and the perturbed-system constructions.
//
// Units: k_B = hbar = 1. Energies are in the unit delta and beta = 1/T.

#include "athermal/linalg.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace athermal {

inline constexpr double kDegeneracyTolerance = 1e-9;

struct EnergyLevel {
  double energy = 0.0;
  std::vector<std::size_t> indices;  // positions in the ascending eigen order
};

/// Hermitian operator with its eigendecomposition cached at construction.
class Hamiltonian {
 public:
  explicit Hamiltonian(Matrix m, double tol = kHermitianTolerance);

  const Matrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const RealVector& energies() const { return eig_.values; }
  const Matrix& eigenkets() const { return eig_.vectors; }
  Vector eigenket(std::size_t i) const { return eig_.vectors.col(static_cast<Eigen::Index>(i)); }

  std::vector<EnergyLevel> levels(double tol = kDegeneracyTolerance) const;
  bool nondegenerate(double tol = kDegeneracyTolerance) const;
  /// True iff all gaps E_i - E_j (i != j) are pairwise distinct.
  bool nondegenerate_bohr_spectrum(double tol = kDegeneracyTolerance) const;

  /// labels[c] = eigen index whose eigenket overlaps most with computational
  /// basis state |c>. Falls back to ascending order when that assignment is
  /// not a permutation.
  std::vector<std::size_t> computational_labels() const;

 private:
  Matrix m_;
  Eigh eig_;
};

namespace operators {
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity(std::size_t d);
/// Standard Gell-Mann matrices lambda_1 .. lambda_8.
Matrix gell_mann(int k);
}  // namespace operators

struct GibbsState {
  DensityMatrix state;
  double beta;
  Hamiltonian source;

  /// Boltzmann weight of the k-th (ascending) eigenlevel of `source`.
  double population(std::size_t k) const;
};

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

/// e^{-beta H}/Tr e^{-beta H}. beta = kInfiniteBeta gives the ground
/// projector and requires a unique ground state.
GibbsState gibbs_state(const Hamiltonian& h, double beta);

/// H_S (x) I + I (x) H_B.
Hamiltonian total_hamiltonian(const Hamiltonian& h_sys, const Hamiltonian& h_bath);

/// Global unitary on system (x) bath. `energy_preserving()` is true when it was
/// built against a total Hamiltonian and verified to commute with it.
class EnergyBlockUnitary {
 public:
  struct Block {
    double energy;
    Matrix basis;  // columns span the eigenspace
    Matrix intra;  // unitary acting in that basis
  };

  static EnergyBlockUnitary from_matrix(Matrix u, double tol = 1e-10);

  const Matrix& matrix() const { return u_; }
  bool energy_preserving() const { return energy_preserving_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t dim() const { return static_cast<std::size_t>(u_.rows()); }

 private:
  friend EnergyBlockUnitary build_block_unitary(const Hamiltonian&, std::span<const Matrix>, double);
  friend EnergyBlockUnitary build_block_unitary(const Hamiltonian&, std::span<const Vector>,
                                                std::span<const double>, double);
  EnergyBlockUnitary(Matrix u, std::vector<Block> blocks, bool preserving)
      : u_(std::move(u)), blocks_(std::move(blocks)), energy_preserving_(preserving) {}

  Matrix u_;
  std::vector<Block> blocks_;
  bool energy_preserving_ = false;
};

/// One intra-block unitary per eigenlevel of `h_total` (ascending), acting on
/// the cached eigenkets of that level.
EnergyBlockUnitary build_block_unitary(const Hamiltonian& h_total, std::span<const Matrix> intra,
                                       double tol = 1e-10);
/// Spectral form sum_k e^{-i phase_k} |ket_k><ket_k|; every ket must be an
/// eigenvector of `h_total` and together they must form an orthonormal basis.
EnergyBlockUnitary build_block_unitary(const Hamiltonian& h_total, std::span<const Vector> kets,
                                       std::span<const double> phases, double tol = 1e-10);
/// Same spectral form with no commutation requirement.
EnergyBlockUnitary phase_unitary(std::span<const Vector> kets, std::span<const double> phases,
                                 double tol = 1e-10);

/// Product basis |i>|R> of the system eigenkets (ascending) and the bath
/// eigenkets (ascending), system index major.
std::vector<Vector> product_energy_basis(const Hamiltonian& h_sys, const Hamiltonian& h_bath);

/// Trace norm of UH - HU.
double commutator_norm(const Matrix& u, const Matrix& h);
double commutator_norm(const EnergyBlockUnitary& u, const Hamiltonian& h);

struct ChannelOutput {
  DensityMatrix system;
  DensityMatrix bath;
  DensityMatrix joint;
};

/// Lambda(rho) = Tr_B[U (rho (x) tau_B) U^dagger].
class ThermalOperation {
 public:
  ThermalOperation(Hamiltonian h_sys, EnergyBlockUnitary unitary, GibbsState bath);

  const Hamiltonian& system_hamiltonian() const { return h_sys_; }
  const EnergyBlockUnitary& unitary() const { return unitary_; }
  const GibbsState& bath() const { return bath_; }
  std::size_t d_sys() const { return h_sys_.dim(); }
  std::size_t d_bath() const { return bath_.source.dim(); }
  Dims dims() const { return Dims{d_sys(), d_bath()}; }

  /// U (x (x) tau_B) U^dagger for any system operator x (linear in x).
  Matrix joint(const Matrix& x_sys) const;
  /// Tr_B of `joint`.
  Matrix map(const Matrix& x_sys) const;
  ChannelOutput apply(const DensityMatrix& rho_sys) const;

 private:
  Hamiltonian h_sys_;
  EnergyBlockUnitary unitary_;
  GibbsState bath_;
};

// ---------------------------------------------------------------------------
// Markovianity constraints

struct AmplitudeResidual {
  std::size_t from;  // i
  std::size_t to;    // j
  std::size_t bath_level;
  std::optional<double> residual;  // empty when E_R + omega_ji is not a bath level
};

struct PhaseResidual {
  std::size_t i;
  std::size_t j;
  std::optional<double> residual;  // max over E_R; empty for a degenerate Bohr spectrum
};

struct MtoConstraintReport {
  bool is_markovian = false;
  double joint_product_deviation = 0.0;
  bool bohr_nondegenerate = false;
  std::vector<AmplitudeResidual> amplitude_residuals;
  std::vector<PhaseResidual> phase_residuals;
  /// Verdict from the parameter constraints alone, restricted to the matrix
  /// elements the input actually populates.
  bool residuals_satisfied = false;
  double max_relevant_residual = 0.0;
};

/// `rho_sys` may be any Hermitian unit-trace operator (first-order perturbed
/// inputs are not guaranteed positive).
MtoConstraintReport mto_check(const ThermalOperation& op, const Matrix& rho_sys,
                              double tol = kStateTolerance);
MtoConstraintReport mto_check(const ThermalOperation& op, const DensityMatrix& rho_sys,
                              double tol = kStateTolerance);

// ---------------------------------------------------------------------------
// Perturbations of the system Hamiltonian

struct PerturbationSpec {
  Hamiltonian h_prime;
  double epsilon = 0.0;

  PerturbationSpec(Hamiltonian h, double eps);
};

/// Density-matrix coefficients P_ij in the ascending eigenbasis of H_S.
class LevelCoefficients {
 public:
  static LevelCoefficients make(Matrix p, double tol = kStateTolerance);
  static LevelCoefficients diagonal(std::span<const double> populations);
  /// Populations given per computational label (see Hamiltonian::computational_labels).
  static LevelCoefficients labelled_populations(const Hamiltonian& h_sys,
                                                std::span<const double> populations);
  const Matrix& matrix() const { return p_; }
  std::size_t dim() const { return static_cast<std::size_t>(p_.rows()); }

 private:
  explicit LevelCoefficients(Matrix p) : p_(std::move(p)) {}
  Matrix p_;
};

Hamiltonian perturbed_hamiltonian(const Hamiltonian& h_sys, const PerturbationSpec& pert);

/// Exact eigenkets |i'> of H_S + eps H', indexed like the unperturbed
/// eigenkets |i> by maximal overlap, with <i|i'> real and positive.
std::vector<Vector> perturbed_kets_exact(const Hamiltonian& h_sys, const PerturbationSpec& pert);
/// |i> + eps sum_{k != i} <k|H'|i>/(E_i - E_k) |k>.
std::vector<Vector> perturbed_kets_first_order(const Hamiltonian& h_sys,
                                               const PerturbationSpec& pert);

/// sum_ij P_ij |k_i><k_j|.
Matrix state_from_coefficients(const LevelCoefficients& p, std::span<const Vector> kets);
DensityMatrix unperturbed_state(const LevelCoefficients& p, const Hamiltonian& h_sys);

DensityMatrix perturbed_state_exact(const LevelCoefficients& p, const Hamiltonian& h_sys,
                                    const PerturbationSpec& pert);
/// First-order correction rho-tilde (traceless, Hermitian), computational basis.
Matrix first_order_correction(const LevelCoefficients& p, const Hamiltonian& h_sys,
                              const Hamiltonian& h_prime);
/// rho_S + eps rho-tilde.
Matrix perturbed_state_first_order(const LevelCoefficients& p, const Hamiltonian& h_sys,
                                   const PerturbationSpec& pert);

}  // namespace athermal
