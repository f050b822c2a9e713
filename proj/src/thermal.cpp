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

#include "athermal/thermal.hpp"

#include "athermal/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace athermal {

namespace {

Matrix stack_columns(std::span<const Vector> kets) {
  if (kets.empty()) return Matrix();
  Matrix m(kets.front().size(), static_cast<Eigen::Index>(kets.size()));
  for (std::size_t k = 0; k < kets.size(); ++k) {
    if (kets[k].size() != m.rows())
      throw Error(Errc::invalid_argument, "kets have inconsistent dimensions");
    m.col(static_cast<Eigen::Index>(k)) = kets[k];
  }
  return m;
}

void require_unitary(const Matrix& u, double tol, const char* what) {
  if (u.rows() != u.cols()) throw Error(Errc::not_unitary, std::string(what) + " is not square");
  const double defect =
      (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (defect > tol) {
    std::ostringstream os;
    os << what << " is not unitary (max |U^dagger U - I| = " << defect << ")";
    throw Error(Errc::not_unitary, os.str());
  }
}

Matrix spectral_matrix(const Matrix& basis, std::span<const double> phases) {
  Vector factors(static_cast<Eigen::Index>(phases.size()));
  for (std::size_t k = 0; k < phases.size(); ++k)
    factors(static_cast<Eigen::Index>(k)) = phase_factor(phases[k]);
  return basis * factors.asDiagonal() * basis.adjoint();
}

void require_same_dim(const Hamiltonian& h, const LevelCoefficients& p) {
  if (h.dim() != p.dim())
    throw Error(Errc::bad_factorization, "coefficient matrix does not match the system dimension");
}

}  // namespace

// ---------------------------------------------------------------------------
// Hamiltonian

Hamiltonian::Hamiltonian(Matrix m, double tol) : m_(std::move(m)), eig_(eigh(m_, tol)) {
  m_ = (m_ + m_.adjoint()) * 0.5;
}

std::vector<EnergyLevel> Hamiltonian::levels(double tol) const {
  std::vector<EnergyLevel> out;
  for (Eigen::Index k = 0; k < eig_.values.size(); ++k) {
    const double e = eig_.values(k);
    if (out.empty() || e - out.back().energy > tol) {
      out.push_back(EnergyLevel{e, {}});
    }
    out.back().indices.push_back(static_cast<std::size_t>(k));
  }
  for (auto& level : out) {
    double sum = 0.0;
    for (auto idx : level.indices) sum += eig_.values(static_cast<Eigen::Index>(idx));
    level.energy = sum / static_cast<double>(level.indices.size());
  }
  return out;
}

bool Hamiltonian::nondegenerate(double tol) const { return levels(tol).size() == dim(); }

bool Hamiltonian::nondegenerate_bohr_spectrum(double tol) const {
  std::vector<double> gaps;
  const auto n = eig_.values.size();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) gaps.push_back(eig_.values(i) - eig_.values(j));
  std::sort(gaps.begin(), gaps.end());
  for (std::size_t k = 1; k < gaps.size(); ++k)
    if (gaps[k] - gaps[k - 1] <= tol) return false;
  return true;
}

std::vector<std::size_t> Hamiltonian::computational_labels() const {
  const std::size_t n = dim();
  std::vector<std::size_t> labels(n);
  std::vector<bool> used(n, false);
  bool ok = true;
  for (std::size_t c = 0; c < n; ++c) {
    Eigen::Index best = 0;
    eig_.vectors.row(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff(&best);
    labels[c] = static_cast<std::size_t>(best);
    if (used[labels[c]]) ok = false;
    used[labels[c]] = true;
  }
  if (!ok)
    for (std::size_t c = 0; c < n; ++c) labels[c] = c;
  return labels;
}

namespace operators {

Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Matrix pauli_y() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0, -1);
  m(1, 0) = Complex(0, 1);
  return m;
}

Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Matrix identity(std::size_t d) {
  return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

Matrix gell_mann(int k) {
  Matrix m = Matrix::Zero(3, 3);
  const Complex i(0, 1);
  switch (k) {
    case 1: m(0, 1) = m(1, 0) = 1.0; break;
    case 2: m(0, 1) = -i; m(1, 0) = i; break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    case 4: m(0, 2) = m(2, 0) = 1.0; break;
    case 5: m(0, 2) = -i; m(2, 0) = i; break;
    case 6: m(1, 2) = m(2, 1) = 1.0; break;
    case 7: m(1, 2) = -i; m(2, 1) = i; break;
    case 8:
      m(0, 0) = m(1, 1) = 1.0 / std::sqrt(3.0);
      m(2, 2) = -2.0 / std::sqrt(3.0);
      break;
    default: throw Error(Errc::invalid_argument, "gell_mann index must be in 1..8");
  }
  return m;
}

}  // namespace operators

// ---------------------------------------------------------------------------
// Gibbs states and total Hamiltonians

double GibbsState::population(std::size_t k) const {
  const Vector v = source.eigenket(k);
  return (v.adjoint() * state.matrix() * v)(0, 0).real();
}

GibbsState gibbs_state(const Hamiltonian& h, double beta) {
  if (std::isnan(beta) || beta < 0.0)
    throw Error(Errc::invalid_argument, "gibbs_state: beta must be >= 0 or infinite");
  const RealVector& e = h.energies();
  RealVector w(e.size());
  if (std::isinf(beta)) {
    const auto levels = h.levels();
    if (levels.front().indices.size() != 1)
      throw Error(Errc::ambiguous_zero_temperature,
                  "ambiguous zero-temperature limit: ground space is degenerate");
    w.setZero();
    w(static_cast<Eigen::Index>(levels.front().indices.front())) = 1.0;
  } else {
    const double e0 = e.minCoeff();
    for (Eigen::Index k = 0; k < e.size(); ++k) w(k) = std::exp(-beta * (e(k) - e0));
    w /= w.sum();
  }
  Matrix rho = h.eigenkets() * w.cast<Complex>().asDiagonal() * h.eigenkets().adjoint();
  return GibbsState{DensityMatrix::make(std::move(rho)), beta, h};
}

Hamiltonian total_hamiltonian(const Hamiltonian& h_sys, const Hamiltonian& h_bath) {
  return Hamiltonian(kron(h_sys.matrix(), operators::identity(h_bath.dim())) +
                     kron(operators::identity(h_sys.dim()), h_bath.matrix()));
}

// ---------------------------------------------------------------------------
// Global unitaries

EnergyBlockUnitary EnergyBlockUnitary::from_matrix(Matrix u, double tol) {
  require_unitary(u, tol, "global unitary");
  return EnergyBlockUnitary(std::move(u), {}, false);
}

EnergyBlockUnitary build_block_unitary(const Hamiltonian& h_total, std::span<const Matrix> intra,
                                       double tol) {
  const auto levels = h_total.levels();
  if (intra.size() != levels.size()) {
    std::ostringstream os;
    os << "block unitary: expected " << levels.size() << " blocks, got " << intra.size();
    throw Error(Errc::invalid_argument, os.str());
  }
  const auto n = static_cast<Eigen::Index>(h_total.dim());
  Matrix u = Matrix::Zero(n, n);
  std::vector<EnergyBlockUnitary::Block> blocks;
  for (std::size_t b = 0; b < levels.size(); ++b) {
    const auto& idx = levels[b].indices;
    if (intra[b].rows() != static_cast<Eigen::Index>(idx.size())) {
      std::ostringstream os;
      os << "block unitary: block " << b << " (energy " << levels[b].energy << ") needs a "
         << idx.size() << "x" << idx.size() << " unitary";
      throw Error(Errc::invalid_argument, os.str());
    }
    require_unitary(intra[b], tol, "intra-block unitary");
    Matrix basis(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
      basis.col(static_cast<Eigen::Index>(k)) = h_total.eigenket(idx[k]);
    u += basis * intra[b] * basis.adjoint();
    blocks.push_back({levels[b].energy, std::move(basis), intra[b]});
  }
  if (commutator_norm(u, h_total.matrix()) > tol * std::max<double>(1.0, static_cast<double>(n)))
    throw Error(Errc::not_energy_preserving, "block unitary does not commute with H_T");
  return EnergyBlockUnitary(std::move(u), std::move(blocks), true);
}

EnergyBlockUnitary build_block_unitary(const Hamiltonian& h_total, std::span<const Vector> kets,
                                       std::span<const double> phases, double tol) {
  const auto n = static_cast<Eigen::Index>(h_total.dim());
  if (kets.size() != static_cast<std::size_t>(n) || phases.size() != kets.size()) {
    std::ostringstream os;
    os << "block unitary: need " << n << " kets and phases, got " << kets.size() << " kets and "
       << phases.size() << " phases";
    throw Error(Errc::invalid_argument, os.str());
  }
  const Matrix basis = stack_columns(kets);
  require_unitary(basis, tol, "ket basis");
  const auto levels = h_total.levels();
  std::vector<EnergyBlockUnitary::Block> blocks(levels.size());
  for (std::size_t b = 0; b < levels.size(); ++b) blocks[b].energy = levels[b].energy;
  std::vector<std::vector<std::size_t>> members(levels.size());
  for (std::size_t k = 0; k < kets.size(); ++k) {
    const Vector& v = kets[k];
    const double e = (v.adjoint() * h_total.matrix() * v)(0, 0).real();
    const double resid = (h_total.matrix() * v - e * v).norm();
    if (resid > 1e-8) {
      std::ostringstream os;
      os << "block unitary: ket " << k << " is not an eigenvector of H_T (residual " << resid
         << ")";
      throw Error(Errc::not_energy_preserving, os.str());
    }
    std::size_t best = 0;
    for (std::size_t b = 1; b < levels.size(); ++b)
      if (std::abs(levels[b].energy - e) < std::abs(levels[best].energy - e)) best = b;
    members[best].push_back(k);
  }
  for (std::size_t b = 0; b < levels.size(); ++b) {
    const auto& m = members[b];
    Matrix blk(n, static_cast<Eigen::Index>(m.size()));
    Vector f(static_cast<Eigen::Index>(m.size()));
    for (std::size_t k = 0; k < m.size(); ++k) {
      blk.col(static_cast<Eigen::Index>(k)) = kets[m[k]];
      f(static_cast<Eigen::Index>(k)) = phase_factor(phases[m[k]]);
    }
    blocks[b].basis = blk;
    blocks[b].intra = f.asDiagonal();
  }
  Matrix u = spectral_matrix(basis, phases);
  if (commutator_norm(u, h_total.matrix()) > tol * std::max<double>(1.0, static_cast<double>(n)))
    throw Error(Errc::not_energy_preserving, "block unitary does not commute with H_T");
  return EnergyBlockUnitary(std::move(u), std::move(blocks), true);
}

EnergyBlockUnitary phase_unitary(std::span<const Vector> kets, std::span<const double> phases,
                                 double tol) {
  if (kets.empty() || phases.size() != kets.size())
    throw Error(Errc::invalid_argument, "phase unitary: need one phase per ket");
  const Matrix basis = stack_columns(kets);
  require_unitary(basis, tol, "ket basis");
  return EnergyBlockUnitary::from_matrix(spectral_matrix(basis, phases), tol);
}

std::vector<Vector> product_energy_basis(const Hamiltonian& h_sys, const Hamiltonian& h_bath) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < h_sys.dim(); ++i)
    for (std::size_t r = 0; r < h_bath.dim(); ++r)
      out.push_back(kron(h_sys.eigenket(i), h_bath.eigenket(r)));
  return out;
}

double commutator_norm(const Matrix& u, const Matrix& h) { return trace_norm(u * h - h * u); }

double commutator_norm(const EnergyBlockUnitary& u, const Hamiltonian& h) {
  return commutator_norm(u.matrix(), h.matrix());
}

// ---------------------------------------------------------------------------
// ThermalOperation

ThermalOperation::ThermalOperation(Hamiltonian h_sys, EnergyBlockUnitary unitary, GibbsState bath)
    : h_sys_(std::move(h_sys)), unitary_(std::move(unitary)), bath_(std::move(bath)) {
  if (unitary_.dim() != h_sys_.dim() * bath_.source.dim())
    throw Error(Errc::bad_factorization, "bad factorization: unitary dimension != d_sys * d_bath");
}

Matrix ThermalOperation::joint(const Matrix& x_sys) const {
  if (static_cast<std::size_t>(x_sys.rows()) != d_sys() || x_sys.rows() != x_sys.cols())
    throw Error(Errc::bad_factorization, "bad factorization: system operator has wrong dimension");
  const Matrix& u = unitary_.matrix();
  return u * kron(x_sys, bath_.state.matrix()) * u.adjoint();
}

Matrix ThermalOperation::map(const Matrix& x_sys) const {
  return partial_trace(joint(x_sys), dims(), Subsystem::first);
}

ChannelOutput ThermalOperation::apply(const DensityMatrix& rho_sys) const {
  const Matrix j = joint(rho_sys.matrix());
  DensityMatrix joint_state = DensityMatrix::make(j, dims());
  return ChannelOutput{partial_trace(joint_state, Subsystem::first),
                       partial_trace(joint_state, Subsystem::second), std::move(joint_state)};
}

// ---------------------------------------------------------------------------
// Markovianity constraints

MtoConstraintReport mto_check(const ThermalOperation& op, const Matrix& rho_sys, double tol) {
  MtoConstraintReport report;
  const Hamiltonian& hs = op.system_hamiltonian();
  const Hamiltonian& hb = op.bath().source;
  const std::size_t ds = op.d_sys();
  const std::size_t db = op.d_bath();

  const Matrix joint = op.joint(rho_sys);
  const Matrix reduced = partial_trace(joint, op.dims(), Subsystem::first);
  report.joint_product_deviation = 0.5 * trace_norm(joint - kron(reduced, op.bath().state.matrix()));
  report.is_markovian = report.joint_product_deviation <= tol;
  report.bohr_nondegenerate = hs.nondegenerate_bohr_spectrum();

  // alpha^{ji}_{E_R} = <j, E_R + omega_ji| U |i, E_R>
  const auto basis = product_energy_basis(hs, hb);
  Matrix w(static_cast<Eigen::Index>(ds * db), static_cast<Eigen::Index>(ds * db));
  for (std::size_t k = 0; k < basis.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = basis[k];
  const Matrix u_energy = w.adjoint() * op.unitary().matrix() * w;
  const RealVector& es = hs.energies();
  const RealVector& eb = hb.energies();
  std::vector<double> pop(db);
  for (std::size_t r = 0; r < db; ++r) pop[r] = op.bath().population(r);

  auto shifted_level = [&](std::size_t i, std::size_t j, std::size_t r) -> std::optional<std::size_t> {
    const double target = eb(static_cast<Eigen::Index>(r)) + es(static_cast<Eigen::Index>(i)) -
                          es(static_cast<Eigen::Index>(j));
    for (std::size_t q = 0; q < db; ++q)
      if (std::abs(eb(static_cast<Eigen::Index>(q)) - target) <= kDegeneracyTolerance) return q;
    return std::nullopt;
  };
  auto alpha = [&](std::size_t j, std::size_t q, std::size_t i, std::size_t r) {
    return u_energy(static_cast<Eigen::Index>(j * db + q), static_cast<Eigen::Index>(i * db + r));
  };

  constexpr double kTinyPopulation = 1e-300;
  for (std::size_t i = 0; i < ds; ++i) {
    for (std::size_t j = 0; j < ds; ++j) {
      double transition = 0.0;  // P(i -> j)
      for (std::size_t r = 0; r < db; ++r)
        if (auto q = shifted_level(i, j, r)) transition += pop[r] * std::norm(alpha(j, *q, i, r));
      for (std::size_t r = 0; r < db; ++r) {
        AmplitudeResidual a{i, j, r, std::nullopt};
        const auto q = shifted_level(i, j, r);
        if (q && pop[r] > kTinyPopulation)
          a.residual = std::abs(std::norm(alpha(j, *q, i, r)) - pop[*q] * transition / pop[r]);
        report.amplitude_residuals.push_back(a);
      }
    }
  }
  for (std::size_t i = 0; i < ds; ++i) {
    for (std::size_t j = 0; j < ds; ++j) {
      if (i == j) continue;
      PhaseResidual p{i, j, std::nullopt};
      if (report.bohr_nondegenerate) {
        Complex damping = 0.0;  // Lambda_ij
        for (std::size_t r = 0; r < db; ++r)
          damping += pop[r] * alpha(i, r, i, r) * std::conj(alpha(j, r, j, r));
        double worst = 0.0;
        for (std::size_t r = 0; r < db; ++r)
          if (pop[r] > kTinyPopulation)
            worst = std::max(worst, std::abs(alpha(i, r, i, r) * std::conj(alpha(j, r, j, r)) - damping));
        p.residual = worst;
      }
      report.phase_residuals.push_back(p);
    }
  }

  const Matrix coeffs = hs.eigenkets().adjoint() * rho_sys * hs.eigenkets();
  double worst = 0.0;
  for (const auto& a : report.amplitude_residuals)
    if (a.residual && std::abs(coeffs(static_cast<Eigen::Index>(a.from), static_cast<Eigen::Index>(a.from))) > tol)
      worst = std::max(worst, *a.residual);
  for (const auto& p : report.phase_residuals)
    if (p.residual && std::abs(coeffs(static_cast<Eigen::Index>(p.i), static_cast<Eigen::Index>(p.j))) > tol)
      worst = std::max(worst, *p.residual);
  report.max_relevant_residual = worst;
  report.residuals_satisfied = worst <= tol;
  return report;
}

MtoConstraintReport mto_check(const ThermalOperation& op, const DensityMatrix& rho_sys, double tol) {
  return mto_check(op, rho_sys.matrix(), tol);
}

// ---------------------------------------------------------------------------
// Perturbations

PerturbationSpec::PerturbationSpec(Hamiltonian h, double eps) : h_prime(std::move(h)), epsilon(eps) {
  if (!(eps >= 0.0) || std::isinf(eps))
    throw Error(Errc::invalid_argument, "perturbation strength epsilon must be finite and >= 0");
}

LevelCoefficients LevelCoefficients::make(Matrix p, double tol) {
  return LevelCoefficients(DensityMatrix::make(std::move(p), tol).matrix());
}

LevelCoefficients LevelCoefficients::diagonal(std::span<const double> populations) {
  RealVector w(static_cast<Eigen::Index>(populations.size()));
  for (std::size_t k = 0; k < populations.size(); ++k) w(static_cast<Eigen::Index>(k)) = populations[k];
  return make(w.cast<Complex>().asDiagonal());
}

LevelCoefficients LevelCoefficients::labelled_populations(const Hamiltonian& h_sys,
                                                          std::span<const double> populations) {
  if (populations.size() != h_sys.dim())
    throw Error(Errc::invalid_argument, "population count does not match the system dimension");
  const auto labels = h_sys.computational_labels();
  std::vector<double> ordered(populations.size());
  for (std::size_t c = 0; c < populations.size(); ++c) ordered[labels[c]] = populations[c];
  return diagonal(ordered);
}

Hamiltonian perturbed_hamiltonian(const Hamiltonian& h_sys, const PerturbationSpec& pert) {
  if (pert.h_prime.dim() != h_sys.dim())
    throw Error(Errc::bad_factorization, "bad factorization: H' dimension differs from H_S");
  return Hamiltonian(h_sys.matrix() + pert.epsilon * pert.h_prime.matrix());
}

std::vector<Vector> perturbed_kets_exact(const Hamiltonian& h_sys, const PerturbationSpec& pert) {
  const Hamiltonian hp = perturbed_hamiltonian(h_sys, pert);
  const std::size_t n = h_sys.dim();
  if (pert.epsilon == 0.0) return columns(h_sys.eigenkets());
  const Matrix overlaps = h_sys.eigenkets().adjoint() * hp.eigenkets();  // <i|k'>
  std::vector<Vector> out(n);
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    const double mag = overlaps.row(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff(&best);
    if (mag * mag < 0.5 || used[static_cast<std::size_t>(best)]) {
      std::ostringstream os;
      os << "perturbation too strong: level " << i << " has maximal squared overlap " << mag * mag
         << " with the perturbed eigenbasis";
      throw Error(Errc::perturbation_too_strong, os.str());
    }
    used[static_cast<std::size_t>(best)] = true;
    const Complex z = overlaps(static_cast<Eigen::Index>(i), best);
    out[i] = hp.eigenket(static_cast<std::size_t>(best)) * (std::conj(z) / std::abs(z));
  }
  return out;
}

namespace {

/// C(k,i) = <k|H'|i>/(E_i - E_k) for k != i, in the unperturbed eigenbasis.
Matrix mixing_coefficients(const Hamiltonian& h_sys, const Hamiltonian& h_prime) {
  if (h_prime.dim() != h_sys.dim())
    throw Error(Errc::bad_factorization, "bad factorization: H' dimension differs from H_S");
  if (!h_sys.nondegenerate())
    throw Error(Errc::degenerate_spectrum,
                "first-order perturbation theory needs a nondegenerate H_S");
  const Matrix& v = h_sys.eigenkets();
  const Matrix hp = v.adjoint() * h_prime.matrix() * v;
  const RealVector& e = h_sys.energies();
  Matrix c = Matrix::Zero(hp.rows(), hp.cols());
  for (Eigen::Index k = 0; k < c.rows(); ++k)
    for (Eigen::Index i = 0; i < c.cols(); ++i)
      if (k != i) c(k, i) = hp(k, i) / (e(i) - e(k));
  return c;
}

}  // namespace

std::vector<Vector> perturbed_kets_first_order(const Hamiltonian& h_sys,
                                               const PerturbationSpec& pert) {
  const Matrix c = mixing_coefficients(h_sys, pert.h_prime);
  const Matrix& v = h_sys.eigenkets();
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < v.cols(); ++i) out.emplace_back(v.col(i) + pert.epsilon * (v * c.col(i)));
  return out;
}

Matrix state_from_coefficients(const LevelCoefficients& p, std::span<const Vector> kets) {
  if (kets.size() != p.dim())
    throw Error(Errc::bad_factorization, "coefficient matrix does not match the number of kets");
  const Matrix basis = stack_columns(kets);
  return basis * p.matrix() * basis.adjoint();
}

DensityMatrix unperturbed_state(const LevelCoefficients& p, const Hamiltonian& h_sys) {
  require_same_dim(h_sys, p);
  return DensityMatrix::make(h_sys.eigenkets() * p.matrix() * h_sys.eigenkets().adjoint());
}

DensityMatrix perturbed_state_exact(const LevelCoefficients& p, const Hamiltonian& h_sys,
                                    const PerturbationSpec& pert) {
  require_same_dim(h_sys, p);
  const auto kets = perturbed_kets_exact(h_sys, pert);
  return DensityMatrix::make(state_from_coefficients(p, kets));
}

Matrix first_order_correction(const LevelCoefficients& p, const Hamiltonian& h_sys,
                              const Hamiltonian& h_prime) {
  require_same_dim(h_sys, p);
  const Matrix c = mixing_coefficients(h_sys, h_prime);
  const Matrix tilde = c * p.matrix() + p.matrix() * c.adjoint();
  const Matrix& v = h_sys.eigenkets();
  return v * tilde * v.adjoint();
}

Matrix perturbed_state_first_order(const LevelCoefficients& p, const Hamiltonian& h_sys,
                                   const PerturbationSpec& pert) {
  const Matrix& v = h_sys.eigenkets();
  return v * p.matrix() * v.adjoint() + pert.epsilon * first_order_correction(p, h_sys, pert.h_prime);
}

}  // namespace athermal
