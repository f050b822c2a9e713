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
#include "athermal/thermal.hpp"
#include "../support/oracles.hpp"

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

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) {
    m(k, k) = x;
    ++k;
  }
  return m;
}

}  // namespace

TEST_CASE("Gibbs state of a qubit has Boltzmann populations") {
  const Hamiltonian h(operators::pauli_z());
  for (double beta : {0.0, 0.3, 2.0}) {
    const GibbsState g = gibbs_state(h, beta);
    const double p_ground = std::exp(beta) / (std::exp(beta) + std::exp(-beta));
    CHECK(g.population(0) == doctest::Approx(p_ground));
    CHECK(std::abs(g.state.matrix()(1, 1).real() - p_ground) < 1e-14);
  }
  const GibbsState zero = gibbs_state(h, kInfiniteBeta);
  CHECK(std::abs(zero.state.matrix()(1, 1).real() - 1.0) < 1e-15);
  CHECK(code_of([&] { gibbs_state(Hamiltonian(Matrix::Identity(2, 2)), kInfiniteBeta); }) ==
        Errc::ambiguous_zero_temperature);
  CHECK(code_of([&] { gibbs_state(h, -1.0); }) == Errc::invalid_argument);
}

TEST_CASE("Gell-Mann matrices are traceless and orthogonal") {
  for (int a = 1; a <= 8; ++a) {
    const Matrix la = operators::gell_mann(a);
    CHECK(std::abs(la.trace()) < 1e-15);
    CHECK(hermiticity_defect(la) < 1e-15);
    for (int b = 1; b <= 8; ++b)
      CHECK(std::abs((la * operators::gell_mann(b)).trace() - Complex(a == b ? 2.0 : 0.0)) < 1e-14);
  }
  CHECK(code_of([] { operators::gell_mann(9); }) == Errc::invalid_argument);
}

TEST_CASE("Bohr spectrum degeneracy") {
  CHECK(Hamiltonian(diag({0, 1, 3})).nondegenerate_bohr_spectrum());
  CHECK_FALSE(Hamiltonian(diag({0, 1, 2})).nondegenerate_bohr_spectrum());
  CHECK_FALSE(Hamiltonian(diag({0, 0, 2})).nondegenerate());
}

TEST_CASE("block unitaries commute with the total Hamiltonian") {
  oracle::Rng rng(7);
  const Hamiltonian hs(diag({0, 1})), hb(diag({0, 1, 2}));
  const Hamiltonian ht = total_hamiltonian(hs, hb);
  std::vector<Matrix> blocks;
  for (const auto& level : ht.levels()) blocks.push_back(oracle::random_unitary(static_cast<int>(level.indices.size()), rng));
  const auto u = build_block_unitary(ht, blocks);
  CHECK(u.energy_preserving());
  CHECK(commutator_norm(u, ht) < 1e-12);
  CHECK(oracle::max_abs(u.matrix() * u.matrix().adjoint() - Matrix::Identity(6, 6)) < 1e-12);

  // a ket mixing two total-energy levels cannot be used
  std::vector<Vector> kets = product_energy_basis(hs, hb);
  const Vector plus = (kets[0] + kets[1]) / std::sqrt(2.0), minus = (kets[0] - kets[1]) / std::sqrt(2.0);
  kets[0] = plus;
  kets[1] = minus;
  const std::vector<double> phases(6, 0.3);
  CHECK(code_of([&] { build_block_unitary(ht, kets, phases); }) == Errc::not_energy_preserving);
  CHECK_FALSE(phase_unitary(kets, phases).energy_preserving());
}

TEST_CASE("thermal operation: joint state, trace preservation and fixed point") {
  oracle::Rng rng(8);
  const Hamiltonian hs(operators::pauli_z()), hb(operators::pauli_z());
  const Hamiltonian ht = total_hamiltonian(hs, hb);
  std::vector<Matrix> blocks;
  for (const auto& level : ht.levels()) blocks.push_back(oracle::random_unitary(static_cast<int>(level.indices.size()), rng));
  const auto u = build_block_unitary(ht, blocks);
  const GibbsState bath = gibbs_state(hb, 0.7);
  const ThermalOperation op(hs, u, bath);
  const Matrix rho = oracle::random_state(2, rng);
  const Matrix expect = u.matrix() * oracle::kron(rho, bath.state.matrix()) * u.matrix().adjoint();
  CHECK(oracle::max_abs(op.joint(rho) - expect) < 1e-13);
  CHECK(oracle::max_abs(op.map(rho) - oracle::ptrace_keep_first(expect, 2, 2)) < 1e-13);
  CHECK(std::abs(op.map(rho).trace().real() - 1.0) < 1e-13);
  const DensityMatrix tau = gibbs_state(hs, 0.7).state;
  CHECK(oracle::max_abs(op.apply(tau).system.matrix() - tau.matrix()) < 1e-12);
}

TEST_CASE("Markovianity check on product-phase and generic unitaries") {
  oracle::Rng rng(9);
  const Hamiltonian hs(diag({0, 1, 3})), hb(diag({0, 0.7}));
  const auto kets = product_energy_basis(hs, hb);
  const Hamiltonian ht = total_hamiltonian(hs, hb);
  const GibbsState bath = gibbs_state(hb, 1.1);
  const Matrix rho = oracle::random_state(3, rng);

  std::vector<double> markov, generic;
  const double f[3] = {0.4, 1.9, 5.0}, g[2] = {0.2, 2.5};
  for (int i = 0; i < 3; ++i)
    for (int r = 0; r < 2; ++r) {
      markov.push_back(f[i] + g[r]);
      generic.push_back(oracle::uniform(rng, 0, 6.28));
    }
  const auto ok = mto_check(ThermalOperation(hs, build_block_unitary(ht, kets, markov), bath), rho);
  CHECK(ok.is_markovian);
  CHECK(ok.residuals_satisfied);
  CHECK(ok.joint_product_deviation < 1e-12);
  const auto bad = mto_check(ThermalOperation(hs, build_block_unitary(ht, kets, generic), bath), rho);
  CHECK_FALSE(bad.is_markovian);
  CHECK_FALSE(bad.residuals_satisfied);
}

TEST_CASE("perturbed kets and states") {
  oracle::Rng rng(10);
  const Hamiltonian hs(diag({-1.0, 0.4, 2.0}));
  const Hamiltonian hp(oracle::random_hermitian(3, rng));
  const auto p = LevelCoefficients::make(oracle::random_state(3, rng));

  const auto k0 = perturbed_kets_exact(hs, PerturbationSpec(hp, 0.0));
  for (std::size_t i = 0; i < 3; ++i) CHECK((k0[i] - hs.eigenket(i)).norm() < 1e-15);

  // first-order correction is the derivative of the exact perturbed state
  const Matrix rho0 = unperturbed_state(p, hs).matrix();
  const Matrix tilde = first_order_correction(p, hs, hp);
  for (double h : {1e-4, 5e-5}) {
    const Matrix fd = (perturbed_state_exact(p, hs, PerturbationSpec(hp, h)).matrix() - rho0) / h;
    CHECK(oracle::max_abs(fd - tilde) < 50 * h);
  }
  CHECK(std::abs(tilde.trace()) < 1e-14);
  CHECK(hermiticity_defect(tilde) < 1e-14);

  // first-order kets: |i> + eps sum_k <k|H'|i>/(E_i - E_k) |k>
  const auto k1 = perturbed_kets_first_order(hs, PerturbationSpec(hp, 0.01));
  const auto& e = hs.energies();
  for (int i = 0; i < 3; ++i) {
    Vector expect = hs.eigenket(static_cast<std::size_t>(i));
    for (int k = 0; k < 3; ++k)
      if (k != i) {
        const Complex hki = hs.eigenket(static_cast<std::size_t>(k)).dot(hp.matrix() * hs.eigenket(static_cast<std::size_t>(i)));
        expect += 0.01 * hki / (e(i) - e(k)) * hs.eigenket(static_cast<std::size_t>(k));
      }
    CHECK((k1[static_cast<std::size_t>(i)] - expect).norm() < 1e-14);
  }

  CHECK(code_of([&] { perturbed_kets_first_order(Hamiltonian(diag({0, 0, 1})), PerturbationSpec(hp, 0.1)); }) ==
        Errc::degenerate_spectrum);
  CHECK(code_of([&] { PerturbationSpec(hp, -0.1); }) == Errc::invalid_argument);
}

TEST_CASE("level coefficients validation") {
  Matrix p(2, 2);
  p << 0.7, 0, 0, 0.4;
  CHECK(code_of([&] { LevelCoefficients::make(p); }) == Errc::invalid_state);
  const std::vector<double> pops{0.25, 0.75};
  const auto c = LevelCoefficients::diagonal(pops);
  CHECK(c.matrix()(1, 1).real() == doctest::Approx(0.75));
}
