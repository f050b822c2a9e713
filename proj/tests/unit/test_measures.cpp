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
#include "athermal/measures.hpp"
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

DensityMatrix bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(v, Dims{2, 2});
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

TEST_CASE("log-negativity") {
  CHECK(log_negativity(bell()).value == doctest::Approx(1.0).epsilon(1e-13));
  oracle::Rng rng(11);
  const Matrix a = oracle::random_state(2, rng), b = oracle::random_state(3, rng);
  CHECK(std::abs(log_negativity(DensityMatrix::make(oracle::kron(a, b), Dims{2, 3})).value) < 1e-12);
  for (int s = 0; s < 5; ++s) {
    const Matrix rho = oracle::random_state(6, rng);
    CHECK(log_negativity(DensityMatrix::make(rho, Dims{2, 3})).value ==
          doctest::Approx(oracle::log_negativity(rho, 2, 3)).epsilon(1e-10));
  }
}

TEST_CASE("mutual information") {
  CHECK(mutual_information(bell()).value == doctest::Approx(2.0).epsilon(1e-13));
  oracle::Rng rng(12);
  for (int s = 0; s < 5; ++s) {
    const Matrix rho = oracle::random_state(6, rng);
    const double ref = oracle::mutual_information(rho, 2, 3);
    CHECK(mutual_information(DensityMatrix::make(rho, Dims{2, 3})).value == doctest::Approx(ref).epsilon(1e-10));
    CHECK(mutual_information_bits(rho, Dims{2, 3}) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("discord: closed forms and brute-force grid") {
  CHECK(discord(bell()).value == doctest::Approx(1.0).epsilon(1e-8));

  oracle::Rng rng(13);
  const Matrix cq = oracle::kron(diag({1, 0}), oracle::random_state(3, rng)) * 0.3 +
                    oracle::kron(diag({0, 1}), oracle::random_state(3, rng)) * 0.7;
  CHECK(std::abs(discord(DensityMatrix::make(cq, Dims{2, 3})).value) < 1e-9);

  for (int s = 0; s < 2; ++s) {
    const Matrix rho = oracle::random_state(6, rng);
    const double grid = oracle::discord_grid(rho, 3, 90, 180);
    const double d = discord(DensityMatrix::make(rho, Dims{2, 3})).value;
    CHECK(d <= grid + 1e-12);
    CHECK(d >= grid - 1e-3);
  }
  CHECK(code_of([&] { discord(DensityMatrix::make(Matrix::Identity(6, 6) / 6.0, Dims{3, 2})); }) ==
        Errc::unsupported_dimension);
}

TEST_CASE("projective measurement angles") {
  const auto m = ProjectiveMeasurementQubit::make(1.1, 4.0);
  CHECK(std::abs(m.psi().dot(m.psi_perp())) < 1e-15);
  CHECK(oracle::max_abs(m.projector(0) + m.projector(1) - Matrix::Identity(2, 2)) < 1e-15);
  CHECK(code_of([] { ProjectiveMeasurementQubit::make(4.0, 0.0); }) == Errc::invalid_argument);
}

TEST_CASE("Choi matrix of the identity channel is the maximally entangled projector") {
  const std::vector<Vector> kets{Vector::Unit(2, 0), Vector::Unit(2, 1)};
  const Matrix c = choi_matrix([](const Matrix& x) { return x; }, kets);
  CHECK(oracle::max_abs(c - bell().matrix()) < 1e-15);
}

TEST_CASE("expansion lemma residual against a direct evaluation") {
  oracle::Rng rng(14);
  const Matrix a = oracle::random_state(3, rng);
  Matrix b = oracle::random_hermitian(3, rng);
  b -= b.trace() / 3.0 * Matrix::Identity(3, 3);
  for (double eps : {1e-2, 1e-3}) {
    const Matrix x = a + eps * b;
    const double ref = std::abs((x * oracle::log2m(x)).trace().real() - (a * oracle::log2m(a)).trace().real() -
                                eps * (b * (Matrix::Identity(3, 3) + oracle::log2m(a))).trace().real());
    CHECK(expansion_lemma_residual(a, b, eps) == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("theta is the derivative of the mutual information") {
  oracle::Rng rng(15);
  const Hamiltonian hs(diag({0, 1.3})), hb(diag({0, 0.8, 2.1}));
  const Hamiltonian ht = total_hamiltonian(hs, hb);
  std::vector<Matrix> blocks;
  for (const auto& level : ht.levels()) blocks.push_back(oracle::random_unitary(static_cast<int>(level.indices.size()), rng));
  const ThermalOperation op(hs, build_block_unitary(ht, blocks), gibbs_state(hb, 0.9));
  const auto p = LevelCoefficients::make(oracle::random_state(2, rng));
  const Hamiltonian hp(oracle::random_hermitian(2, rng));

  const Matrix rho = unperturbed_state(p, hs).matrix();
  const Matrix tilde = first_order_correction(p, hs, hp);
  const double h = 1e-5;
  const double fd = (oracle::mutual_information(op.joint(rho + h * tilde), 2, 3) -
                     oracle::mutual_information(op.joint(rho - h * tilde), 2, 3)) / (2 * h);
  const ThetaResult theta = theta_lambda(op, p, hp);
  CHECK_FALSE(theta.support_truncated);
  CHECK(std::abs(fd) > 1e-4);
  CHECK(theta.value == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("distance from a member of the Markovian family vanishes") {
  const Hamiltonian hs(operators::pauli_z()), hb(operators::pauli_z() * 2.0);
  const GibbsState bath = gibbs_state(hb, 0.5);
  const auto kets = product_energy_basis(hs, hb);
  const MtoFamily family{hs, bath, kets, constrained_phase_manifold(4, AffinePhaseRelation{{1, -1, -1, 1}, 0.0})};
  const std::vector<double> free{0.7, 2.9, 4.4};
  const ThermalOperation op = family.operation(free);
  CHECK(mto_check(op, unperturbed_state(LevelCoefficients::make(Matrix::Identity(2, 2) * 0.3 + Matrix::Constant(2, 2, 0.2)), hs)).is_markovian);
  const auto ck = choi_kets(hs, std::nullopt, KetOrder::unperturbed);
  const MeasureValue d = distance_measure(op, family, ck);
  CHECK(d.value < 1e-5);
  CHECK(d.diagnostics.converged);
}

TEST_CASE("measure names round-trip") {
  for (auto k : {MeasureKind::log_negativity, MeasureKind::mutual_information, MeasureKind::discord, MeasureKind::choi_distance})
    CHECK(parse_measure_kind(to_string(k)) == k);
  CHECK_FALSE(parse_measure_kind("entropy").has_value());
}
