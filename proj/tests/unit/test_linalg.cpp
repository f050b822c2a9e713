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
#include "athermal/linalg.hpp"
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

}  // namespace

TEST_CASE("kron agrees with the index-loop product") {
  oracle::Rng rng(1);
  for (auto [ra, rb] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{2, 2}}) {
    const Matrix a = oracle::ginibre(ra, rng), b = oracle::ginibre(rb, rng);
    CHECK(oracle::max_abs(kron(a, b) - oracle::kron(a, b)) < 1e-14);
  }
  const Vector x = Vector::Random(3), y = Vector::Random(2);
  CHECK((kron(x, y) - oracle::kron(x, y)).norm() < 1e-14);
}

TEST_CASE("partial trace and partial transpose match index sums") {
  oracle::Rng rng(2);
  for (auto [d1, d2] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const Matrix rho = oracle::random_state(d1 * d2, rng);
    const Dims dims{static_cast<std::size_t>(d1), static_cast<std::size_t>(d2)};
    CHECK(oracle::max_abs(partial_trace(rho, dims, Subsystem::first) - oracle::ptrace_keep_first(rho, d1, d2)) < 1e-14);
    CHECK(oracle::max_abs(partial_trace(rho, dims, Subsystem::second) - oracle::ptrace_keep_second(rho, d1, d2)) < 1e-14);
    CHECK(oracle::max_abs(partial_transpose(rho, dims, Subsystem::first) - oracle::ptranspose_first(rho, d1, d2)) < 1e-14);
  }
}

TEST_CASE("partial trace of a product returns the factor") {
  oracle::Rng rng(3);
  const Matrix a = oracle::random_state(2, rng), b = oracle::random_state(3, rng);
  const DensityMatrix ab = DensityMatrix::make(kron(a, b), Dims{2, 3});
  CHECK(approx_equal(partial_trace(ab, Subsystem::first).matrix(), a, 1e-14));
  CHECK(approx_equal(partial_trace(ab, Subsystem::second).matrix(), b, 1e-14));
}

TEST_CASE("density matrix validation") {
  Matrix m(2, 2);
  m << 1.2, 0, 0, -0.2;
  CHECK(code_of([&] { DensityMatrix::make(m); }) == Errc::invalid_state);
  m << 0.5, 0, 0, 0.6;
  CHECK(code_of([&] { DensityMatrix::make(m); }) == Errc::invalid_state);
  m << 0.5, 0.3, 0.1, 0.5;
  CHECK(code_of([&] { DensityMatrix::make(m); }) == Errc::invalid_state);
  CHECK(code_of([&] { DensityMatrix::make(Matrix::Identity(4, 4) / 4.0, Dims{3, 2}); }) == Errc::bad_factorization);
  CHECK(code_of([&] { Ket::make(Vector::Ones(2)); }) == Errc::invalid_state);
  CHECK(code_of([&] { Ket::basis(2, 2); }) == Errc::invalid_argument);
}

TEST_CASE("eigh rejects non-Hermitian input and reproduces the matrix") {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK(code_of([&] { eigh(m); }) == Errc::not_hermitian);
  oracle::Rng rng(4);
  const Matrix h = oracle::random_hermitian(4, rng);
  const Eigh e = eigh(h);
  CHECK(oracle::max_abs(e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint() - h) < 1e-12);
  for (Eigen::Index k = 1; k < e.values.size(); ++k) CHECK(e.values(k - 1) <= e.values(k));
  const auto ref = oracle::eigenvalues(h);
  for (std::size_t k = 0; k < ref.size(); ++k) CHECK(e.values(static_cast<Eigen::Index>(k)) == doctest::Approx(ref[k]).epsilon(1e-12));
}

TEST_CASE("entropy, trace norm and log on support") {
  for (double p : {0.0, 0.1, 0.5, 0.73, 1.0}) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = p;
    m(1, 1) = 1 - p;
    CHECK(entropy_bits(m) == doctest::Approx(oracle::binary_entropy(p)).epsilon(1e-13));
  }
  oracle::Rng rng(5);
  const Matrix a = oracle::random_state(3, rng);
  CHECK(entropy_bits(a) == doctest::Approx(oracle::entropy(a)).epsilon(1e-12));
  CHECK(oracle::max_abs(matrix_log2_on_support(a) - oracle::log2m(a)) < 1e-10);
  const Matrix h = oracle::random_hermitian(3, rng);
  CHECK(trace_norm(h) == doctest::Approx(oracle::trace_norm(h)).epsilon(1e-12));
  CHECK(trace_xlog2x(a) == doctest::Approx(-oracle::entropy(a)).epsilon(1e-12));
}

TEST_CASE("phase helpers") {
  CHECK(std::abs(phase_factor(std::numbers::pi) + 1.0) < 1e-15);
  const double r = reduce_phase(1e5);
  CHECK(std::abs(r) <= std::numbers::pi);
  CHECK(std::abs(std::polar(1.0, r) - std::polar(1.0, 1e5)) < 1e-10);
}
