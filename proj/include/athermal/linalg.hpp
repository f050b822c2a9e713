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

// Dense complex linear algebra for small bipartite systems: Kronecker
// products, partial trace/transpose, a deterministic Hermitian eigensolver
// and the entropic functionals built on it. Everything is a pure function of
// its arguments.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace athermal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kStateTolerance = 1e-9;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kSupportCutoff = 1e-12;

/// Subsystem dimensions of a bipartite operator, first factor first.
struct Dims {
  std::size_t first = 1;
  std::size_t second = 1;
  std::size_t total() const { return first * second; }
  bool operator==(const Dims&) const = default;
};

enum class Subsystem { first, second };

/// Max-abs entrywise comparison; shapes must agree.
bool approx_equal(const Matrix& a, const Matrix& b, double atol);

double hermiticity_defect(const Matrix& m);

/// Positive, unit-trace, Hermitian matrix with a two-factor (or single)
/// dimension split. Construction validates; instances are immutable.
class DensityMatrix {
 public:
  /// Single-factor state.
  static DensityMatrix make(Matrix m, double tol = kStateTolerance);
  static DensityMatrix make(Matrix m, Dims dims, double tol = kStateTolerance);
  static DensityMatrix pure(const Vector& ket, Dims dims);

  const Matrix& matrix() const { return m_; }
  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  DensityMatrix(Matrix m, Dims dims) : m_(std::move(m)), dims_(dims) {}
  Matrix m_;
  Dims dims_;
};

/// Unit vector. `make` rejects non-normalised input.
class Ket {
 public:
  static Ket make(Vector v, double tol = kStateTolerance);
  static Ket normalized(Vector v);
  static Ket basis(std::size_t dim, std::size_t index);
  const Vector& vector() const { return v_; }
  std::size_t dim() const { return static_cast<std::size_t>(v_.size()); }

 private:
  explicit Ket(Vector v) : v_(std::move(v)) {}
  Vector v_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

Matrix partial_trace(const Matrix& m, Dims dims, Subsystem keep);
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

Matrix partial_transpose(const Matrix& m, Dims dims, Subsystem on);
Matrix partial_transpose(const DensityMatrix& rho, Subsystem on);

/// Ascending eigenvalues, eigenvectors in columns. Each column has unit norm
/// and its largest-magnitude entry (first one on ties) real and positive, so
/// repeated calls are bit-identical.
struct Eigh {
  RealVector values;
  Matrix vectors;
};

Eigh eigh(const Matrix& m, double tol = kHermitianTolerance);

RealVector eigenvalues_hermitian(const Matrix& m);

double trace_norm(const Matrix& m);

/// Entropy in bits, 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);
/// Same functional on any Hermitian matrix; eigenvalues at or below
/// `cutoff` contribute nothing.
double entropy_bits(const Matrix& m, double cutoff = kSupportCutoff);

/// Spectral log2 on the support: eigenvalues above `cutoff` map to log2,
/// the rest to 0. Throws if an eigenvalue is below -cutoff.
Matrix matrix_log2_on_support(const Matrix& m, double cutoff = kSupportCutoff);

/// Tr[m log2 m] on the support.
double trace_xlog2x(const Matrix& m, double cutoff = kSupportCutoff);

/// Spectral function helper used for exp2 round trips and matrix powers.
template <typename F>
Matrix spectral_apply(const Matrix& m, F&& f) {
  const Eigh e = eigh(m);
  RealVector mapped(e.values.size());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) mapped(k) = f(e.values(k));
  return e.vectors * mapped.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

/// Outer product |a><b|.
Matrix outer(const Vector& a, const Vector& b);

/// Columns of `m` as vectors.
std::vector<Vector> columns(const Matrix& m);

/// e^{-i alpha} with alpha reduced mod 2 pi in extended precision first.
Complex phase_factor(double alpha);
/// alpha mod 2 pi into [0, 2 pi), reduced in long double.
double reduce_phase(double alpha);

}  // namespace athermal
