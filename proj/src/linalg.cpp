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

#include "athermal/linalg.hpp"

#include "athermal/error.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

namespace athermal {

namespace {

void require_bipartite(const Matrix& m, Dims dims) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != dims.total() ||
      dims.first == 0 || dims.second == 0) {
    std::ostringstream os;
    os << "bad factorization: " << m.rows() << "x" << m.cols() << " matrix vs dims ("
       << dims.first << ", " << dims.second << ")";
    throw Error(Errc::bad_factorization, os.str());
  }
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::bad_factorization: return "bad factorization";
    case Errc::not_hermitian: return "not hermitian";
    case Errc::invalid_state: return "invalid state";
    case Errc::not_unitary: return "not unitary";
    case Errc::not_energy_preserving: return "not energy preserving";
    case Errc::ambiguous_zero_temperature: return "ambiguous zero-temperature limit";
    case Errc::degenerate_spectrum: return "degenerate spectrum";
    case Errc::perturbation_too_strong: return "perturbation too strong";
    case Errc::undefined_quantity: return "undefined quantity";
    case Errc::singular_matrix: return "singular matrix";
    case Errc::unsupported_dimension: return "unsupported measured dimension";
    case Errc::inconsistent_relation: return "inconsistent relation";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::config: return "config error";
    case Errc::io: return "i/o error";
  }
  return "unknown";
}

bool approx_equal(const Matrix& a, const Matrix& b, double atol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a - b).cwiseAbs().maxCoeff() <= atol;
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// DensityMatrix / Ket

DensityMatrix DensityMatrix::make(Matrix m, double tol) {
  const auto n = static_cast<std::size_t>(m.rows());
  return make(std::move(m), Dims{n, 1}, tol);
}

DensityMatrix DensityMatrix::make(Matrix m, Dims dims, double tol) {
  require_bipartite(m, dims);
  const double herm = hermiticity_defect(m);
  if (herm > tol) {
    std::ostringstream os;
    os << "invalid state: hermiticity defect " << herm << " exceeds " << tol;
    throw Error(Errc::invalid_state, os.str());
  }
  Matrix h = hermitian_part(m);
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream os;
    os << "invalid state: trace " << tr << " differs from 1 by more than " << tol;
    throw Error(Errc::invalid_state, os.str());
  }
  const double min_eig = eigenvalues_hermitian(h).minCoeff();
  if (min_eig < -tol) {
    std::ostringstream os;
    os << "invalid state: minimum eigenvalue " << min_eig << " below " << -tol;
    throw Error(Errc::invalid_state, os.str());
  }
  return DensityMatrix(std::move(h), dims);
}

DensityMatrix DensityMatrix::pure(const Vector& ket, Dims dims) {
  const Ket k = Ket::make(ket);
  return make(outer(k.vector(), k.vector()), dims);
}

Ket Ket::make(Vector v, double tol) {
  const double n = v.norm();
  if (std::abs(n - 1.0) > tol) {
    std::ostringstream os;
    os << "invalid state: ket norm " << n << " is not 1";
    throw Error(Errc::invalid_state, os.str());
  }
  return Ket(std::move(v));
}

Ket Ket::normalized(Vector v) {
  const double n = v.norm();
  if (n == 0.0) throw Error(Errc::invalid_state, "invalid state: zero vector cannot be normalized");
  return Ket(v / n);
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(Errc::invalid_argument, "basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return Ket(std::move(v));
}

// ---------------------------------------------------------------------------
// Products and partial operations

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix partial_trace(const Matrix& m, Dims dims, Subsystem keep) {
  require_bipartite(m, dims);
  const auto d1 = static_cast<Eigen::Index>(dims.first);
  const auto d2 = static_cast<Eigen::Index>(dims.second);
  if (keep == Subsystem::first) {
    Matrix out = Matrix::Zero(d1, d1);
    for (Eigen::Index a = 0; a < d1; ++a)
      for (Eigen::Index c = 0; c < d1; ++c)
        for (Eigen::Index b = 0; b < d2; ++b) out(a, c) += m(a * d2 + b, c * d2 + b);
    return out;
  }
  Matrix out = Matrix::Zero(d2, d2);
  for (Eigen::Index a = 0; a < d1; ++a) out += m.block(a * d2, a * d2, d2, d2);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  const Matrix reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  const auto n = static_cast<std::size_t>(reduced.rows());
  return DensityMatrix::make(reduced, Dims{n, 1});
}

Matrix partial_transpose(const Matrix& m, Dims dims, Subsystem on) {
  require_bipartite(m, dims);
  const auto d1 = static_cast<Eigen::Index>(dims.first);
  const auto d2 = static_cast<Eigen::Index>(dims.second);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index a = 0; a < d1; ++a)
    for (Eigen::Index c = 0; c < d1; ++c) {
      if (on == Subsystem::first) {
        out.block(a * d2, c * d2, d2, d2) = m.block(c * d2, a * d2, d2, d2);
      } else {
        out.block(a * d2, c * d2, d2, d2) = m.block(a * d2, c * d2, d2, d2).transpose();
      }
    }
  return out;
}

Matrix partial_transpose(const DensityMatrix& rho, Subsystem on) {
  return partial_transpose(rho.matrix(), rho.dims(), on);
}

// ---------------------------------------------------------------------------
// Spectral routines

Eigh eigh(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw Error(Errc::not_hermitian, "eigh: matrix is not square");
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  const double defect = hermiticity_defect(m);
  if (defect > tol * scale) {
    std::ostringstream os;
    os << "eigh: input is not Hermitian (defect " << defect << ")";
    throw Error(Errc::not_hermitian, os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
  Eigh out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    auto col = out.vectors.col(c);
    col.normalize();
    const double largest = col.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    while (std::abs(col(pivot)) < largest - 1e-12) ++pivot;
    const Complex z = col(pivot);
    col *= std::conj(z) / std::abs(z);
    col(pivot) = std::abs(z);
  }
  return out;
}

RealVector eigenvalues_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.rows() == m.cols() && hermiticity_defect(m) <= 1e-14 * scale) {
    return eigenvalues_hermitian(m).cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double entropy_bits(const Matrix& m, double cutoff) {
  const RealVector w = eigenvalues_hermitian(m);
  double s = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (w(k) > cutoff) s -= w(k) * std::log2(w(k));
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return std::max(0.0, entropy_bits(rho.matrix(), 0.0));
}

Matrix matrix_log2_on_support(const Matrix& m, double cutoff) {
  const Eigh e = eigh(m);
  RealVector logs(e.values.size());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    const double w = e.values(k);
    if (w < -cutoff) {
      std::ostringstream os;
      os << "matrix log: negative eigenvalue " << w << " below -" << cutoff;
      throw Error(Errc::invalid_state, os.str());
    }
    logs(k) = w > cutoff ? std::log2(w) : 0.0;
  }
  return e.vectors * logs.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

double trace_xlog2x(const Matrix& m, double cutoff) { return -entropy_bits(m, cutoff); }

Matrix outer(const Vector& a, const Vector& b) { return a * b.adjoint(); }

std::vector<Vector> columns(const Matrix& m) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.emplace_back(m.col(c));
  return out;
}

double reduce_phase(double alpha) {
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double r = std::fmod(static_cast<long double>(alpha), two_pi);
  if (r < 0) r += two_pi;
  return static_cast<double>(r);
}

Complex phase_factor(double alpha) { return std::polar(1.0, -reduce_phase(alpha)); }

}  // namespace athermal
