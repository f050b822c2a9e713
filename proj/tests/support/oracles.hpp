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

// Reference computations for the tests. Written with plain index loops and
// Eigen's general (non-Hermitian) eigensolver so they share no code path
// with the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline M kron(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline V kron(const V& a, const V& b) {
  V out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index k = 0; k < b.size(); ++k) out(i * b.size() + k) = a(i) * b(k);
  return out;
}

// (rho_A)_{ij} = sum_k rho_{ik,jk};  (rho_B)_{kl} = sum_i rho_{ik,il}
inline M ptrace_keep_first(const M& m, int d1, int d2) {
  M out = M::Zero(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      for (int k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
  return out;
}

inline M ptrace_keep_second(const M& m, int d1, int d2) {
  M out = M::Zero(d2, d2);
  for (int k = 0; k < d2; ++k)
    for (int l = 0; l < d2; ++l)
      for (int i = 0; i < d1; ++i) out(k, l) += m(i * d2 + k, i * d2 + l);
  return out;
}

// transpose on the first factor: <ik|X^T1|jl> = <jk|X|il>
inline M ptranspose_first(const M& m, int d1, int d2) {
  M out(m.rows(), m.cols());
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      for (int k = 0; k < d2; ++k)
        for (int l = 0; l < d2; ++l) out(i * d2 + k, j * d2 + l) = m(j * d2 + k, i * d2 + l);
  return out;
}

inline std::vector<double> eigenvalues(const M& m) {
  Eigen::ComplexEigenSolver<M> es(m, false);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()(k).real());
  std::sort(out.begin(), out.end());
  return out;
}

inline double entropy(const M& rho) {
  double s = 0.0;
  for (double l : eigenvalues(rho))
    if (l > 1e-13) s -= l * std::log2(l);
  return s;
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

inline double trace_norm(const M& m) { return Eigen::JacobiSVD<M>(m).singularValues().sum(); }

inline double log_negativity(const M& rho, int d1, int d2) {
  double s = 0.0;
  for (double l : eigenvalues(ptranspose_first(rho, d1, d2))) s += std::abs(l);
  return std::log2(s);
}

inline double mutual_information(const M& rho, int d1, int d2) {
  return entropy(ptrace_keep_first(rho, d1, d2)) + entropy(ptrace_keep_second(rho, d1, d2)) - entropy(rho);
}

// log2 of a full-rank Hermitian matrix through the general eigensolver.
inline M log2m(const M& a) {
  Eigen::ComplexEigenSolver<M> es(a);
  V l(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < l.size(); ++k) l(k) = std::log2(es.eigenvalues()(k).real());
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().inverse();
}

// Discord with a qubit measured on the first factor, by exhaustive (theta, phi) grid.
inline double discord_grid(const M& rho, int d2, int n_theta, int n_phi) {
  double best = 1e300;
  for (int a = 0; a <= n_theta; ++a)
    for (int b = 0; b < n_phi; ++b) {
      const double th = std::numbers::pi * a / n_theta, ph = 2 * std::numbers::pi * b / n_phi;
      V psi(2), perp(2);
      psi << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
      perp << -std::polar(std::sin(th / 2), -ph), std::cos(th / 2);
      double cond = 0.0;
      for (const V* v : {&psi, &perp}) {
        const M proj = kron(M((*v) * v->adjoint()), M::Identity(d2, d2));
        const M post = proj * rho * proj;
        const double p = post.trace().real();
        if (p > 1e-14) cond += p * entropy(ptrace_keep_second(post / p, 2, d2));
      }
      best = std::min(best, cond);
    }
  return entropy(ptrace_keep_first(rho, 2, d2)) - entropy(rho) + best;
}

inline M ginibre(int d, Rng& rng) {
  std::normal_distribution<double> g;
  M a(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = C(g(rng), g(rng));
  return a;
}

inline M random_state(int d, Rng& rng) {
  const M a = ginibre(d, rng);
  M rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline M random_hermitian(int d, Rng& rng) {
  const M a = ginibre(d, rng);
  return (a + a.adjoint()) * 0.5;
}

inline M random_unitary(int d, Rng& rng) {
  Eigen::HouseholderQR<M> qr(ginibre(d, rng));
  M q = qr.householderQ();
  for (int k = 0; k < d; ++k) q.col(k) *= std::polar(1.0, std::arg(qr.matrixQR()(k, k)));
  return q;
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline double max_abs(const M& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
