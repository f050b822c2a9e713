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

#include "athermal/error.hpp"
#include "athermal/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace athermal {

using nlohmann::json;

namespace {

using Rng = std::mt19937_64;

Matrix ginibre(std::size_t d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = Complex(g(rng), g(rng));
  return a;
}

Matrix haar_unitary(std::size_t d, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(d, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index k = 0; k < q.cols(); ++k) q.col(k) *= std::polar(1.0, std::arg(r(k, k)));
  return q;
}

Matrix random_state(std::size_t d, Rng& rng) {
  const Matrix a = ginibre(d, rng);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

Matrix random_hermitian(std::size_t d, Rng& rng) {
  const Matrix a = ginibre(d, rng);
  return (a + a.adjoint()) * 0.5;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

CheckResult bounded(const std::string& name, double value, double limit, const std::string& what) {
  return CheckResult{name, "", value <= limit, what + " " + fmt(value) + " (limit " + fmt(limit) + ")"};
}

// Diagonal phases in the computational product basis, diagonal bath state.
void diagonal_phase_ppt(std::size_t db, std::size_t n, Rng& rng, double& spectrum_dev, double& log_neg) {
  for (std::size_t s = 0; s < n; ++s) {
    const Matrix rho = random_state(2, rng);
    RealVector w(static_cast<Eigen::Index>(db));
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = uniform(rng, 0.01, 1.0);
    w /= w.sum();
    Vector phases(static_cast<Eigen::Index>(2 * db));
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = phase_factor(uniform(rng, 0.0, 2 * std::numbers::pi));
    const Matrix u = phases.asDiagonal();
    const Matrix joint = u * kron(rho, Matrix(w.cast<Complex>().asDiagonal())) * u.adjoint();
    const DensityMatrix state = DensityMatrix::make(joint, Dims{2, db});
    RealVector a = eigenvalues_hermitian(joint);
    RealVector b = eigenvalues_hermitian(partial_transpose(state, Subsystem::first));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    spectrum_dev = std::max(spectrum_dev, (a - b).cwiseAbs().maxCoeff());
    log_neg = std::max(log_neg, log_negativity(state).value);
  }
}

struct MtoCase {
  ThermalOperation op;
  Matrix rho;
  Matrix rho_first_order;
  bool coherent;
};

MtoCase random_mto_case(std::size_t idx, Rng& rng) {
  const std::size_t ds = 2 + idx % 2;
  const std::size_t db = 2 + (idx / 2) % 2;
  Hamiltonian hs(Matrix::Zero(1, 1));
  for (;;) {
    RealVector e(static_cast<Eigen::Index>(ds));
    for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = uniform(rng, 0.0, 3.0);
    const Matrix v = haar_unitary(ds, rng);
    hs = Hamiltonian(v * e.cast<Complex>().asDiagonal() * v.adjoint());
    if (hs.nondegenerate(1e-3) && hs.nondegenerate_bohr_spectrum(1e-3)) break;
  }
  RealVector eb(static_cast<Eigen::Index>(db));
  for (Eigen::Index k = 0; k < eb.size(); ++k) eb(k) = uniform(rng, 0.0, 3.0);
  const Hamiltonian hb(Matrix(eb.cast<Complex>().asDiagonal()));
  const GibbsState bath = gibbs_state(hb, uniform(rng, 0.2, 2.0));

  const bool markovian = idx % 4 < 2;
  std::vector<double> f(ds), g(db), phases;
  for (auto& x : f) x = uniform(rng, 0.0, 2 * std::numbers::pi);
  for (auto& x : g) x = uniform(rng, 0.0, 2 * std::numbers::pi);
  for (std::size_t i = 0; i < ds; ++i)
    for (std::size_t r = 0; r < db; ++r)
      phases.push_back(markovian ? f[i] + g[r] : uniform(rng, 0.0, 2 * std::numbers::pi));
  const auto kets = product_energy_basis(hs, hb);
  ThermalOperation op(hs, build_block_unitary(total_hamiltonian(hs, hb), kets, phases), bath);

  const bool coherent = idx % 3 != 0;
  Matrix p;
  if (coherent) {
    p = random_state(ds, rng);
  } else {
    RealVector w(static_cast<Eigen::Index>(ds));
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = uniform(rng, 0.05, 1.0);
    p = (w / w.sum()).cast<Complex>().asDiagonal();
  }
  const LevelCoefficients coeffs = LevelCoefficients::make(p);
  const Matrix rho = unperturbed_state(coeffs, hs).matrix();
  const Matrix rho1 = perturbed_state_first_order(coeffs, hs, PerturbationSpec(Hamiltonian(random_hermitian(ds, rng)), 0.05));
  return MtoCase{std::move(op), rho, rho1, coherent};
}

bool verdicts_agree(const MtoConstraintReport& r) { return r.is_markovian == r.residuals_satisfied; }

bool same_residuals(const MtoConstraintReport& a, const MtoConstraintReport& b) {
  if (a.amplitude_residuals.size() != b.amplitude_residuals.size() || a.phase_residuals.size() != b.phase_residuals.size())
    return false;
  for (std::size_t k = 0; k < a.amplitude_residuals.size(); ++k)
    if (a.amplitude_residuals[k].residual != b.amplitude_residuals[k].residual) return false;
  for (std::size_t k = 0; k < a.phase_residuals.size(); ++k)
    if (a.phase_residuals[k].residual != b.phase_residuals[k].residual) return false;
  return true;
}

}  // namespace

double first_order_remainder_ratio(const ExperimentConfig& cfg, double temperature, double eps_hi, double eps_lo) {
  const ExperimentModel m = build_model(cfg);
  const ThermalOperation op(m.h_sys, m.unitary, gibbs_state(m.h_bath, 1.0 / temperature));
  const double theta = theta_lambda(op, m.coefficients, m.h_prime).value;
  const Matrix rho = unperturbed_state(m.coefficients, m.h_sys).matrix();
  const Matrix tilde = first_order_correction(m.coefficients, m.h_sys, m.h_prime);
  const double i0 = mutual_information_bits(op.joint(rho), op.dims());
  auto remainder = [&](double e) {
    return std::abs(mutual_information_bits(op.joint(rho + e * tilde), op.dims()) - i0 - e * theta);
  };
  return remainder(eps_hi) / remainder(eps_lo);
}

SweepResult run_property_suite(const PropertySuiteOptions& opts) {
  const auto started = std::chrono::steady_clock::now();
  SweepResult result;
  result.experiment = "properties";
  Rng rng(opts.seed);

  {
    double dev = 0.0, ln = 0.0;
    diagonal_phase_ppt(2, opts.ppt_samples, rng, dev, ln);
    result.checks.push_back(bounded("diagonal_phase_ppt_spectra_2x2", dev, 1e-10, "max sorted-spectrum deviation"));
    double dev3 = 0.0;
    diagonal_phase_ppt(3, opts.ppt_samples, rng, dev3, ln);
    result.checks.push_back(bounded("diagonal_phase_ppt_spectra_2x3", dev3, 1e-10, "max sorted-spectrum deviation"));
    result.checks.push_back(bounded("diagonal_phase_log_negativity", ln, 1e-9, "max log-negativity"));
  }

  {
    std::size_t agree = 0, agree1 = 0, same = 0, coherent = 0, markov = 0;
    for (std::size_t k = 0; k < opts.mto_samples; ++k) {
      const MtoCase c = random_mto_case(k, rng);
      const auto r0 = mto_check(c.op, c.rho, 1e-9);
      const auto r1 = mto_check(c.op, c.rho_first_order, 1e-9);
      agree += verdicts_agree(r0);
      agree1 += verdicts_agree(r1);
      markov += r0.is_markovian;
      if (c.coherent) {
        ++coherent;
        same += same_residuals(r0, r1) && r0.is_markovian == r1.is_markovian;
      }
    }
    const std::string n = std::to_string(opts.mto_samples);
    result.checks.push_back({"mto_verdict_agreement", "", agree == opts.mto_samples,
                             std::to_string(agree) + "/" + n + " agree (" + std::to_string(markov) + " Markovian)"});
    result.checks.push_back({"mto_verdict_agreement_first_order", "", agree1 == opts.mto_samples,
                             std::to_string(agree1) + "/" + n + " agree"});
    result.checks.push_back({"mto_first_order_same_constraints", "", same == coherent,
                             std::to_string(same) + "/" + std::to_string(coherent) +
                                 " coherent inputs keep identical residuals and verdicts"});
  }

  {
    double fixed = 0.0, validity = 0.0;
    for (std::size_t s = 0; s < opts.fixed_point_samples; ++s) {
      const std::size_t ds = 2 + s % 2, db = 2 + (s / 2) % 2;
      // integer spectra make total-energy degeneracies common
      RealVector es(static_cast<Eigen::Index>(ds)), eb(static_cast<Eigen::Index>(db));
      for (Eigen::Index k = 0; k < es.size(); ++k) es(k) = std::floor(uniform(rng, 0.0, 3.0));
      for (Eigen::Index k = 0; k < eb.size(); ++k) eb(k) = std::floor(uniform(rng, 0.0, 3.0));
      const Matrix vs = haar_unitary(ds, rng), vb = haar_unitary(db, rng);
      const Hamiltonian hs(vs * es.cast<Complex>().asDiagonal() * vs.adjoint());
      const Hamiltonian hb(vb * eb.cast<Complex>().asDiagonal() * vb.adjoint());
      const Hamiltonian ht = total_hamiltonian(hs, hb);
      std::vector<Matrix> blocks;
      for (const auto& level : ht.levels()) blocks.push_back(haar_unitary(level.indices.size(), rng));
      const double beta = uniform(rng, 0.1, 3.0);
      const ThermalOperation op(hs, build_block_unitary(ht, blocks), gibbs_state(hb, beta));
      const DensityMatrix tau_s = gibbs_state(hs, beta).state;
      const auto out = op.apply(tau_s);
      fixed = std::max(fixed, (out.system.matrix() - tau_s.matrix()).cwiseAbs().maxCoeff());
      const Matrix joint = op.joint(random_state(ds, rng));
      validity = std::max({validity, -eigenvalues_hermitian(joint).minCoeff(), std::abs(joint.trace().real() - 1.0),
                           hermiticity_defect(joint)});
    }
    result.checks.push_back(bounded("fixed_point", fixed, 1e-9, "max |Lambda(tau_S) - tau_S|"));
    result.checks.push_back(bounded("joint_validity", validity, 1e-9, "max validity defect"));
  }

  for (const std::string name : {"fig2", "fig3"}) {
    const ExperimentConfig cfg = builtin_config(name);
    double lo = 1e300, hi = -1e300;
    for (double t : cfg.temperatures) {
      const double r = first_order_remainder_ratio(cfg, t, 1e-2, 5e-3);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    result.checks.push_back({"first_order_law_" + name, "", lo >= 3.2 && hi <= 4.8,
                             "remainder ratio eps=1e-2 vs 5e-3 in [" + fmt(lo) + ", " + fmt(hi) + "] over " +
                                 std::to_string(cfg.temperatures.size()) + " temperatures"});
  }

  {
    double lo = 1e300, hi = -1e300;
    for (std::size_t s = 0; s < opts.lemma_samples; ++s) {
      const std::size_t d = 2 + s % 5;
      Matrix a = random_state(d, rng);
      a = 0.8 * a + 0.2 * Matrix::Identity(a.rows(), a.cols()) / static_cast<double>(d);
      Matrix b = random_hermitian(d, rng);
      b -= b.trace() / static_cast<double>(d) * Matrix::Identity(b.rows(), b.cols());
      const double r = expansion_lemma_residual(a, b, 1e-2) / expansion_lemma_residual(a, b, 5e-3);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    result.checks.push_back({"expansion_lemma_slope", "", lo >= 3.2 && hi <= 4.8,
                             "residual ratio eps=1e-2 vs 5e-3 in [" + fmt(lo) + ", " + fmt(hi) + "] over " +
                                 std::to_string(opts.lemma_samples) + " traceless pairs"});
  }

  {
    const auto manifold = constrained_phase_manifold(4, AffinePhaseRelation{{-1, -1, 1, 1}, 0.0});
    const std::vector<double> alpha{1e4, 2e4, 3e4, 4e4};
    result.checks.push_back({"distance_example_relation_residual", "", true,
                             "reported: |e^{i(a4-a1)} - e^{i(a2-a3)}| = " +
                                 fmt(std::abs(std::polar(1.0, reduce_phase(alpha[3] - alpha[0])) -
                                              std::polar(1.0, reduce_phase(alpha[1] - alpha[2])))) +
                                 ", wrapped residual " + fmt(manifold.residual(alpha))});
  }

  result.metadata = json{{"experiment", "properties"},
                         {"seed", opts.seed},
                         {"samples",
                          {{"diagonal_phase_ppt", opts.ppt_samples},
                           {"mto", opts.mto_samples},
                           {"fixed_point", opts.fixed_point_samples},
                           {"lemma", opts.lemma_samples}}},
                         {"elapsed_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()},
                         {"deviations", result.deviations()}};
  return result;
}

}  // namespace athermal
