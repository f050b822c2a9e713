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

#include "athermal/measures.hpp"

#include "athermal/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace athermal {

namespace {

constexpr double kBranchCutoff = 1e-14;
constexpr double kKernelLeak = 1e-10;

double trace_real(const Matrix& m) { return m.trace().real(); }

/// Tr[beta (I + log2 state)], refusing states whose kernel beta reaches into.
double first_order_entropy_term(const Matrix& beta, const Matrix& state, double cutoff,
                                bool& truncated) {
  const Eigh e = eigh(state);
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index k = 0; k < e.values.size(); ++k)
    if (e.values(k) <= cutoff) kernel.push_back(k);
  if (!kernel.empty()) {
    truncated = true;
    Matrix q(state.rows(), static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t k = 0; k < kernel.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = e.vectors.col(kernel[k]);
    const double leak = (q.adjoint() * beta * q).cwiseAbs().maxCoeff();
    if (leak > kKernelLeak) {
      std::ostringstream os;
      os << "theta undefined at this point: evolved state is rank deficient and the first-order "
            "correction has weight "
         << leak << " on its kernel";
      throw Error(Errc::undefined_quantity, os.str());
    }
  }
  const Matrix log_state = matrix_log2_on_support(state, cutoff);
  return trace_real(beta) + trace_real(beta * log_state);
}

Matrix random_state(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = Complex(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  return rho / trace_real(rho);
}

}  // namespace

const char* to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::log_negativity: return "log_negativity";
    case MeasureKind::mutual_information: return "mutual_information";
    case MeasureKind::discord: return "discord";
    case MeasureKind::choi_distance: return "choi_distance";
  }
  return "unknown";
}

std::optional<MeasureKind> parse_measure_kind(std::string_view name) {
  for (auto k : {MeasureKind::log_negativity, MeasureKind::mutual_information, MeasureKind::discord,
                 MeasureKind::choi_distance})
    if (name == to_string(k)) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

ProjectiveMeasurementQubit ProjectiveMeasurementQubit::make(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi) || !(phi >= 0.0 && phi <= 2.0 * std::numbers::pi))
    throw Error(Errc::invalid_argument, "measurement angles out of range: theta in [0, pi], phi in [0, 2 pi]");
  return ProjectiveMeasurementQubit(theta, phi);
}

Vector ProjectiveMeasurementQubit::psi() const {
  Vector v(2);
  v(0) = std::cos(theta_ / 2);
  v(1) = std::polar(1.0, phi_) * std::sin(theta_ / 2);
  return v;
}

Vector ProjectiveMeasurementQubit::psi_perp() const {
  Vector v(2);
  v(0) = -std::sin(theta_ / 2);
  v(1) = std::polar(1.0, phi_) * std::cos(theta_ / 2);
  return v;
}

Matrix ProjectiveMeasurementQubit::projector(int outcome) const {
  const Vector v = outcome == 0 ? psi() : psi_perp();
  return outer(v, v);
}

MeasureValue log_negativity(const DensityMatrix& joint) {
  const double norm = trace_norm(partial_transpose(joint, Subsystem::first));
  return MeasureValue{MeasureKind::log_negativity, std::log2(norm), {}};
}

double mutual_information_bits(const Matrix& joint, Dims dims) {
  return entropy_bits(partial_trace(joint, dims, Subsystem::first)) +
         entropy_bits(partial_trace(joint, dims, Subsystem::second)) - entropy_bits(joint);
}

MeasureValue mutual_information(const DensityMatrix& joint) {
  return MeasureValue{MeasureKind::mutual_information,
                      mutual_information_bits(joint.matrix(), joint.dims()), {}};
}

double measured_conditional_entropy(const DensityMatrix& joint,
                                    const ProjectiveMeasurementQubit& m) {
  const Dims dims = joint.dims();
  const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(dims.second),
                                     static_cast<Eigen::Index>(dims.second));
  double total = 0.0;
  for (int outcome = 0; outcome < 2; ++outcome) {
    const Matrix p = kron(m.projector(outcome), id);
    const Matrix branch = p * joint.matrix() * p;
    const double prob = trace_real(branch);
    if (prob <= kBranchCutoff) continue;
    total += prob * entropy_bits(partial_trace(branch, dims, Subsystem::second) / prob);
  }
  return total;
}

OptimizerConfig default_discord_optimizer() {
  OptimizerConfig cfg;
  cfg.grid_per_dim = 24;
  cfg.seeds = 40;
  return cfg;
}

MeasureValue discord(const DensityMatrix& joint, const OptimizerConfig& cfg) {
  if (joint.dims().first != 2)
    throw Error(Errc::unsupported_dimension,
                "unsupported measured dimension: discord measures a qubit first factor, got d = " +
                    std::to_string(joint.dims().first));
  const double base = entropy_bits(partial_trace(joint.matrix(), joint.dims(), Subsystem::first)) -
                      entropy_bits(joint.matrix());
  // The Bloch vector (sin t cos p, sin t sin p, cos t) is smooth in t over the
  // whole circle, so refinement runs on the torus and crosses the poles freely;
  // seeds cover t in [0, pi] including both poles.
  auto canonical = [](double t, double p) {
    if (t > std::numbers::pi) {
      t = 2.0 * std::numbers::pi - t;
      p = std::fmod(p + std::numbers::pi, 2.0 * std::numbers::pi);
    }
    return ProjectiveMeasurementQubit::make(std::clamp(t, 0.0, std::numbers::pi), p);
  };
  const Objective f = [&](std::span<const double> x) {
    return measured_conditional_entropy(joint, canonical(x[0], x[1]));
  };
  const std::size_t g = std::max<std::size_t>(cfg.grid_per_dim, 2);
  std::vector<std::vector<double>> grid;
  std::vector<double> values;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      grid.push_back({std::numbers::pi * static_cast<double>(i) / static_cast<double>(g - 1),
                      2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(g)});
      values.push_back(f(grid.back()));
    }
  std::vector<std::vector<double>> starts;
  for (auto idx : best_indices(values, cfg.seeds)) starts.push_back(grid[idx]);
  const std::vector<Interval> torus{{0.0, 2.0 * std::numbers::pi, true}, {0.0, 2.0 * std::numbers::pi, true}};
  auto res = minimize_from(f, torus, starts, cfg, grid.size());
  const auto best = canonical(res.best_point[0], res.best_point[1]);
  res.best_point = {best.theta(), best.phi()};
  MeasureValue out{MeasureKind::discord, base + res.best_value, {}};
  out.diagnostics.argmin = res.best_point;
  out.diagnostics.converged = res.converged;
  out.diagnostics.evaluations = res.evaluations;
  return out;
}

// ---------------------------------------------------------------------------

Matrix apply_on_first(const LinearMap& map, const Matrix& y, Dims dims) {
  if (static_cast<std::size_t>(y.rows()) != dims.total() || y.rows() != y.cols())
    throw Error(Errc::bad_factorization, "bad factorization: operator does not match dims");
  const auto d1 = static_cast<Eigen::Index>(dims.first);
  const auto d2 = static_cast<Eigen::Index>(dims.second);
  Matrix out;
  for (Eigen::Index a = 0; a < d2; ++a) {
    for (Eigen::Index b = 0; b < d2; ++b) {
      Matrix block(d1, d1);
      for (Eigen::Index s = 0; s < d1; ++s)
        for (Eigen::Index t = 0; t < d1; ++t) block(s, t) = y(s * d2 + a, t * d2 + b);
      const Matrix image = map(block);
      if (out.size() == 0) out = Matrix::Zero(image.rows() * d2, image.cols() * d2);
      for (Eigen::Index s = 0; s < image.rows(); ++s)
        for (Eigen::Index t = 0; t < image.cols(); ++t) out(s * d2 + a, t * d2 + b) = image(s, t);
    }
  }
  return out;
}

Matrix choi_matrix(const LinearMap& map, std::span<const Vector> kets) {
  const auto d = static_cast<Eigen::Index>(kets.size());
  Matrix out;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const Matrix image = map(outer(kets[static_cast<std::size_t>(i)], kets[static_cast<std::size_t>(j)]));
      if (out.size() == 0) out = Matrix::Zero(image.rows() * d, image.cols() * d);
      for (Eigen::Index s = 0; s < image.rows(); ++s)
        for (Eigen::Index t = 0; t < image.cols(); ++t) out(s * d + i, t * d + j) = image(s, t);
    }
  }
  return out / static_cast<double>(d);
}

DensityMatrix choi_state(const ThermalOperation& op, std::span<const Vector> kets) {
  const Matrix c = choi_matrix([&](const Matrix& x) { return op.map(x); }, kets);
  return DensityMatrix::make(c, Dims{op.d_sys(), kets.size()});
}

std::vector<Vector> choi_kets(const Hamiltonian& h_sys, const std::optional<PerturbationSpec>& pert,
                              KetOrder order) {
  if (!pert || order == KetOrder::unperturbed) return columns(h_sys.eigenkets());
  if (order == KetOrder::first_order) return perturbed_kets_first_order(h_sys, *pert);
  return perturbed_kets_exact(h_sys, *pert);
}

ThermalOperation MtoFamily::operation(std::span<const double> free) const {
  const auto phases = manifold.phases(free);
  return ThermalOperation(h_sys, phase_unitary(kets, phases), bath);
}

OptimizerConfig default_distance_optimizer() { return OptimizerConfig{}; }

MeasureValue distance_measure(const ThermalOperation& op, const MtoFamily& family,
                              std::span<const Vector> kets, const DistanceOptions& opts) {
  const LinearMap target_map = [&](const Matrix& x) { return op.map(x); };
  const Matrix target = choi_matrix(target_map, kets);
  const auto res = minimize(
      [&](std::span<const double> x) {
        const ThermalOperation m = family.operation(x);
        return trace_norm(target - choi_matrix([&](const Matrix& y) { return m.map(y); }, kets));
      },
      family.manifold.bounds(), opts.optimizer);

  MeasureValue out{MeasureKind::choi_distance, res.best_value, {}};
  out.diagnostics.argmin = res.best_point;
  out.diagnostics.converged = res.converged;
  out.diagnostics.evaluations = res.evaluations;
  if (!res.converged) out.diagnostics.notes.push_back("optimizer did not converge; best value returned");

  if (opts.cross_check_samples > 0) {
    std::mt19937_64 rng(opts.cross_check_seed);
    OptimizerConfig light = opts.optimizer;
    light.seeds = std::min<std::size_t>(light.seeds, 8);
    light.max_grid_points = std::min<std::size_t>(light.max_grid_points, 512);
    double worst = 0.0;
    for (std::size_t s = 0; s < opts.cross_check_samples; ++s) {
      const Matrix rho = random_state(op.d_sys(), rng);
      const Matrix out_rho = op.map(rho);
      const auto r = minimize(
          [&](std::span<const double> x) { return trace_norm(out_rho - family.operation(x).map(rho)); },
          family.manifold.bounds(), light);
      worst = std::max(worst, r.best_value);
    }
    std::ostringstream os;
    os.precision(10);
    os << "choi cross-check: max over " << opts.cross_check_samples << " random inputs = " << worst;
    if (worst > out.value + 1e-6) os << " EXCEEDS the Choi value " << out.value;
    out.diagnostics.notes.push_back(os.str());
  }
  return out;
}

// ---------------------------------------------------------------------------

ThetaResult theta_lambda(const ThermalOperation& op, const LevelCoefficients& p,
                         const Hamiltonian& h_prime, double cutoff) {
  const Hamiltonian& hs = op.system_hamiltonian();
  const Matrix rho = unperturbed_state(p, hs).matrix();
  const Matrix tilde = first_order_correction(p, hs, h_prime);
  const Dims dims = op.dims();

  const Matrix beta3 = op.joint(tilde);
  const Matrix beta1 = partial_trace(beta3, dims, Subsystem::first);
  const Matrix beta2 = partial_trace(beta3, dims, Subsystem::second);
  const Matrix joint = op.joint(rho);

  ThetaResult out;
  const double a = first_order_entropy_term(beta1, partial_trace(joint, dims, Subsystem::first), cutoff,
                                            out.support_truncated);
  const double b = first_order_entropy_term(beta2, partial_trace(joint, dims, Subsystem::second), cutoff,
                                            out.support_truncated);
  const double c = first_order_entropy_term(beta3, joint, cutoff, out.support_truncated);
  out.value = c - a - b;
  return out;
}

double x_lambda(const ThermalOperation& op, const LevelCoefficients& p, const DensityMatrix& sigma,
                const Hamiltonian& h_prime, double cutoff) {
  const Hamiltonian& hs = op.system_hamiltonian();
  const Matrix a = op.joint(unperturbed_state(p, hs).matrix());
  const Matrix b = op.joint(first_order_correction(p, hs, h_prime));
  if (sigma.dim() != static_cast<std::size_t>(a.rows()))
    throw Error(Errc::bad_factorization, "bad factorization: sigma does not match the joint dimension");
  const double min_eig = eigenvalues_hermitian(sigma.matrix()).minCoeff();
  if (min_eig <= cutoff) {
    std::ostringstream os;
    os << "singular sigma: smallest eigenvalue " << min_eig;
    throw Error(Errc::singular_matrix, os.str());
  }
  const Matrix log_ratio = matrix_log2_on_support(a, cutoff) - matrix_log2_on_support(sigma.matrix(), cutoff);
  return trace_real(b) + trace_real(b * log_ratio);
}

double expansion_lemma_residual(const Matrix& a, const Matrix& b, double epsilon, double cutoff) {
  const double lhs = trace_xlog2x(a + epsilon * b, cutoff);
  const double rhs = trace_xlog2x(a, cutoff) +
                     epsilon * (trace_real(b) + trace_real(b * matrix_log2_on_support(a, cutoff)));
  return std::abs(lhs - rhs);
}

Matrix choi_perturbation_direction(const Hamiltonian& h_sys, const Hamiltonian& h_prime) {
  const auto d = h_sys.dim();
  // with unit strength the first-order kets minus |i> are sum_k c_ki |k>
  const auto shifted = perturbed_kets_first_order(h_sys, PerturbationSpec(h_prime, 1.0));
  Vector a = Vector::Zero(static_cast<Eigen::Index>(d * d));
  Vector b = Vector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) {
    const Vector e = Vector::Unit(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i));
    a += kron(Vector(shifted[i] - h_sys.eigenket(i)), e);
    b += kron(h_sys.eigenket(i), e);
  }
  const Matrix x = outer(a, b);
  return x + x.adjoint();
}

ChiBound chi_lambda_bound(const ThermalOperation& op, const MtoFamily& family,
                          const PerturbationSpec& pert, const OptimizerConfig& cfg) {
  const Hamiltonian& hs = op.system_hamiltonian();
  const Dims dims{op.d_sys(), hs.dim()};
  const Matrix vartheta = choi_perturbation_direction(hs, pert.h_prime);
  const Matrix target = apply_on_first([&](const Matrix& x) { return op.map(x); }, vartheta, dims);
  const auto res = minimize(
      [&](std::span<const double> x) {
        const ThermalOperation m = family.operation(x);
        return -trace_norm(target - apply_on_first([&](const Matrix& y) { return m.map(y); }, vartheta, dims));
      },
      family.manifold.bounds(), cfg);
  ChiBound out;
  out.max_norm = -res.best_value;
  out.bound = pert.epsilon / static_cast<double>(hs.dim()) * out.max_norm;
  out.diagnostics.argmin = res.best_point;
  out.diagnostics.converged = res.converged;
  out.diagnostics.evaluations = res.evaluations;
  return out;
}

// ---------------------------------------------------------------------------

MeasureValue evaluate_measure(MeasureKind kind, const ThermalOperation& op,
                              const LevelCoefficients& p,
                              const std::optional<PerturbationSpec>& pert,
                              const DeltaOptions& opts) {
  const Hamiltonian& hs = op.system_hamiltonian();
  if (kind == MeasureKind::choi_distance) {
    if (opts.family == nullptr)
      throw Error(Errc::invalid_argument, "choi_distance needs a Markovian family (mto_family)");
    const auto kets = choi_kets(hs, pert, KetOrder::exact);
    return distance_measure(op, *opts.family, kets, opts.distance);
  }
  const DensityMatrix rho = pert ? perturbed_state_exact(p, hs, *pert) : unperturbed_state(p, hs);
  const DensityMatrix joint = op.apply(rho).joint;
  switch (kind) {
    case MeasureKind::log_negativity: return log_negativity(joint);
    case MeasureKind::mutual_information: return mutual_information(joint);
    case MeasureKind::discord: return discord(joint, opts.discord_optimizer);
    default: break;
  }
  throw Error(Errc::invalid_argument, "unknown measure kind");
}

DeltaReport delta(MeasureKind kind, const ThermalOperation& op, const LevelCoefficients& p,
                  const PerturbationSpec& pert, const DeltaOptions& opts) {
  DeltaReport r;
  r.unperturbed = evaluate_measure(kind, op, p, std::nullopt, opts);
  r.perturbed = evaluate_measure(kind, op, p, pert, opts);
  r.delta = r.perturbed.value - r.unperturbed.value;
  r.epsilon = pert.epsilon;
  return r;
}

}  // namespace athermal
