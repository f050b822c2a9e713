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
#include <ctime>
#include <map>
#include <sstream>

namespace athermal {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw Error(Errc::config, "config field '" + path + "': " + why);
}

std::vector<Vector> labelled_eigenkets(const Hamiltonian& h) {
  const auto labels = h.computational_labels();
  std::vector<Vector> out;
  for (auto l : labels) out.push_back(h.eigenket(l));
  return out;
}

std::vector<Vector> joint_basis(const std::string& basis, const std::vector<Vector>& custom,
                                const Hamiltonian& hs, const Hamiltonian& hb, const std::string& field) {
  const std::size_t d = hs.dim() * hb.dim();
  if (basis == "computational") return columns(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  if (basis == "energy") {
    std::vector<Vector> out;
    for (const auto& s : labelled_eigenkets(hs))
      for (const auto& r : labelled_eigenkets(hb)) out.push_back(kron(s, r));
    return out;
  }
  if (custom.size() != d) fail(field + ".kets", "expected " + std::to_string(d) + " kets, got " + std::to_string(custom.size()));
  for (std::size_t k = 0; k < custom.size(); ++k)
    if (static_cast<std::size_t>(custom[k].size()) != d)
      fail(field + ".kets[" + std::to_string(k) + "]", "expected " + std::to_string(d) + " amplitudes");
  return custom;
}

EnergyBlockUnitary make_unitary(const UnitarySpec& spec, const Hamiltonian& hs, const Hamiltonian& hb) {
  const Hamiltonian ht = total_hamiltonian(hs, hb);
  const std::size_t d = ht.dim();
  if (spec.basis == "energy" && !spec.blocks.empty()) return build_block_unitary(ht, spec.blocks);
  if (spec.phases.size() != d)
    fail("unitary.phases", "expected " + std::to_string(d) + " phases, got " + std::to_string(spec.phases.size()));
  const auto kets = joint_basis(spec.basis, spec.kets, hs, hb, "unitary");
  if (spec.basis == "computational") return phase_unitary(kets, spec.phases);
  return build_block_unitary(ht, kets, spec.phases);
}

template <typename F>
auto attribute(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::config) throw;
    fail(field, e.what());
  }
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string where(const SweepRow& r) { return "eps=" + fmt(r.epsilon) + " T=" + fmt(r.temperature); }

// Rows of one measure, grouped by epsilon with ascending temperature.
std::map<double, std::vector<const SweepRow*>> series(const std::vector<SweepRow>& rows, MeasureKind kind,
                                                      bool include_control) {
  std::map<double, std::vector<const SweepRow*>> out;
  for (const auto& r : rows)
    if (r.measure == kind && (include_control || r.epsilon != 0.0)) out[r.epsilon].push_back(&r);
  for (auto& [_, v] : out)
    std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->temperature < b->temperature; });
  return out;
}

CheckResult evaluate_check(const CheckSpec& spec, const std::vector<SweepRow>& rows, const ExperimentConfig& cfg) {
  CheckResult c{spec.kind, spec.measure, true, ""};
  const MeasureKind kind = *parse_measure_kind(spec.measure);
  const auto by_eps = series(rows, kind, false);
  std::ostringstream detail;
  std::size_t compared = 0;
  auto violate = [&](const std::string& msg) {
    if (c.passed) detail << msg;
    c.passed = false;
  };

  if (spec.kind == "delta_positive") {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& [_, v] : by_eps)
      for (auto* r : v) {
        ++compared;
        lo = std::min(lo, r->delta);
        if (!(r->delta > spec.value)) violate("delta " + fmt(r->delta) + " at " + where(*r));
      }
    if (c.passed) detail << "min delta " << lo << " over " << compared << " rows";
  } else if (spec.kind == "nondecreasing_in_T" || spec.kind == "increasing_as_T_decreases") {
    const bool up = spec.kind == "nondecreasing_in_T";
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& [_, v] : by_eps)
      for (std::size_t k = 1; k < v.size(); ++k) {
        ++compared;
        const double step = v[k]->delta - v[k - 1]->delta;
        gap = std::min(gap, up ? step : -step);
        const bool ok = up ? step >= -spec.value : step < -spec.value;
        if (!ok) violate("delta " + fmt(v[k - 1]->delta) + " -> " + fmt(v[k]->delta) + " at " + where(*v[k]));
      }
    if (c.passed) detail << "smallest adjacent step " << gap << " over " << compared << " pairs";
  } else if (spec.kind == "ordered_in_epsilon") {
    std::map<double, std::vector<const SweepRow*>> by_t;
    for (const auto& [_, v] : by_eps)
      for (auto* r : v) by_t[r->temperature].push_back(r);
    double gap = std::numeric_limits<double>::infinity();
    for (auto& [_, v] : by_t) {
      std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->epsilon < b->epsilon; });
      for (std::size_t k = 1; k < v.size(); ++k) {
        ++compared;
        gap = std::min(gap, v[k]->delta - v[k - 1]->delta);
        if (!(v[k]->delta > v[k - 1]->delta + spec.value))
          violate("delta(" + where(*v[k - 1]) + ") = " + fmt(v[k - 1]->delta) + " >= delta(eps=" +
                  fmt(v[k]->epsilon) + ") = " + fmt(v[k]->delta));
      }
    }
    if (compared == 0) {
      detail << "vacuous: fewer than two epsilon series";
      c.detail = detail.str();
      return c;
    }
    if (c.passed) detail << "smallest epsilon gap " << gap << " over " << compared << " pairs";
  } else if (spec.kind == "abs_delta_below") {
    double hi = 0.0;
    for (const auto& [_, v] : by_eps)
      for (auto* r : v) {
        ++compared;
        hi = std::max(hi, std::abs(r->delta));
        if (!(std::abs(r->delta) <= spec.value)) violate("|delta| " + fmt(std::abs(r->delta)) + " at " + where(*r));
      }
    if (c.passed) detail << "max |delta| " << hi << " <= " << spec.value;
  } else if (spec.kind == "delta_below_chi_bound") {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [_, v] : by_eps)
      for (auto* r : v) {
        ++compared;
        if (!r->chi_bound) {
          violate("no chi bound computed at " + where(*r) + " (set chi_bound: true)");
          continue;
        }
        margin = std::min(margin, *r->chi_bound + spec.value - r->delta);
        if (!(r->delta <= *r->chi_bound + spec.value))
          violate("delta " + fmt(r->delta) + " > bound " + fmt(*r->chi_bound) + " at " + where(*r));
      }
    if (c.passed) detail << "smallest margin " << margin << " over " << compared << " rows";
  } else if (spec.kind == "optimizer_converged") {
    for (const auto& r : rows)
      if (r.measure == kind) {
        ++compared;
        if (!r.converged) violate("not converged at " + where(r));
      }
    if (c.passed) detail << compared << " rows converged";
  } else if (spec.kind == "zero_at_epsilon_zero") {
    const double tol = spec.value > 0.0 ? spec.value : cfg.tolerance;
    double hi = 0.0;
    for (const auto& r : rows)
      if (r.measure == kind && r.epsilon == 0.0) {
        ++compared;
        hi = std::max(hi, std::abs(r.delta));
        if (!(std::abs(r.delta) <= tol)) violate("|delta| " + fmt(std::abs(r.delta)) + " at T=" + fmt(r.temperature));
      }
    if (compared == 0) violate("no epsilon = 0 control rows (control_epsilon_zero is off)");
    if (c.passed) detail << "max |delta| " << hi << " over " << compared << " control rows";
  }
  if (compared == 0 && c.passed) {
    c.passed = false;
    detail << "nothing to compare";
  }
  c.detail = detail.str();
  return c;
}

}  // namespace

ExperimentModel build_model(const ExperimentConfig& cfg) {
  Hamiltonian hs = attribute("system", [&] { return Hamiltonian(cfg.system.build()); });
  Hamiltonian hb = attribute("bath", [&] { return Hamiltonian(cfg.bath.build()); });
  Hamiltonian hp = attribute("perturbation.h_prime", [&] { return Hamiltonian(cfg.h_prime.build()); });
  LevelCoefficients p = attribute("initial_state", [&] { return cfg.initial_state.build(hs); });
  EnergyBlockUnitary u = attribute("unitary", [&] { return make_unitary(cfg.unitary, hs, hb); });
  const double comm = commutator_norm(u.matrix(), total_hamiltonian(hs, hb).matrix());
  return ExperimentModel{std::move(hs), std::move(hb), std::move(hp), std::move(u), std::move(p), comm};
}

std::size_t SweepResult::deviations() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

SweepResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_now();
  const ExperimentModel model = build_model(cfg);

  std::vector<double> eps;
  if (cfg.control_epsilon_zero) eps.push_back(0.0);
  for (double e : cfg.epsilons)
    if (std::find(eps.begin(), eps.end(), e) == eps.end()) eps.push_back(e);

  OptimizerConfig discord_cfg = cfg.optimizer;
  if (discord_cfg.grid_per_dim == 0) discord_cfg.grid_per_dim = default_discord_optimizer().grid_per_dim;

  struct PointOut {
    std::vector<SweepRow> rows;
    std::vector<std::string> notes;
    std::size_t evaluations = 0;
  };
  std::vector<PointOut> points(cfg.temperatures.size());

  parallel_for(cfg.temperatures.size(), [&](std::size_t k) {
    const double temp = cfg.temperatures[k];
    const GibbsState bath = gibbs_state(model.h_bath, 1.0 / temp);
    const ThermalOperation op(model.h_sys, model.unitary, bath);
    std::optional<MtoFamily> family;
    if (cfg.mto_family) {
      const auto kets = joint_basis(cfg.mto_family->basis, cfg.mto_family->kets, model.h_sys, model.h_bath, "mto_family");
      family.emplace(MtoFamily{model.h_sys, bath, kets,
                               constrained_phase_manifold(kets.size(), cfg.mto_family->relation)});
    }
    DeltaOptions opts;
    opts.discord_optimizer = discord_cfg;
    opts.distance.optimizer = cfg.optimizer;
    opts.distance.cross_check_samples = cfg.cross_check_samples;
    opts.family = family ? &*family : nullptr;

    PointOut& out = points[k];
    for (MeasureKind kind : cfg.measures) {
      const MeasureValue base = evaluate_measure(kind, op, model.coefficients, std::nullopt, opts);
      out.evaluations += base.diagnostics.evaluations;
      for (const auto& n : base.diagnostics.notes) out.notes.push_back("T=" + fmt(temp) + " eps=0 " + n);
      std::optional<double> chi_max;
      if (kind == MeasureKind::choi_distance && cfg.chi_bound) {
        const auto chi = chi_lambda_bound(op, *family, PerturbationSpec(model.h_prime, 1.0), cfg.optimizer);
        chi_max = chi.max_norm;
        out.evaluations += chi.diagnostics.evaluations;
      }
      DeltaOptions pert_opts = opts;
      pert_opts.distance.cross_check_samples = 0;
      for (double e : eps) {
        const PerturbationSpec pert(model.h_prime, e);
        const MeasureValue val = evaluate_measure(kind, op, model.coefficients, pert, pert_opts);
        out.evaluations += val.diagnostics.evaluations;
        for (const auto& n : val.diagnostics.notes) out.notes.push_back("T=" + fmt(temp) + " eps=" + fmt(e) + " " + n);
        SweepRow row{kind, e, temp, base.value, val.value, val.value - base.value, std::nullopt,
                     base.diagnostics.converged && val.diagnostics.converged};
        if (chi_max) row.chi_bound = e / static_cast<double>(model.h_sys.dim()) * *chi_max;
        out.rows.push_back(row);
      }
    }
  });

  SweepResult result;
  result.experiment = cfg.name;
  std::vector<std::string> notes;
  std::size_t evaluations = 0;
  for (auto& p : points) {
    result.rows.insert(result.rows.end(), p.rows.begin(), p.rows.end());
    notes.insert(notes.end(), p.notes.begin(), p.notes.end());
    evaluations += p.evaluations;
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.measure != b.measure) return a.measure < b.measure;
    if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
    return a.temperature < b.temperature;
  });
  for (const auto& spec : cfg.checks) result.checks.push_back(evaluate_check(spec, result.rows, cfg));

  const auto nonconverged = std::count_if(result.rows.begin(), result.rows.end(), [](auto& r) { return !r.converged; });
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.metadata = json{
      {"experiment", cfg.name},
      {"config_hash", config_hash(cfg)},
      {"config", config_to_json(cfg)},
      {"epsilons", cfg.epsilons},
      {"control_epsilon_zero", cfg.control_epsilon_zero},
      {"temperature_points", cfg.temperatures.size()},
      {"seed_sequence", cfg.optimizer.seed_sequence},
      {"unitary_basis", cfg.unitary.basis},
      {"unitary_energy_preserving", model.unitary.energy_preserving()},
      {"commutator_norm", model.commutator_norm},
      {"optimizer", {{"evaluations", evaluations}, {"nonconverged_rows", nonconverged}}},
      {"notes", notes},
      {"threads", worker_count()},
      {"started_utc", started_utc},
      {"finished_utc", utc_now()},
      {"elapsed_seconds", elapsed},
      {"deviations", result.deviations()},
  };
  return result;
}

SweepResult run_fig2() { return run_experiment(builtin_config("fig2")); }
SweepResult run_fig3() { return run_experiment(builtin_config("fig3")); }
SweepResult run_distance_example() { return run_experiment(builtin_config("distance")); }

}  // namespace athermal
