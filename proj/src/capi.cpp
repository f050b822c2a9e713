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

#include "athermal/athermal.h"

#include "athermal/error.hpp"
#include "athermal/experiments.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sstream>
#include <string>

using athermal::Errc;
using nlohmann::json;

struct am_config {
  athermal::ExperimentConfig cfg;
};

struct am_result {
  athermal::SweepResult result;
  std::vector<std::string> measure_names;
};

namespace {

thread_local std::string last_error;

am_status map_code(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return AM_ERR_INVALID_ARGUMENT;
    case Errc::config: return AM_ERR_CONFIG;
    case Errc::io: return AM_ERR_IO;
    case Errc::invalid_state: return AM_ERR_INVALID_STATE;
    case Errc::not_hermitian: return AM_ERR_NOT_HERMITIAN;
    case Errc::not_unitary: return AM_ERR_NOT_UNITARY;
    case Errc::not_energy_preserving: return AM_ERR_NOT_ENERGY_PRESERVING;
    case Errc::degenerate_spectrum:
    case Errc::ambiguous_zero_temperature: return AM_ERR_DEGENERATE_SPECTRUM;
    case Errc::perturbation_too_strong: return AM_ERR_PERTURBATION_TOO_STRONG;
    case Errc::undefined_quantity: return AM_ERR_UNDEFINED_QUANTITY;
    case Errc::bad_factorization:
    case Errc::singular_matrix: return AM_ERR_NUMERICAL;
    case Errc::unsupported_dimension:
    case Errc::inconsistent_relation: return AM_ERR_UNSUPPORTED;
  }
  return AM_ERR_INTERNAL;
}

template <class F>
am_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return AM_OK;
  } catch (const athermal::Error& e) {
    last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return AM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return AM_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw athermal::Error(Errc::invalid_argument, std::string(what) + " must not be null");
}

std::string describe(const athermal::ExperimentConfig& cfg) {
  const auto model = athermal::build_model(cfg);
  std::ostringstream os;
  os.precision(10);
  os << "experiment: " << cfg.name << "\n";
  os << "system dim: " << model.h_sys.dim() << "\n";
  os << "bath dim: " << model.h_bath.dim() << "\n";
  os << "joint dim: " << model.h_sys.dim() * model.h_bath.dim() << "\n";
  os << "system energies:";
  for (double e : model.h_sys.energies()) os << " " << e;
  os << "\nbath energies:";
  for (double e : model.h_bath.energies()) os << " " << e;
  os << "\nunitary basis: " << cfg.unitary.basis << "\n";
  os << "alpha:";
  for (double a : cfg.unitary.phases) os << " " << a;
  if (cfg.unitary.phases.empty()) os << " (" << cfg.unitary.blocks.size() << " intra-block unitaries)";
  os << "\nenergy preserving: " << (model.unitary.energy_preserving() ? "yes" : "no")
     << " (commutator norm " << model.commutator_norm << ")\n";
  os << "temperatures: " << cfg.temperatures.size();
  if (!cfg.temperatures.empty()) os << " in [" << cfg.temperatures.front() << ", " << cfg.temperatures.back() << "]";
  os << "\nepsilons:";
  for (double e : cfg.epsilons) os << " " << e;
  os << "\nmeasures:";
  for (auto m : cfg.measures) os << " " << athermal::to_string(m);
  os << "\nchecks: " << cfg.checks.size() << "\n";
  return os.str();
}

}  // namespace

extern "C" {

const char* am_last_error(void) { return last_error.c_str(); }

const char* am_status_string(am_status status) {
  switch (status) {
    case AM_OK: return "ok";
    case AM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AM_ERR_CONFIG: return "config error";
    case AM_ERR_IO: return "i/o error";
    case AM_ERR_INVALID_STATE: return "invalid state";
    case AM_ERR_NOT_HERMITIAN: return "not hermitian";
    case AM_ERR_NOT_UNITARY: return "not unitary";
    case AM_ERR_NOT_ENERGY_PRESERVING: return "not energy preserving";
    case AM_ERR_DEGENERATE_SPECTRUM: return "degenerate spectrum";
    case AM_ERR_PERTURBATION_TOO_STRONG: return "perturbation too strong";
    case AM_ERR_UNDEFINED_QUANTITY: return "undefined quantity";
    case AM_ERR_NUMERICAL: return "numerical failure";
    case AM_ERR_UNSUPPORTED: return "unsupported";
    case AM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void am_string_free(char* s) { std::free(s); }

am_status am_config_builtin(const char* name, am_config** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new am_config{athermal::builtin_config(name)};
  });
}

am_status am_config_load(const char* path, am_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new am_config{athermal::load_config(path)};
  });
}

am_status am_config_from_json(const char* text, am_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw athermal::Error(Errc::config, std::string("config text: ") + e.what());
    }
    *out = new am_config{athermal::config_from_json(j)};
  });
}

am_status am_config_set(am_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(value, "value");
    json v = json::parse(value, nullptr, false);
    if (v.is_discarded()) v = std::string(value);
    cfg->cfg = athermal::apply_override(cfg->cfg, key, v);
  });
}

am_status am_config_set_grid(am_config* cfg, size_t n) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg = athermal::with_grid_points(cfg->cfg, n);
  });
}

am_status am_config_name(const am_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = dup(cfg->cfg.name);
  });
}

am_status am_config_to_json(const am_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = dup(athermal::config_to_json(cfg->cfg).dump(2));
  });
}

am_status am_config_describe(const am_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = dup(describe(cfg->cfg));
  });
}

void am_config_free(am_config* cfg) { delete cfg; }

static am_result* wrap(athermal::SweepResult r) {
  auto* out = new am_result{std::move(r), {}};
  out->measure_names.reserve(out->result.rows.size());
  for (const auto& row : out->result.rows) out->measure_names.emplace_back(athermal::to_string(row.measure));
  return out;
}

am_status am_run(const am_config* cfg, am_result** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = wrap(athermal::run_experiment(cfg->cfg));
  });
}

am_status am_run_properties(uint64_t seed, am_result** out) {
  return guarded([&] {
    require(out, "out");
    athermal::PropertySuiteOptions opts;
    opts.seed = seed;
    *out = wrap(athermal::run_property_suite(opts));
  });
}

size_t am_result_row_count(const am_result* r) { return r ? r->result.rows.size() : 0; }

am_status am_result_row(const am_result* r, size_t i, am_row* out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    if (i >= r->result.rows.size()) throw athermal::Error(Errc::invalid_argument, "row index out of range");
    const auto& row = r->result.rows[i];
    out->measure = r->measure_names[i].c_str();
    out->epsilon = row.epsilon;
    out->temperature = row.temperature;
    out->unperturbed = row.unperturbed;
    out->perturbed = row.perturbed;
    out->delta = row.delta;
    out->has_chi_bound = row.chi_bound.has_value();
    out->chi_bound = row.chi_bound.value_or(std::numeric_limits<double>::quiet_NaN());
    out->converged = row.converged;
  });
}

size_t am_result_check_count(const am_result* r) { return r ? r->result.checks.size() : 0; }

am_status am_result_check(const am_result* r, size_t i, am_check* out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    if (i >= r->result.checks.size()) throw athermal::Error(Errc::invalid_argument, "check index out of range");
    const auto& c = r->result.checks[i];
    out->name = c.name.c_str();
    out->measure = c.measure.c_str();
    out->passed = c.passed;
    out->detail = c.detail.c_str();
  });
}

size_t am_result_deviations(const am_result* r) { return r ? r->result.deviations() : 0; }

am_status am_result_metadata(const am_result* r, char** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    *out = dup(r->result.metadata.dump(2));
  });
}

am_status am_result_write(const am_result* r, const char* dir, int svg, char** paths) {
  return guarded([&] {
    require(r, "result");
    require(dir, "dir");
    athermal::WriteOptions opts;
    opts.svg = svg != 0;
    const auto written = athermal::write_outputs(r->result, dir, opts);
    if (paths) {
      std::string joined;
      for (const auto& p : written) joined += p.string() + "\n";
      *paths = dup(joined);
    }
  });
}

void am_result_free(am_result* r) { delete r; }

}  // extern "C"
