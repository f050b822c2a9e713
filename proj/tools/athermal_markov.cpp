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

// Command-line driver. Talks to the library only through athermal.h.

#include "athermal/athermal.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDeviation = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config;
  std::string out = "./out";
  std::vector<std::string> sets;
  std::optional<std::size_t> grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed_list;
  bool no_svg = false;
  bool verbose = false;
};

struct Failure {
  std::string message;
};

void check(am_status s, const std::string& context) {
  if (s != AM_OK) {
    std::string msg = context.empty() ? am_last_error() : context + ": " + am_last_error();
    throw Failure{msg};
  }
}

std::string take(char* s) {
  std::string out = s ? s : "";
  am_string_free(s);
  return out;
}

struct ConfigHandle {
  am_config* p = nullptr;
  ~ConfigHandle() { am_config_free(p); }
};
struct ResultHandle {
  am_result* p = nullptr;
  ~ResultHandle() { am_result_free(p); }
};

void apply_options(am_config* cfg, const Options& o) {
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Failure{"--set '" + kv + "': expected KEY=VALUE"};
    check(am_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set");
  }
  if (o.grid) check(am_config_set_grid(cfg, *o.grid), "--grid");
  if (o.tol) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *o.tol);
    check(am_config_set(cfg, "tolerance", buf), "--tol");
  }
  if (o.seed_list)
    check(am_config_set(cfg, "optimizer.seed_sequence", std::to_string(*o.seed_list).c_str()), "--seed-list");
}

int report(am_result* r, const Options& o, const std::string& label) {
  if (o.verbose) {
    for (std::size_t i = 0; i < am_result_row_count(r); ++i) {
      am_row row;
      check(am_result_row(r, i, &row), "");
      std::printf("%s eps=%-8g T=%-10g base=%.10g pert=%.10g delta=%.6e%s\n", row.measure, row.epsilon,
                  row.temperature, row.unperturbed, row.perturbed, row.delta, row.converged ? "" : " [not converged]");
    }
  }
  char* written = nullptr;
  check(am_result_write(r, o.out.c_str(), o.no_svg ? 0 : 1, &written), "--out " + o.out);
  const std::string files = take(written);
  if (o.verbose) std::printf("%s", files.c_str());
  for (std::size_t i = 0; i < am_result_check_count(r); ++i) {
    am_check c;
    check(am_result_check(r, i, &c), "");
    std::printf("%s %s%s%s", c.passed ? "PASS" : "FAIL", c.name, *c.measure ? " " : "", c.measure);
    if (o.verbose || !c.passed) std::printf("  (%s)", c.detail);
    std::printf("\n");
  }
  const std::size_t dev = am_result_deviations(r);
  std::printf("%s: %zu deviation(s), tables in %s\n", label.c_str(), dev, o.out.c_str());
  return dev == 0 ? kExitOk : kExitDeviation;
}

int run_config(am_config* cfg, const Options& o) {
  apply_options(cfg, o);
  const std::string name = [&] {
    char* s = nullptr;
    check(am_config_name(cfg, &s), "");
    return take(s);
  }();
  ResultHandle r;
  check(am_run(cfg, &r.p), name);
  return report(r.p, o, name);
}

int dispatch(const std::string& sub, const Options& o) {
  if (sub == "properties") {
    if (!o.sets.empty()) throw Failure{"--set: not accepted by 'properties'"};
    if (o.grid) throw Failure{"--grid: not accepted by 'properties'"};
    if (o.tol) throw Failure{"--tol: not accepted by 'properties'"};
    ResultHandle r;
    check(am_run_properties(o.seed_list.value_or(20260101), &r.p), "properties");
    return report(r.p, o, "properties");
  }
  ConfigHandle cfg;
  if (sub == "run" || sub == "validate") {
    check(am_config_load(o.config.c_str(), &cfg.p), "");
  } else {
    check(am_config_builtin(sub.c_str(), &cfg.p), "");
  }
  if (sub == "validate") {
    apply_options(cfg.p, o);
    char* text = nullptr;
    check(am_config_describe(cfg.p, &text), "");
    std::cout << take(text);
    if (o.verbose) {
      check(am_config_to_json(cfg.p, &text), "");
      std::cout << take(text) << "\n";
    }
    return kExitOk;
  }
  return run_config(cfg.p, o);
}

void add_common(CLI::App* sc, Options& o, bool with_config) {
  if (with_config)
    sc->add_option("--config", o.config, "experiment config (JSON)")->required();
  sc->add_option("--out", o.out, "output directory")->capture_default_str();
  sc->add_option("--set", o.sets, "override KEY=VALUE (VALUE is JSON or a bare string)")->take_all();
  sc->add_option("--grid", o.grid, "number of temperature grid points")->check(CLI::PositiveNumber);
  sc->add_option("--tol", o.tol, "tolerance used by the result checks")->check(CLI::PositiveNumber);
  sc->add_option("--seed-list", o.seed_list, "optimizer seed sequence id (0 = plain grid)");
  sc->add_flag("--no-svg", o.no_svg, "skip the SVG plots");
  sc->add_flag("-v,--verbose", o.verbose, "print every row and check detail");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Athermality and non-Markovianity of perturbed thermal operations"};
  app.require_subcommand(1);
  Options opts;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"fig2", "qubit-qubit log-negativity sweep"},
      {"fig3", "qubit-qutrit mutual information and discord sweep"},
      {"distance", "Choi distance to the nearest Markovian operation"},
      {"properties", "randomized property suite"},
      {"run", "run a user config"},
      {"validate", "parse a config and print the model without running"},
  };
  for (const auto& [name, help] : subs) {
    auto* sc = app.add_subcommand(name, help);
    add_common(sc, opts, name == "run" || name == "validate");
  }
  if (argc > 1 && argv[1][0] != '-') {
    bool known = false;
    for (const auto& sc : subs) known = known || sc.first == argv[1];
    if (!known) {
      std::cerr << "error: unknown subcommand '" << argv[1] << "'\n";
      return kExitUsage;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  std::string sub;
  for (const auto* sc : app.get_subcommands()) sub = sc->get_name();
  try {
    return dispatch(sub, opts);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return kExitUsage;
  }
}
