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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace athermal {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw Error(Errc::config, "config field '" + path + "': " + why);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t k) {
  return path + "[" + std::to_string(k) + "]";
}

void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(join(path, key), "is not a recognized field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool flag(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], index(path, k)));
  return out;
}

Matrix matrix_from(const json& j, const std::string& path) {
  expect_keys(j, path, {"re", "im"});
  if (!j.contains("re")) fail(join(path, "re"), "is required");
  const json& re = j["re"];
  if (!re.is_array() || re.empty()) fail(join(path, "re"), "expected a non-empty array of rows");
  const std::size_t rows = re.size();
  const std::size_t cols = re[0].is_array() ? re[0].size() : 0;
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (const char* part : {"re", "im"}) {
    if (!j.contains(part)) continue;
    const json& rows_json = j[part];
    const std::string ppath = join(path, part);
    if (!rows_json.is_array() || rows_json.size() != rows) fail(ppath, "expected " + std::to_string(rows) + " rows");
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = numbers(rows_json[r], index(ppath, r));
      if (row.size() != cols) fail(index(ppath, r), "expected " + std::to_string(cols) + " entries");
      for (std::size_t c = 0; c < cols; ++c) {
        auto& e = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        e += std::string(part) == "re" ? Complex(row[c], 0.0) : Complex(0.0, row[c]);
      }
    }
  }
  return m;
}

json matrix_to(const Matrix& m) {
  json re = json::array(), im = json::array();
  bool complex = false;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
      complex = complex || m(r, c).imag() != 0.0;
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  json out{{"re", re}};
  if (complex) out["im"] = im;
  return out;
}

Vector ket_from(const json& j, const std::string& path) {
  if (j.is_array()) {
    const auto re = numbers(j, path);
    Vector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t k = 0; k < re.size(); ++k) v(static_cast<Eigen::Index>(k)) = re[k];
    return v;
  }
  expect_keys(j, path, {"re", "im"});
  if (!j.contains("re")) fail(join(path, "re"), "is required");
  const auto re = numbers(j["re"], join(path, "re"));
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) {
    im = numbers(j["im"], join(path, "im"));
    if (im.size() != re.size()) fail(join(path, "im"), "length differs from re");
  }
  Vector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t k = 0; k < re.size(); ++k) v(static_cast<Eigen::Index>(k)) = Complex(re[k], im[k]);
  return v;
}

json ket_to(const Vector& v) {
  json re = json::array(), im = json::array();
  bool complex = false;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    re.push_back(v(k).real());
    im.push_back(v(k).imag());
    complex = complex || v(k).imag() != 0.0;
  }
  if (!complex) return re;
  return json{{"re", re}, {"im", im}};
}

std::vector<Vector> kets_from(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of kets");
  std::vector<Vector> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(ket_from(j[k], index(path, k)));
  return out;
}

json kets_to(const std::vector<Vector>& kets) {
  json out = json::array();
  for (const auto& k : kets) out.push_back(ket_to(k));
  return out;
}

HamiltonianSpec hamiltonian_from(const json& j, const std::string& path) {
  expect_keys(j, path, {"name", "scale", "dim", "matrix"});
  HamiltonianSpec h;
  if (j.contains("name")) h.name = text(j["name"], join(path, "name"));
  if (j.contains("scale")) h.scale = number(j["scale"], join(path, "scale"));
  if (j.contains("dim")) h.dim = count(j["dim"], join(path, "dim"));
  if (j.contains("matrix")) h.matrix = matrix_from(j["matrix"], join(path, "matrix"));
  if (h.name.empty() == !h.matrix.has_value()) fail(path, "give exactly one of 'name' or 'matrix'");
  try {
    (void)h.build();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  if (h.matrix) {
    const double asym = hermiticity_defect(*h.matrix);
    if (asym > kHermitianTolerance) {
      std::ostringstream os;
      os << "matrix is not Hermitian (max asymmetry " << asym << ")";
      fail(join(path, "matrix"), os.str());
    }
  }
  return h;
}

json hamiltonian_to(const HamiltonianSpec& h) {
  json out;
  if (h.matrix) {
    out["matrix"] = matrix_to(*h.matrix);
  } else {
    out["name"] = h.name;
  }
  out["scale"] = h.scale;
  if (h.name == "identity") out["dim"] = h.dim;
  return out;
}

OptimizerConfig optimizer_from(const json& j, const std::string& path) {
  expect_keys(j, path, {"seeds", "grid_per_dim", "max_grid_points", "max_iterations", "ftol", "xtol",
                        "reflection", "expansion", "contraction", "shrink", "initial_step",
                        "seed_sequence"});
  OptimizerConfig o;
  auto get_count = [&](const char* k, std::size_t& dst) {
    if (j.contains(k)) dst = count(j[k], join(path, k));
  };
  auto get_number = [&](const char* k, double& dst) {
    if (j.contains(k)) dst = number(j[k], join(path, k));
  };
  get_count("seeds", o.seeds);
  get_count("grid_per_dim", o.grid_per_dim);
  get_count("max_grid_points", o.max_grid_points);
  get_count("max_iterations", o.max_iterations);
  get_number("ftol", o.ftol);
  get_number("xtol", o.xtol);
  get_number("reflection", o.reflection);
  get_number("expansion", o.expansion);
  get_number("contraction", o.contraction);
  get_number("shrink", o.shrink);
  get_number("initial_step", o.initial_step);
  if (j.contains("seed_sequence")) {
    const json& s = j["seed_sequence"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      fail(join(path, "seed_sequence"), "expected a non-negative integer");
    o.seed_sequence = s.get<std::uint64_t>();
  }
  try {
    o.validate();
  } catch (const Error& e) {
    throw Error(Errc::config, std::string("config field '") + e.what());
  }
  return o;
}

json optimizer_to(const OptimizerConfig& o) {
  return json{{"seeds", o.seeds},
              {"grid_per_dim", o.grid_per_dim},
              {"max_grid_points", o.max_grid_points},
              {"max_iterations", o.max_iterations},
              {"ftol", o.ftol},
              {"xtol", o.xtol},
              {"reflection", o.reflection},
              {"expansion", o.expansion},
              {"contraction", o.contraction},
              {"shrink", o.shrink},
              {"initial_step", o.initial_step},
              {"seed_sequence", o.seed_sequence}};
}

std::vector<double> linspace(const TemperatureRange& r) {
  std::vector<double> out;
  if (r.points == 1) return {r.from};
  for (std::size_t k = 0; k < r.points; ++k)
    out.push_back(r.from + (r.to - r.from) * static_cast<double>(k) / static_cast<double>(r.points - 1));
  return out;
}

const std::set<std::string> kCheckKinds{"delta_positive",       "nondecreasing_in_T",
                                        "increasing_as_T_decreases", "ordered_in_epsilon",
                                        "abs_delta_below",      "delta_below_chi_bound",
                                        "optimizer_converged",  "zero_at_epsilon_zero"};

}  // namespace

Matrix HamiltonianSpec::build() const {
  Matrix m;
  if (matrix) {
    m = *matrix;
    if (m.rows() != m.cols()) throw Error(Errc::config, "matrix is not square");
  } else if (name == "pauli_x") {
    m = operators::pauli_x();
  } else if (name == "pauli_y") {
    m = operators::pauli_y();
  } else if (name == "pauli_z") {
    m = operators::pauli_z();
  } else if (name == "identity") {
    if (dim < 1) throw Error(Errc::config, "identity needs 'dim' >= 1");
    m = operators::identity(dim);
  } else if (name.rfind("gell_mann_", 0) == 0 && name.size() == 11 && name[10] >= '1' && name[10] <= '8') {
    m = operators::gell_mann(name[10] - '0');
  } else {
    throw Error(Errc::config, "unknown operator name '" + name +
                                  "' (pauli_x, pauli_y, pauli_z, gell_mann_1..8, identity)");
  }
  return scale * m;
}

LevelCoefficients InitialStateSpec::build(const Hamiltonian& h_sys) const {
  if (a) {
    if (h_sys.dim() != 2) throw Error(Errc::config, "'a' describes a qubit; use 'populations'");
    const std::vector<double> pops{*a, 1.0 - *a};
    return LevelCoefficients::labelled_populations(h_sys, pops);
  }
  if (!populations.empty()) return LevelCoefficients::labelled_populations(h_sys, populations);
  return LevelCoefficients::make(*coefficients);
}

void ExperimentConfig::validate() const {
  if (name.empty()) fail("name", "must not be empty");
  if (temperatures.empty()) fail("temperatures", "must list at least one temperature");
  for (std::size_t k = 0; k < temperatures.size(); ++k)
    if (!(temperatures[k] > 0.0) || !std::isfinite(temperatures[k]))
      fail(index("temperatures", k), "temperature must be finite and > 0");
  Matrix hs, hb, hp;
  try { hs = system.build(); } catch (const Error& e) { fail("system", e.what()); }
  try { hb = bath.build(); } catch (const Error& e) { fail("bath", e.what()); }
  try { hp = h_prime.build(); } catch (const Error& e) { fail("perturbation.h_prime", e.what()); }
  if (hs.rows() * hb.rows() > 36)
    fail("bath", "product of dimensions " + std::to_string(hs.rows() * hb.rows()) + " exceeds 36");
  if (hp.rows() != hs.rows()) fail("perturbation.h_prime", "dimension differs from the system");
  for (std::size_t k = 0; k < epsilons.size(); ++k)
    if (!(epsilons[k] >= 0.0) || !std::isfinite(epsilons[k]))
      fail(index("perturbation.epsilons", k), "epsilon must be finite and >= 0");
  if (epsilons.empty()) fail("perturbation.epsilons", "must list at least one epsilon");
  if (measures.empty()) fail("measures", "must list at least one measure");
  for (std::size_t k = 0; k < measures.size(); ++k) {
    if (measures[k] == MeasureKind::discord && hs.rows() != 2)
      fail(index("measures", k), "discord needs a qubit system");
    if (measures[k] == MeasureKind::choi_distance && !mto_family)
      fail(index("measures", k), "choi_distance needs 'mto_family'");
  }
  const int given = (initial_state.a ? 1 : 0) + (!initial_state.populations.empty() ? 1 : 0) +
                    (initial_state.coefficients ? 1 : 0);
  if (given != 1) fail("initial_state", "give exactly one of 'a', 'populations', 'coefficients'");
  if (initial_state.a && !(*initial_state.a >= 0.0 && *initial_state.a <= 1.0))
    fail("initial_state.a", "must be in [0, 1]");
  for (std::size_t k = 0; k < checks.size(); ++k) {
    if (!kCheckKinds.count(checks[k].kind)) fail(index("checks", k) + ".kind", "unknown check '" + checks[k].kind + "'");
    const auto m = parse_measure_kind(checks[k].measure);
    if (!m) fail(index("checks", k) + ".measure", "unknown measure '" + checks[k].measure + "'");
    if (std::find(measures.begin(), measures.end(), *m) == measures.end())
      fail(index("checks", k) + ".measure", "measure '" + checks[k].measure + "' is not computed");
  }
  if (!(tolerance > 0.0)) fail("tolerance", "must be > 0");
  try {
    optimizer.validate();
  } catch (const Error& e) {
    throw Error(Errc::config, std::string("config field '") + e.what());
  }
  if (mto_family) {
    if (mto_family->basis == "custom" && mto_family->kets.empty()) fail("mto_family.kets", "custom basis needs kets");
    if (mto_family->relation.coefficients.size() != static_cast<std::size_t>(hs.rows() * hb.rows()))
      fail("mto_family.relation.coefficients", "needs one coefficient per joint basis ket");
    try {
      (void)constrained_phase_manifold(mto_family->relation.coefficients.size(), mto_family->relation);
    } catch (const Error& e) {
      fail("mto_family.relation", e.what());
    }
  }
  (void)build_model(*this);
}

ExperimentConfig config_from_json(const json& j) {
  expect_keys(j, "", {"name", "system", "bath", "temperatures", "unitary", "initial_state", "perturbation",
                      "measures", "mto_family", "optimizer", "checks", "control_epsilon_zero", "chi_bound",
                      "cross_check_samples", "tolerance"});
  ExperimentConfig c;
  for (const char* req : {"system", "bath", "temperatures", "unitary", "initial_state", "perturbation", "measures"})
    if (!j.contains(req)) fail(req, "is required");
  if (j.contains("name")) c.name = text(j["name"], "name");
  c.system = hamiltonian_from(j["system"], "system");
  c.bath = hamiltonian_from(j["bath"], "bath");

  const json& t = j["temperatures"];
  if (t.is_object()) {
    expect_keys(t, "temperatures", {"from", "to", "points"});
    for (const char* req : {"from", "to", "points"})
      if (!t.contains(req)) fail(join("temperatures", req), "is required");
    TemperatureRange r{number(t["from"], "temperatures.from"), number(t["to"], "temperatures.to"),
                       count(t["points"], "temperatures.points")};
    if (r.points < 1) fail("temperatures.points", "must be >= 1");
    c.temperature_range = r;
    c.temperatures = linspace(r);
  } else {
    c.temperatures = numbers(t, "temperatures");
  }

  const json& u = j["unitary"];
  expect_keys(u, "unitary", {"basis", "phases", "kets", "blocks"});
  if (u.contains("basis")) c.unitary.basis = text(u["basis"], "unitary.basis");
  if (c.unitary.basis != "energy" && c.unitary.basis != "computational" && c.unitary.basis != "custom")
    fail("unitary.basis", "expected 'energy', 'computational' or 'custom'");
  if (u.contains("phases")) c.unitary.phases = numbers(u["phases"], "unitary.phases");
  if (u.contains("kets")) c.unitary.kets = kets_from(u["kets"], "unitary.kets");
  if (u.contains("blocks")) {
    if (!u["blocks"].is_array()) fail("unitary.blocks", "expected an array of matrices");
    for (std::size_t k = 0; k < u["blocks"].size(); ++k)
      c.unitary.blocks.push_back(matrix_from(u["blocks"][k], index("unitary.blocks", k)));
  }

  const json& s = j["initial_state"];
  expect_keys(s, "initial_state", {"a", "populations", "coefficients"});
  if (s.contains("a")) c.initial_state.a = number(s["a"], "initial_state.a");
  if (s.contains("populations")) c.initial_state.populations = numbers(s["populations"], "initial_state.populations");
  if (s.contains("coefficients"))
    c.initial_state.coefficients = matrix_from(s["coefficients"], "initial_state.coefficients");

  const json& p = j["perturbation"];
  expect_keys(p, "perturbation", {"h_prime", "epsilons"});
  if (!p.contains("h_prime")) fail("perturbation.h_prime", "is required");
  if (!p.contains("epsilons")) fail("perturbation.epsilons", "is required");
  c.h_prime = hamiltonian_from(p["h_prime"], "perturbation.h_prime");
  c.epsilons = numbers(p["epsilons"], "perturbation.epsilons");

  const json& m = j["measures"];
  if (!m.is_array()) fail("measures", "expected an array of measure names");
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto kind = parse_measure_kind(text(m[k], index("measures", k)));
    if (!kind)
      fail(index("measures", k), "unknown measure (log_negativity, mutual_information, discord, choi_distance)");
    c.measures.push_back(*kind);
  }

  if (j.contains("mto_family") && !j["mto_family"].is_null()) {
    const json& f = j["mto_family"];
    expect_keys(f, "mto_family", {"basis", "kets", "relation"});
    MtoFamilySpec spec;
    if (f.contains("basis")) spec.basis = text(f["basis"], "mto_family.basis");
    if (spec.basis != "energy" && spec.basis != "computational" && spec.basis != "custom")
      fail("mto_family.basis", "expected 'energy', 'computational' or 'custom'");
    if (f.contains("kets")) spec.kets = kets_from(f["kets"], "mto_family.kets");
    if (!f.contains("relation")) fail("mto_family.relation", "is required");
    const json& r = f["relation"];
    expect_keys(r, "mto_family.relation", {"coefficients", "constant"});
    if (!r.contains("coefficients")) fail("mto_family.relation.coefficients", "is required");
    const json& co = r["coefficients"];
    if (!co.is_array()) fail("mto_family.relation.coefficients", "expected an array of integers");
    for (std::size_t k = 0; k < co.size(); ++k) {
      if (!co[k].is_number_integer()) fail(index("mto_family.relation.coefficients", k), "expected an integer");
      spec.relation.coefficients.push_back(co[k].get<int>());
    }
    if (r.contains("constant")) spec.relation.constant = number(r["constant"], "mto_family.relation.constant");
    c.mto_family = spec;
  }

  if (j.contains("optimizer")) c.optimizer = optimizer_from(j["optimizer"], "optimizer");

  if (j.contains("checks")) {
    const json& ch = j["checks"];
    if (!ch.is_array()) fail("checks", "expected an array");
    for (std::size_t k = 0; k < ch.size(); ++k) {
      const std::string path = index("checks", k);
      expect_keys(ch[k], path, {"kind", "measure", "value"});
      if (!ch[k].contains("kind")) fail(path + ".kind", "is required");
      if (!ch[k].contains("measure")) fail(path + ".measure", "is required");
      CheckSpec spec{text(ch[k]["kind"], path + ".kind"), text(ch[k]["measure"], path + ".measure"), 0.0};
      if (ch[k].contains("value")) spec.value = number(ch[k]["value"], path + ".value");
      c.checks.push_back(spec);
    }
  }
  if (j.contains("control_epsilon_zero")) c.control_epsilon_zero = flag(j["control_epsilon_zero"], "control_epsilon_zero");
  if (j.contains("chi_bound")) c.chi_bound = flag(j["chi_bound"], "chi_bound");
  if (j.contains("cross_check_samples")) c.cross_check_samples = count(j["cross_check_samples"], "cross_check_samples");
  if (j.contains("tolerance")) c.tolerance = number(j["tolerance"], "tolerance");
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["system"] = hamiltonian_to(c.system);
  j["bath"] = hamiltonian_to(c.bath);
  if (c.temperature_range) {
    j["temperatures"] = {{"from", c.temperature_range->from},
                         {"to", c.temperature_range->to},
                         {"points", c.temperature_range->points}};
  } else {
    j["temperatures"] = c.temperatures;
  }
  json u{{"basis", c.unitary.basis}, {"phases", c.unitary.phases}};
  if (!c.unitary.kets.empty()) u["kets"] = kets_to(c.unitary.kets);
  if (!c.unitary.blocks.empty()) {
    u["blocks"] = json::array();
    for (const auto& b : c.unitary.blocks) u["blocks"].push_back(matrix_to(b));
  }
  j["unitary"] = u;
  json s = json::object();
  if (c.initial_state.a) s["a"] = *c.initial_state.a;
  if (!c.initial_state.populations.empty()) s["populations"] = c.initial_state.populations;
  if (c.initial_state.coefficients) s["coefficients"] = matrix_to(*c.initial_state.coefficients);
  j["initial_state"] = s;
  j["perturbation"] = {{"h_prime", hamiltonian_to(c.h_prime)}, {"epsilons", c.epsilons}};
  j["measures"] = json::array();
  for (auto m : c.measures) j["measures"].push_back(to_string(m));
  if (c.mto_family) {
    json f{{"basis", c.mto_family->basis},
           {"relation", {{"coefficients", c.mto_family->relation.coefficients},
                         {"constant", c.mto_family->relation.constant}}}};
    if (!c.mto_family->kets.empty()) f["kets"] = kets_to(c.mto_family->kets);
    j["mto_family"] = f;
  }
  j["optimizer"] = optimizer_to(c.optimizer);
  j["checks"] = json::array();
  for (const auto& ch : c.checks) j["checks"].push_back({{"kind", ch.kind}, {"measure", ch.measure}, {"value", ch.value}});
  j["control_epsilon_zero"] = c.control_epsilon_zero;
  j["chi_bound"] = c.chi_bound;
  j["cross_check_samples"] = c.cross_check_samples;
  j["tolerance"] = c.tolerance;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot read config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::config, "config file '" + path.string() + "': " + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig apply_override(const ExperimentConfig& cfg, const std::string& key, const json& value) {
  json j = config_to_json(cfg);
  std::string path = key;
  if (key == "epsilons") path = "perturbation.epsilons";
  if (key == "a") {
    path = "initial_state.a";
    j["initial_state"] = json::object();
  }
  if (path.empty()) throw Error(Errc::config, "invalid override key ''");
  json* node = &j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const bool last = k + 1 == parts.size();
    const std::string& p = parts[k];
    if (p.empty()) throw Error(Errc::config, "invalid override key '" + key + "'");
    if (node->is_array()) {
      char* end = nullptr;
      const unsigned long i = std::strtoul(p.c_str(), &end, 10);
      if (*end != '\0' || i >= node->size())
        throw Error(Errc::config, "invalid override key '" + key + "': no element '" + p + "'");
      node = &(*node)[i];
    } else if (node->is_object() || node->is_null()) {
      if (!last && !node->contains(p)) (*node)[p] = json::object();
      node = &(*node)[p];
    } else {
      throw Error(Errc::config, "invalid override key '" + key + "': '" + p + "' is not inside an object");
    }
  }
  *node = value;
  try {
    return config_from_json(j);
  } catch (const Error& e) {
    throw Error(Errc::config, "invalid override '" + key + "': " + e.what());
  }
}

ExperimentConfig with_grid_points(const ExperimentConfig& cfg, std::size_t points) {
  if (points < 1) throw Error(Errc::config, "--grid: needs at least one point");
  ExperimentConfig out = cfg;
  TemperatureRange r;
  if (cfg.temperature_range) {
    r = *cfg.temperature_range;
  } else {
    if (cfg.temperatures.size() < 2) throw Error(Errc::config, "--grid: config 'temperatures' has no range to resample");
    r.from = *std::min_element(cfg.temperatures.begin(), cfg.temperatures.end());
    r.to = *std::max_element(cfg.temperatures.begin(), cfg.temperatures.end());
  }
  r.points = points;
  out.temperature_range = r;
  out.temperatures = linspace(r);
  out.validate();
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string canon = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------

namespace {

Vector basis_ket(std::size_t d, std::initializer_list<std::pair<std::size_t, double>> amps) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  for (auto [i, a] : amps) v(static_cast<Eigen::Index>(i)) = a;
  return v;
}

// Two-qubit kets in the order |00>, |11>, then the single-excitation pair.
std::vector<Vector> two_qubit_kets(const Vector& third, const Vector& fourth) {
  return {basis_ket(4, {{0, 1.0}}), basis_ket(4, {{3, 1.0}}), third, fourth};
}

ExperimentConfig fig2_config() {
  ExperimentConfig c;
  c.name = "fig2";
  c.system.name = "pauli_z";
  c.bath.name = "pauli_z";
  c.temperature_range = TemperatureRange{3.0, 5.0, 21};
  c.temperatures = linspace(*c.temperature_range);
  c.unitary.basis = "custom";
  c.unitary.phases = {1e5, 2e5, 3e5, 4e5};
  c.unitary.kets = two_qubit_kets(basis_ket(4, {{1, std::sqrt(2.0 / 3.0)}, {2, std::sqrt(1.0 / 3.0)}}),
                                  basis_ket(4, {{1, std::sqrt(1.0 / 3.0)}, {2, -std::sqrt(2.0 / 3.0)}}));
  c.initial_state.a = 0.9;
  c.h_prime.name = "pauli_x";
  c.epsilons = {0.1, 0.15, 0.2};
  c.measures = {MeasureKind::log_negativity};
  c.checks = {{"delta_positive", "log_negativity", 0.0},
              {"nondecreasing_in_T", "log_negativity", 0.0},
              {"ordered_in_epsilon", "log_negativity", 0.0},
              {"zero_at_epsilon_zero", "log_negativity", 0.0}};
  return c;
}

ExperimentConfig fig3_config() {
  ExperimentConfig c;
  c.name = "fig3";
  c.system.name = "pauli_z";
  c.bath.name = "gell_mann_1";
  c.temperature_range = TemperatureRange{0.02, 1.0, 20};
  c.temperatures = linspace(*c.temperature_range);
  c.unitary.basis = "computational";
  c.unitary.phases = {18e7, 30e7, 60e7, 80e7, 70e7, 90e7};
  c.initial_state.a = 0.9;
  c.h_prime.name = "pauli_x";
  c.epsilons = {0.2};
  c.measures = {MeasureKind::mutual_information, MeasureKind::discord};
  c.checks = {{"delta_positive", "mutual_information", 0.0},
              {"delta_positive", "discord", 0.0},
              {"increasing_as_T_decreases", "mutual_information", 0.0},
              {"zero_at_epsilon_zero", "mutual_information", 0.0},
              {"zero_at_epsilon_zero", "discord", 0.0}};
  return c;
}

ExperimentConfig distance_config() {
  ExperimentConfig c;
  c.name = "distance";
  c.system.name = "pauli_z";
  c.bath.name = "pauli_z";
  c.bath.scale = 10.0;
  c.temperatures = {100.0};
  c.unitary.basis = "custom";
  c.unitary.phases = {1e4, 2e4, 3e4, 4e4};
  c.unitary.kets = two_qubit_kets(basis_ket(4, {{1, 1.0}}), basis_ket(4, {{2, 1.0}}));
  c.initial_state.a = 0.9;
  c.h_prime.name = "pauli_x";
  c.epsilons = {0.01, 0.05, 0.1};
  c.measures = {MeasureKind::choi_distance};
  MtoFamilySpec f;
  f.basis = "custom";
  f.kets = c.unitary.kets;
  // alpha_4 - alpha_1 == alpha_2 - alpha_3 on (|00>, |11>, |01>, |10>)
  f.relation = AffinePhaseRelation{{-1, -1, 1, 1}, 0.0};
  c.mto_family = f;
  c.chi_bound = true;
  c.cross_check_samples = 8;
  c.checks = {{"abs_delta_below", "choi_distance", 5e-4},
              {"delta_below_chi_bound", "choi_distance", 1e-6},
              {"optimizer_converged", "choi_distance", 0.0},
              {"zero_at_epsilon_zero", "choi_distance", 1e-8}};
  return c;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"fig2", "fig3", "distance"}; }

ExperimentConfig builtin_config(const std::string& name) {
  ExperimentConfig c;
  if (name == "fig2") c = fig2_config();
  else if (name == "fig3") c = fig3_config();
  else if (name == "distance") c = distance_config();
  else throw Error(Errc::config, "unknown built-in experiment '" + name + "'");
  c.validate();
  return c;
}

}  // namespace athermal
