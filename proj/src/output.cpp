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
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

namespace athermal {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.parent_path() / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(Errc::io, "short write to '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::io, "cannot rename into '" + path.string() + "'");
  }
}

std::set<MeasureKind> measures_in(const SweepResult& r) {
  std::set<MeasureKind> out;
  for (const auto& row : r.rows) out.insert(row.measure);
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string rows_to_csv(const SweepResult& result, MeasureKind kind) {
  std::ostringstream os;
  os << "experiment,measure,epsilon,temperature,unperturbed,perturbed,delta,chi_bound,converged\r\n";
  for (const auto& r : result.rows) {
    if (r.measure != kind) continue;
    os << field(result.experiment) << ',' << to_string(r.measure) << ',' << num(r.epsilon) << ','
       << num(r.temperature) << ',' << num(r.unperturbed) << ',' << num(r.perturbed) << ',' << num(r.delta)
       << ',' << (r.chi_bound ? num(*r.chi_bound) : "") << ',' << (r.converged ? "true" : "false") << "\r\n";
  }
  return os.str();
}

std::string checks_to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "experiment,check,measure,passed,detail\r\n";
  for (const auto& c : result.checks)
    os << field(result.experiment) << ',' << field(c.name) << ',' << field(c.measure) << ','
       << (c.passed ? "true" : "false") << ',' << field(c.detail) << "\r\n";
  return os.str();
}

std::string rows_to_svg(const SweepResult& result, MeasureKind kind) {
  std::map<double, std::vector<std::pair<double, double>>> lines;
  std::set<double> temps;
  for (const auto& r : result.rows)
    if (r.measure == kind) temps.insert(r.temperature);
  const bool by_temperature = temps.size() > 1;
  for (const auto& r : result.rows) {
    if (r.measure != kind) continue;
    if (by_temperature) lines[r.epsilon].push_back({r.temperature, r.delta});
    else lines[0.0].push_back({r.epsilon, r.delta});
  }
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (auto& [_, pts] : lines) {
    std::sort(pts.begin(), pts.end());
    for (auto [x, y] : pts) {
      x0 = std::min(x0, x); x1 = std::max(x1, x);
      y0 = std::min(y0, y); y1 = std::max(y1, y);
    }
  }
  if (lines.empty()) { x0 = y0 = 0; x1 = y1 = 1; }
  if (x1 - x0 <= 0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 <= 0) { y0 -= 0.5 * (std::abs(y0) + 1e-12); y1 += 0.5 * (std::abs(y1) + 1e-12); }

  const double W = 640, H = 420, L = 90, R = 150, T = 40, B = 60;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << result.experiment
     << ": delta " << to_string(kind) << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << std::setprecision(4) << xv << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << std::setprecision(4) << yv << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
     << (by_temperature ? "T" : "epsilon") << "</text>\n";
  std::size_t c = 0;
  for (const auto& [eps, pts] : lines) {
    const char* color = kPalette[c % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n";
    for (auto [x, y] : pts) os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2\" fill=\"" << color << "\"/>\n";
    const double ly = T + 16.0 * static_cast<double>(c);
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\"/>\n";
    os << "<text x=\"" << W - R + 35 << "\" y=\"" << ly + 4 << "\">"
       << (by_temperature ? "eps = " + num(eps) : "T = " + num(*temps.begin())) << "</text>\n";
    ++c;
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> write_outputs(const SweepResult& result, const std::filesystem::path& dir,
                                                 const WriteOptions& opts) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create output directory '" + dir.string() + "'");
  // render everything first so a formatting failure leaves the directory untouched
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  for (MeasureKind k : measures_in(result)) {
    const std::string stem = result.experiment + "-" + to_string(k);
    files.emplace_back(dir / (stem + ".csv"), rows_to_csv(result, k));
    if (opts.svg) files.emplace_back(dir / (stem + ".svg"), rows_to_svg(result, k));
  }
  files.emplace_back(dir / (result.experiment + "-checks.csv"), checks_to_csv(result));
  files.emplace_back(dir / (result.experiment + "-meta.json"), result.metadata.dump(2) + "\n");
  std::vector<std::filesystem::path> written;
  for (const auto& [path, content] : files) {
    write_atomic(path, content);
    written.push_back(path);
  }
  return written;
}

}  // namespace athermal
