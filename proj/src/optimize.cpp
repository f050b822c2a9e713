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

#include "athermal/optimize.hpp"

#include "athermal/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <thread>

namespace athermal {

namespace {

thread_local bool tl_inside_parallel = false;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void bad_config(const std::string& field, const std::string& why) {
  throw Error(Errc::invalid_argument, "optimizer." + field + ": " + why);
}

class BoxMap {
 public:
  explicit BoxMap(std::span<const Interval> b) : b_(b.begin(), b.end()) {}

  // Points in the simplex stay unwrapped along periodic axes so the geometry
  // is continuous across the seam; only evaluation sees the wrapped value.
  void clamp(std::vector<double>& x) const {
    for (std::size_t k = 0; k < x.size(); ++k)
      if (!b_[k].periodic) x[k] = std::clamp(x[k], b_[k].lo, b_[k].hi);
  }
  std::vector<double> wrap(const std::vector<double>& x) const {
    std::vector<double> y = x;
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (!b_[k].periodic) continue;
      const double w = b_[k].hi - b_[k].lo;
      double t = std::fmod(y[k] - b_[k].lo, w);
      if (t < 0) t += w;
      y[k] = b_[k].lo + t;
    }
    return y;
  }
  double width(std::size_t k) const { return b_[k].hi - b_[k].lo; }
  const Interval& operator[](std::size_t k) const { return b_[k]; }

 private:
  std::vector<Interval> b_;
};

struct Evaluator {
  const Objective& f;
  const BoxMap& box;
  std::size_t count = 0;

  double operator()(const std::vector<double>& x) {
    ++count;
    const auto y = box.wrap(x);
    const double v = f(std::span<const double>(y));
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }
};

StartTrace nelder_mead(const Objective& f, const BoxMap& box, std::vector<double> x0,
                       const OptimizerConfig& cfg, std::size_t& evaluations) {
  const std::size_t n = x0.size();
  Evaluator eval{f, box};
  StartTrace trace;
  trace.start = x0;

  std::vector<std::vector<double>> xs(n + 1, x0);
  for (std::size_t k = 0; k < n; ++k) {
    double step = cfg.initial_step * box.width(k);
    if (!box[k].periodic && x0[k] + step > box[k].hi) step = -step;
    xs[k + 1][k] += step;
    box.clamp(xs[k + 1]);
  }
  std::vector<double> fs(n + 1);
  for (std::size_t k = 0; k <= n; ++k) fs[k] = eval(xs[k]);

  std::vector<std::size_t> order(n + 1);
  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] + t * (b[k] - a[k]);
    box.clamp(out);
    return out;
  };

  std::size_t it = 0;
  for (; it < cfg.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fs[a] < fs[b]; });
    {
      std::vector<std::vector<double>> x2;
      std::vector<double> f2;
      for (auto i : order) {
        x2.push_back(xs[i]);
        f2.push_back(fs[i]);
      }
      xs.swap(x2);
      fs.swap(f2);
    }
    double extent = 0.0;
    for (std::size_t v = 1; v <= n; ++v)
      for (std::size_t k = 0; k < n; ++k) extent = std::max(extent, std::abs(xs[v][k] - xs[0][k]));
    if (fs[n] - fs[0] <= cfg.ftol && extent <= cfg.xtol) {
      trace.converged = true;
      break;
    }
    if (n == 0) {
      trace.converged = true;
      break;
    }

    std::vector<double> c(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t k = 0; k < n; ++k) c[k] += xs[v][k] / static_cast<double>(n);

    const auto xr = combine(c, xs[n], -cfg.reflection);
    const double fr = eval(xr);
    if (fr < fs[0]) {
      const auto xe = combine(c, xs[n], -cfg.reflection * cfg.expansion);
      const double fe = eval(xe);
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
      continue;
    }
    if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
      continue;
    }
    bool accepted = false;
    if (fr < fs[n]) {
      const auto xc = combine(c, xr, cfg.contraction);
      const double fc = eval(xc);
      if (fc <= fr) {
        xs[n] = xc;
        fs[n] = fc;
        accepted = true;
      }
    } else {
      const auto xc = combine(c, xs[n], cfg.contraction);
      const double fc = eval(xc);
      if (fc < fs[n]) {
        xs[n] = xc;
        fs[n] = fc;
        accepted = true;
      }
    }
    if (!accepted) {
      for (std::size_t v = 1; v <= n; ++v) {
        xs[v] = combine(xs[0], xs[v], cfg.shrink);
        fs[v] = eval(xs[v]);
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t v = 1; v <= n; ++v)
    if (fs[v] < fs[best]) best = v;
  trace.point = box.wrap(xs[best]);
  trace.value = fs[best];
  trace.iterations = it;
  evaluations = eval.count;
  return trace;
}

std::vector<std::vector<double>> seed_grid(const BoxMap& box, std::size_t n,
                                           const OptimizerConfig& cfg) {
  std::mt19937_64 rng(cfg.seed_sequence);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::size_t g = cfg.grid_per_dim;
  if (g == 0) {
    g = 2;
    auto fits = [&](std::size_t cand) {
      double total = 1.0;
      for (std::size_t k = 0; k < n; ++k) total *= static_cast<double>(cand);
      return total <= static_cast<double>(cfg.max_grid_points);
    };
    while (fits(g + 1)) ++g;
    if (n == 0) g = 1;
  }
  double total = 1.0;
  for (std::size_t k = 0; k < n; ++k) total *= static_cast<double>(g);

  std::vector<std::vector<double>> pts;
  if (total > static_cast<double>(cfg.max_grid_points)) {
    for (std::size_t p = 0; p < cfg.max_grid_points; ++p) {
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = box[k].lo + unit(rng) * box.width(k);
      pts.push_back(std::move(x));
    }
    return pts;
  }
  std::vector<double> offset(n);
  for (std::size_t k = 0; k < n; ++k)
    offset[k] = cfg.seed_sequence == 0 ? (box[k].periodic ? 0.0 : 0.5) : unit(rng);
  const auto count = static_cast<std::size_t>(total);
  pts.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    std::vector<double> x(n);
    std::size_t rest = p;
    for (std::size_t k = n; k-- > 0;) {
      const std::size_t i = rest % g;
      rest /= g;
      x[k] = box[k].lo + (static_cast<double>(i) + offset[k]) * box.width(k) / static_cast<double>(g);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (seeds < 1) bad_config("seeds", "must be >= 1");
  if (!(ftol > 0.0)) bad_config("ftol", "must be > 0");
  if (!(xtol > 0.0)) bad_config("xtol", "must be > 0");
  if (max_iterations < 1) bad_config("max_iterations", "must be >= 1");
  if (max_grid_points < 1) bad_config("max_grid_points", "must be >= 1");
  if (!(reflection > 0.0)) bad_config("reflection", "must be > 0");
  if (!(expansion > 1.0)) bad_config("expansion", "must be > 1");
  if (!(contraction > 0.0 && contraction < 1.0)) bad_config("contraction", "must be in (0, 1)");
  if (!(shrink > 0.0 && shrink < 1.0)) bad_config("shrink", "must be in (0, 1)");
  if (!(initial_step > 0.0)) bad_config("initial_step", "must be > 0");
}

OptimizationResult minimize(const Objective& f, std::span<const Interval> bounds,
                            const OptimizerConfig& cfg) {
  cfg.validate();
  for (std::size_t k = 0; k < bounds.size(); ++k)
    if (!std::isfinite(bounds[k].lo) || !std::isfinite(bounds[k].hi) || !(bounds[k].hi > bounds[k].lo))
      throw Error(Errc::invalid_argument, "minimize: bound " + std::to_string(k) + " is not a finite interval");

  const BoxMap box(bounds);
  const std::size_t n = bounds.size();
  const auto grid = seed_grid(box, n, cfg);

  std::vector<double> grid_values(grid.size());
  parallel_for(grid.size(), [&](std::size_t p) {
    const auto y = box.wrap(grid[p]);
    const double v = f(std::span<const double>(y));
    grid_values[p] = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  });

  std::vector<std::vector<double>> starts;
  for (auto idx : best_indices(grid_values, cfg.seeds)) starts.push_back(grid[idx]);
  return minimize_from(f, bounds, starts, cfg, grid.size());
}

std::vector<std::size_t> best_indices(std::span<const double> values, std::size_t count) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  order.resize(std::min(count, order.size()));
  return order;
}

OptimizationResult minimize_from(const Objective& f, std::span<const Interval> bounds,
                                 std::span<const std::vector<double>> starts, const OptimizerConfig& cfg,
                                 std::size_t prior_evaluations) {
  cfg.validate();
  if (starts.empty()) throw Error(Errc::invalid_argument, "minimize: no starting points");
  const BoxMap box(bounds);
  OptimizationResult result;
  result.starts.resize(starts.size());
  std::vector<std::size_t> evals(starts.size(), 0);
  parallel_for(starts.size(), [&](std::size_t s) {
    if (starts[s].size() != bounds.size())
      throw Error(Errc::invalid_argument, "minimize: start point has the wrong dimension");
    result.starts[s] = nelder_mead(f, box, starts[s], cfg, evals[s]);
  });

  result.evaluations = prior_evaluations + std::accumulate(evals.begin(), evals.end(), std::size_t{0});
  std::size_t best = 0;
  for (std::size_t s = 1; s < result.starts.size(); ++s)
    if (result.starts[s].value < result.starts[best].value) best = s;
  result.best_value = result.starts[best].value;
  result.best_point = result.starts[best].point;
  result.converged = result.starts[best].converged;
  return result;
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ATHERMAL_MARKOV_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1 || tl_inside_parallel) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto run = [&] {
    tl_inside_parallel = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    tl_inside_parallel = false;
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------

PhaseManifold constrained_phase_manifold(std::size_t dim, const AffinePhaseRelation& relation) {
  if (relation.coefficients.size() != dim)
    throw Error(Errc::invalid_argument, "phase relation: expected " + std::to_string(dim) +
                                            " coefficients, got " +
                                            std::to_string(relation.coefficients.size()));
  PhaseManifold m;
  m.dim_ = dim;
  m.relation_ = relation;
  const bool trivial = std::all_of(relation.coefficients.begin(), relation.coefficients.end(),
                                   [](int c) { return c == 0; });
  if (trivial) {
    const double r = std::remainder(relation.constant, kTwoPi);
    if (std::abs(r) > 1e-12)
      throw Error(Errc::inconsistent_relation,
                  "inconsistent phase relation: 0 = constant has no solution");
    return m;
  }
  for (std::size_t k = dim; k-- > 0;) {
    if (std::abs(relation.coefficients[k]) == 1) {
      m.dependent_ = k;
      break;
    }
  }
  if (!m.dependent_)
    throw Error(Errc::inconsistent_relation,
                "phase relation needs a coefficient of +1 or -1 to solve for a dependent phase");
  return m;
}

std::vector<double> PhaseManifold::phases(std::span<const double> free) const {
  if (free.size() != free_dim())
    throw Error(Errc::invalid_argument, "phase manifold: expected " + std::to_string(free_dim()) +
                                            " free angles, got " + std::to_string(free.size()));
  if (!dependent_) return {free.begin(), free.end()};
  std::vector<double> out(dim_);
  long double rest = relation_.constant;
  std::size_t j = 0;
  for (std::size_t k = 0; k < dim_; ++k) {
    if (k == *dependent_) continue;
    out[k] = free[j++];
    rest -= static_cast<long double>(relation_.coefficients[k]) * out[k];
  }
  out[*dependent_] = static_cast<double>(relation_.coefficients[*dependent_] * rest);
  return out;
}

std::vector<double> PhaseManifold::free_coordinates(std::span<const double> phases) const {
  std::vector<double> out;
  for (std::size_t k = 0; k < phases.size(); ++k)
    if (!dependent_ || k != *dependent_) out.push_back(phases[k]);
  return out;
}

std::vector<Interval> PhaseManifold::bounds() const {
  return std::vector<Interval>(free_dim(), Interval{0.0, kTwoPi, true});
}

double PhaseManifold::residual(std::span<const double> phases) const {
  long double s = -static_cast<long double>(relation_.constant);
  for (std::size_t k = 0; k < phases.size() && k < dim_; ++k)
    s += static_cast<long double>(relation_.coefficients[k]) * phases[k];
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double r = std::fmod(s, two_pi);
  if (r > two_pi / 2) r -= two_pi;
  if (r < -two_pi / 2) r += two_pi;
  return static_cast<double>(std::abs(r));
}

}  // namespace athermal
