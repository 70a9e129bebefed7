// Copyright 2026 The hbac Authors
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

#include "hbac/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hbac/io.hpp"

namespace hbac {

namespace {

/// Evaluates fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string opt_to_string(const std::optional<long>& v) { return v ? std::to_string(*v) : ""; }

}  // namespace

void Grid::validate(std::string_view name) const {
  const std::string n(name);
  if (count < 2) throw std::invalid_argument(n + " grid needs count >= 2");
  if (!(min < max)) throw std::invalid_argument(n + " grid needs min < max");
  if (spacing == Spacing::kLog && !(min > 0))
    throw std::invalid_argument(n + " log grid needs min > 0");
}

std::vector<double> Grid::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / (count - 1);
    v[i] = spacing == Spacing::kLinear ? min + s * (max - min)
                                       : std::exp(std::log(min) + s * (std::log(max) - std::log(min)));
  }
  v.front() = min;
  v.back() = max;
  return v;
}

SweepMode parse_sweep_mode(std::string_view s) {
  if (s == "fig2") return SweepMode::kFig2;
  if (s == "fig3") return SweepMode::kFig3;
  if (s == "fig5") return SweepMode::kFig5;
  if (s == "custom") return SweepMode::kCustom;
  throw std::invalid_argument("unknown sweep mode '" + std::string(s) + "'");
}

Spacing parse_spacing(std::string_view s) {
  if (s == "linear") return Spacing::kLinear;
  if (s == "log") return Spacing::kLog;
  throw std::invalid_argument("unknown grid spacing '" + std::string(s) + "'");
}

std::vector<double> SweepSpec::eps_values() const {
  return eps_b_values.empty() ? eps_b_grid.values() : eps_b_values;
}

void SweepSpec::validate(SweepMode mode) const {
  const bool needs_dm = mode != SweepMode::kFig3;
  if (needs_dm) {
    if (d_list.empty()) throw std::invalid_argument("d list is empty");
    if (m_list.empty()) throw std::invalid_argument("m list is empty");
    for (Index d : d_list)
      if (d < 1) throw std::invalid_argument("d values must be >= 1");
    for (Index m : m_list)
      if (m < 1) throw std::invalid_argument("m values must be >= 1");
  }
  if (mode == SweepMode::kFig3) {
    if (n_list.empty()) throw std::invalid_argument("n list is empty");
    for (int n : n_list)
      if (n < 2) throw std::invalid_argument("n values must be >= 2");
  }
  if (eps_b_values.empty()) eps_b_grid.validate("eps_b");
  const double lo = mode == SweepMode::kFig2 ? 0.0 : std::numeric_limits<double>::min();
  for (double e : eps_values())
    if (!(e >= lo && e < 1.0))
      throw std::invalid_argument("bath polarization " + format_double(e) + " out of range");
  if (mode == SweepMode::kFig5) {
    if (!delta_rel_grid) throw std::invalid_argument("fig5 needs a delta_rel grid");
    delta_rel_grid->validate("delta_rel");
    if (!(delta_rel_grid->min > 0 && delta_rel_grid->max < 1))
      throw std::invalid_argument("delta_rel must lie in (0, 1)");
  }
  policy.validate();
}

SweepSpec SweepSpec::defaults(SweepMode mode) {
  SweepSpec s;
  switch (mode) {
    case SweepMode::kFig2:
      s.d_list = {2, 4, 8, 16, 32, 64};
      s.m_list = {1};
      s.eps_b_grid = {1e-4, 0.9, 200, Spacing::kLog};
      break;
    case SweepMode::kFig3:
      s.n_list = {3, 4, 5};
      s.eps_b_grid = {1e-6, 0.99, 200, Spacing::kLog};
      break;
    case SweepMode::kFig5:
      s.d_list = {2, 3, 4, 5, 6};
      s.m_list = {1};
      s.eps_b_values = {0.1};
      s.delta_rel_grid = Grid{1e-3, 0.3, 25, Spacing::kLog};
      break;
    case SweepMode::kCustom:
      s.d_list = {2, 3, 4, 8};
      s.m_list = {1, 2};
      s.eps_b_grid = {0.01, 0.3, 5, Spacing::kLinear};
      break;
  }
  return s;
}

std::vector<CoolingLimitRow> cooling_limit_rows(const SweepSpec& spec) {
  spec.validate(SweepMode::kFig2);
  const auto eps = spec.eps_values();
  std::vector<CoolingLimitRow> rows;
  for (Index d : spec.d_list) {
    for (Index m : spec.m_list) {
      std::vector<CoolingLimitRow> block;
      for (double e : eps)
        block.push_back({d, m, e, asymptotic_polarization(SystemConfig(d, m, e)), false});
      if (d * m >= 2) {
        const auto [marker_eps, marker_lim] = transition_marker<double>(d, m);
        auto it = std::find_if(block.begin(), block.end(),
                               [&](const CoolingLimitRow& r) { return r.eps_b == marker_eps; });
        if (it != block.end()) {
          it->transition_marker = true;
        } else {
          block.push_back({d, m, marker_eps, marker_lim, true});
        }
      }
      std::stable_sort(block.begin(), block.end(),
                       [](const auto& a, const auto& b) { return a.eps_b < b.eps_b; });
      rows.insert(rows.end(), block.begin(), block.end());
    }
  }
  return rows;
}

std::vector<BoundRow> bound_rows(const SweepSpec& spec) {
  spec.validate(SweepMode::kFig3);
  std::vector<BoundRow> rows;
  for (int n : spec.n_list) {
    for (double e : spec.eps_values()) {
      const auto b = bound_comparison(n, e);
      rows.push_back({n, e, b.p_max, b.schulman_bound});
    }
  }
  return rows;
}

std::optional<long> first_iteration_reaching(const std::vector<TrajectoryRecord>& trajectory,
                                             double threshold) {
  for (const auto& r : trajectory)
    if (r.iteration >= 1 && r.polarizations.target >= threshold) return r.iteration;
  return std::nullopt;
}

long formula_iterations_3qubit(double eps_b, double delta_rel) {
  const double delta = delta_rel * detail::three_qubit_limit(eps_b);
  if (delta >= detail::initial_gap(eps_b)) return 1;
  return steps_report(delta, eps_b).iterations_exact_3qubit;
}

std::vector<StepsRow> steps_rows(const SweepSpec& spec) {
  spec.validate(SweepMode::kFig5);
  const auto eps = spec.eps_values();
  const auto drel = spec.delta_rel_grid->values();

  struct Cell {
    Index d, m;
    double eps_b;
  };
  std::vector<Cell> cells;
  for (Index d : spec.d_list)
    for (Index m : spec.m_list)
      for (double e : eps) cells.push_back({d, m, e});

  std::vector<std::vector<StepsRow>> out(cells.size());
  parallel_for(cells.size(), spec.threads, [&](std::size_t i) {
    const auto& c = cells[i];
    const SystemConfig cfg(c.d, c.m, c.eps_b);
    const auto result = run_from_mixed(cfg, spec.policy);
    const double limit = asymptotic_polarization(cfg);
    for (double dr : drel) {
      StepsRow row{c.d, c.m, c.eps_b, dr, first_iteration_reaching(result.trajectory, limit * (1 - dr)),
                   std::nullopt};
      if (c.d == 2 && c.m == 1) row.iterations_formula = formula_iterations_3qubit(c.eps_b, dr);
      out[i].push_back(row);
    }
  });
  std::vector<StepsRow> rows;
  for (auto& block : out) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

std::vector<SimulationRow> simulation_rows(const SweepSpec& spec) {
  spec.validate(SweepMode::kCustom);
  struct Cell {
    Index d, m;
    double eps_b;
  };
  std::vector<Cell> cells;
  for (Index d : spec.d_list)
    for (Index m : spec.m_list)
      for (double e : spec.eps_values()) cells.push_back({d, m, e});

  std::vector<SimulationRow> rows(cells.size());
  parallel_for(cells.size(), spec.threads, [&](std::size_t i) {
    const auto& c = cells[i];
    const SystemConfig cfg(c.d, c.m, c.eps_b);
    const auto result = run_from_mixed(cfg, spec.policy);
    const auto& last = result.trajectory.back();
    rows[i] = {c.d,
               c.m,
               c.eps_b,
               result.iterations,
               result.converged,
               last.polarizations.target,
               asymptotic_polarization(cfg),
               last.distance_to_steady};
  });
  return rows;
}

Table to_table(const std::vector<CoolingLimitRow>& rows) {
  Table t{{"d", "m", "eps_b", "eps_infinity", "transition_marker"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.d), std::to_string(r.m), format_double(r.eps_b),
                      format_double(r.eps_infinity), r.transition_marker ? "1" : "0"});
  return t;
}

Table to_table(const std::vector<BoundRow>& rows) {
  Table t{{"n", "eps_b", "p_max", "schulman_bound"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.n), format_double(r.eps_b), format_double(r.p_max),
                      format_double(r.schulman_bound)});
  return t;
}

Table to_table(const std::vector<StepsRow>& rows) {
  Table t{{"d", "m", "eps_b", "delta_rel", "iterations_simulated", "iterations_formula"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.d), std::to_string(r.m), format_double(r.eps_b),
                      format_double(r.delta_rel), opt_to_string(r.iterations_simulated),
                      opt_to_string(r.iterations_formula)});
  return t;
}

Table to_table(const std::vector<SimulationRow>& rows) {
  Table t{{"d", "m", "eps_b", "iterations", "converged", "eps_target", "eps_infinity",
           "distance_to_steady"},
          {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.d), std::to_string(r.m), format_double(r.eps_b),
                      std::to_string(r.iterations), r.converged ? "1" : "0",
                      format_double(r.eps_target), format_double(r.eps_infinity),
                      format_double(r.distance_to_steady)});
  return t;
}

Table run_sweep(SweepMode mode, const SweepSpec& spec) {
  switch (mode) {
    case SweepMode::kFig2: return to_table(cooling_limit_rows(spec));
    case SweepMode::kFig3: return to_table(bound_rows(spec));
    case SweepMode::kFig5: return to_table(steps_rows(spec));
    case SweepMode::kCustom: return to_table(simulation_rows(spec));
  }
  throw std::logic_error("unreachable sweep mode");
}

}  // namespace hbac
