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

// Parameter sweeps behind the cooling-limit, bound and step-count plots.
// Rows come out in nested parameter order (outer list first, grid innermost)
// regardless of how many threads evaluate the cells.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hbac/engine.hpp"

namespace hbac {

enum class Spacing { kLinear, kLog };

struct Grid {
  double min = 0;
  double max = 1;
  int count = 2;
  Spacing spacing = Spacing::kLinear;

  void validate(std::string_view name) const;
  /// Endpoints are exactly min and max.
  std::vector<double> values() const;
};

enum class SweepMode { kFig2, kFig3, kFig5, kCustom };

SweepMode parse_sweep_mode(std::string_view s);
Spacing parse_spacing(std::string_view s);

struct SweepSpec {
  std::vector<Index> d_list;
  std::vector<Index> m_list;
  /// Total qubit counts, bound comparison only.
  std::vector<int> n_list;
  Grid eps_b_grid;
  /// Explicit bath polarizations; replaces eps_b_grid when non-empty.
  std::vector<double> eps_b_values;
  std::optional<Grid> delta_rel_grid;
  IterationPolicy policy;
  unsigned threads = 1;

  std::vector<double> eps_values() const;
  void validate(SweepMode mode) const;

  static SweepSpec defaults(SweepMode mode);
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct CoolingLimitRow {
  Index d = 0;
  Index m = 0;
  double eps_b = 0;
  double eps_infinity = 0;
  /// Row sits at eps_b = 1/(md).
  bool transition_marker = false;
};

struct BoundRow {
  int n = 0;
  double eps_b = 0;
  double p_max = 0;
  double schulman_bound = 0;
};

struct StepsRow {
  Index d = 0;
  Index m = 0;
  double eps_b = 0;
  double delta_rel = 0;
  /// First iteration whose target polarization reaches eps_inf (1 - delta_rel);
  /// empty if the run ended first.
  std::optional<long> iterations_simulated;
  /// Closed-form iteration count, d = 2 and m = 1 only.
  std::optional<long> iterations_formula;
};

struct SimulationRow {
  Index d = 0;
  Index m = 0;
  double eps_b = 0;
  long iterations = 0;
  bool converged = false;
  double eps_target = 0;
  double eps_infinity = 0;
  double distance_to_steady = 0;
};

std::vector<CoolingLimitRow> cooling_limit_rows(const SweepSpec& spec);
std::vector<BoundRow> bound_rows(const SweepSpec& spec);
std::vector<StepsRow> steps_rows(const SweepSpec& spec);
std::vector<SimulationRow> simulation_rows(const SweepSpec& spec);

/// First trajectory iteration (t >= 1) with target polarization >= threshold.
std::optional<long> first_iteration_reaching(const std::vector<TrajectoryRecord>& trajectory,
                                             double threshold);

/// Closed-form iteration count for the three-qubit case at relative gap
/// delta_rel; 1 when iteration 0 already suffices.
long formula_iterations_3qubit(double eps_b, double delta_rel);

Table to_table(const std::vector<CoolingLimitRow>& rows);
Table to_table(const std::vector<BoundRow>& rows);
Table to_table(const std::vector<StepsRow>& rows);
Table to_table(const std::vector<SimulationRow>& rows);

Table run_sweep(SweepMode mode, const SweepSpec& spec);

}  // namespace hbac
