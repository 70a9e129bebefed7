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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hbac/analytic.hpp"
#include "hbac/engine.hpp"

namespace hbac {

/// Initial states are accepted when their sum is this close to one.
inline constexpr double kIngestSumTolerance = 1e-9;

/// Shortest decimal string that parses back to exactly `x`. Negative zero
/// prints as "0".
std::string format_double(double x);

/// Parses {"probs": [...]} of length D; renormalizes after validation.
/// Throws std::invalid_argument on malformed input.
DiagonalState parse_initial_state(const nlohmann::json& doc, const SystemConfig& cfg);
DiagonalState read_initial_state(const std::filesystem::path& path, const SystemConfig& cfg);

/// Header: iteration, eps_target, eps_reset, eps_scratch_1..n',
/// distance_to_steady, condition_margin. Scratch columns appear only when d is
/// a power of two.
std::vector<std::string> trajectory_csv_header(const SystemConfig& cfg);
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& trajectory,
                          const SystemConfig& cfg);

nlohmann::json to_json(const PolarizationReport& p);
nlohmann::json to_json(const StepCountReport& r);
nlohmann::json to_json(const BoundComparison& b);

/// Summary printed by `simulate`.
nlohmann::json run_summary(const RunResult& result, const SystemConfig& cfg);

/// Everything `analytic` prints: steady state, eps_infinity, delta_max,
/// per-qubit limits (d a power of two), temperature ratio and, when `n` is
/// given, the bound comparison.
nlohmann::json analytic_summary(const SystemConfig& cfg, std::optional<int> n, double gap_ratio);

/// Writes a comma-separated table with no quoting (values never contain commas).
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace hbac
