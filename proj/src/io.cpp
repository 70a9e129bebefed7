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

#include "hbac/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace hbac {

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, end);
}

DiagonalState parse_initial_state(const nlohmann::json& doc, const SystemConfig& cfg) {
  if (!doc.is_object() || !doc.contains("probs") || !doc["probs"].is_array())
    throw std::invalid_argument("initial state must be a JSON object with a \"probs\" array");
  const auto& arr = doc["probs"];
  if (static_cast<Index>(arr.size()) != cfg.full_dim())
    throw std::invalid_argument("initial state has " + std::to_string(arr.size()) +
                                " entries, expected D = " + std::to_string(cfg.full_dim()));
  Vector<double> p(cfg.full_dim());
  for (Index i = 0; i < p.size(); ++i) {
    const auto& v = arr[static_cast<std::size_t>(i)];
    if (!v.is_number())
      throw std::invalid_argument("initial state entry " + std::to_string(i) + " is not a number");
    p[i] = v.get<double>();
  }
  try {
    return DiagonalState::renormalized(std::move(p), kIngestSumTolerance);
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(std::string("invalid initial state: ") + e.what());
  }
}

DiagonalState read_initial_state(const std::filesystem::path& path, const SystemConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open initial state file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_initial_state(doc, cfg);
}

std::vector<std::string> trajectory_csv_header(const SystemConfig& cfg) {
  std::vector<std::string> h{"iteration", "eps_target", "eps_reset"};
  for (int j = 1; j <= cfg.scratch_qubits(); ++j) h.push_back("eps_scratch_" + std::to_string(j));
  h.emplace_back("distance_to_steady");
  h.emplace_back("condition_margin");
  return h;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  const auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& trajectory,
                          const SystemConfig& cfg) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(trajectory.size());
  for (const auto& rec : trajectory) {
    std::vector<std::string> row{std::to_string(rec.iteration),
                                 format_double(rec.polarizations.target),
                                 format_double(rec.polarizations.reset())};
    for (double e : rec.polarizations.scratch_qubits) row.push_back(format_double(e));
    row.push_back(format_double(rec.distance_to_steady));
    row.push_back(format_double(rec.condition_margin));
    rows.push_back(std::move(row));
  }
  write_csv(os, trajectory_csv_header(cfg), rows);
}

nlohmann::json to_json(const PolarizationReport& p) {
  return {{"target", p.target}, {"scratch_qubits", p.scratch_qubits}, {"resets", p.resets}};
}

nlohmann::json to_json(const StepCountReport& r) {
  nlohmann::json j{{"eps_b", r.eps_b},
                   {"delta", r.delta},
                   {"eps_infinity", detail::three_qubit_limit(r.eps_b)},
                   {"steps_exact_3qubit", r.steps_exact_3qubit + 0.0},
                   {"rounds_exact_3qubit", r.rounds_exact_3qubit},
                   {"iterations_exact_3qubit", r.iterations_exact_3qubit}};
  if (r.n_prime) {
    j["n_prime"] = *r.n_prime;
    auto levels = nlohmann::json::array();
    for (const auto& l : r.levels)
      levels.push_back({{"delta", l.delta},
                        {"eps_in", l.eps_in},
                        {"eps_out", l.eps_out},
                        {"steps", l.steps + 0.0},
                        {"cumulative", l.cumulative + 0.0}});
    j["levels"] = levels;
    j["intermediate_eps"] = r.intermediate_eps;
    j["upper_bound_n_qubit"] = *r.upper_bound_n_qubit + 0.0;
    j["eps_reached"] = *r.eps_reached;
  }
  return j;
}

nlohmann::json to_json(const BoundComparison& b) {
  return {{"n", b.n}, {"eps_b", b.eps_b}, {"p_max", b.p_max}, {"schulman_bound", b.schulman_bound}};
}

nlohmann::json run_summary(const RunResult& result, const SystemConfig& cfg) {
  const auto& last = result.trajectory.back();
  return {{"d", cfg.d()},
          {"m", cfg.m()},
          {"eps_b", cfg.eps_b()},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"eps_target", last.polarizations.target},
          {"eps_reset", last.polarizations.reset()},
          {"eps_scratch", last.polarizations.scratch_qubits},
          {"eps_infinity", asymptotic_polarization(cfg)},
          {"distance_to_steady", last.distance_to_steady},
          {"condition_margin", last.condition_margin}};
}

nlohmann::json analytic_summary(const SystemConfig& cfg, std::optional<int> n, double gap_ratio) {
  const auto ss = steady_state(cfg);
  std::vector<double> a(ss.a.probs().data(), ss.a.probs().data() + ss.a.size());
  nlohmann::json j{{"d", cfg.d()},
                   {"m", cfg.m()},
                   {"eps_b", cfg.eps_b()},
                   {"q_ratio", ss.q_ratio},
                   {"steady_state", a},
                   {"eps_infinity", asymptotic_polarization(cfg)},
                   {"delta_max", delta_max(cfg)},
                   {"gap_ratio", gap_ratio},
                   {"temperature_ratio", steady_temperature_ratio(cfg, gap_ratio)}};
  if (cfg.scratch_qubits() >= 0) j["per_qubit_polarizations"] = per_qubit_polarizations(cfg);
  if (cfg.d() * cfg.m() >= 2) {
    const auto [eps, lim] = transition_marker<double>(cfg.d(), cfg.m());
    j["transition_marker"] = {{"eps_b", eps}, {"eps_infinity", lim}};
  }
  if (n) j["bound"] = to_json(bound_comparison(*n, cfg.eps_b()));
  return j;
}

}  // namespace hbac
