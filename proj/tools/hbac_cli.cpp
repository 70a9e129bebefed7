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

// hbac: simulate | analytic | steps | sweep
//
// Exit codes: 0 ok, 1 non-convergence under --strict, 2 usage or validation error.

#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hbac/analytic.hpp"
#include "hbac/engine.hpp"
#include "hbac/io.hpp"
#include "hbac/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 1;
constexpr int kExitUsage = 2;

struct ConfigFlags {
  long d = 2;
  long m = 1;
  double eps_b = 0.0;

  void add_to(CLI::App& app) {
    app.add_option("--d", d, "scratch qudit dimension")->capture_default_str();
    app.add_option("--m", m, "number of reset qubits")->capture_default_str();
    app.add_option("--eps-b", eps_b, "bath polarization in [0, 1)")->required();
  }
  hbac::SystemConfig config() const { return hbac::SystemConfig(d, m, eps_b); }
};

struct PolicyFlags {
  hbac::IterationPolicy policy;
  std::string rule = "diagonal";

  void add_to(CLI::App& app) {
    app.add_option("--max-iters", policy.max_iterations, "iteration cap")->capture_default_str();
    app.add_option("--tol", policy.tolerance, "stopping tolerance")->capture_default_str();
    app.add_option("--stop-rule", rule, "diagonal | target")
        ->check(CLI::IsMember({"diagonal", "target"}))
        ->capture_default_str();
    app.add_flag("--steady-check", policy.steady_check,
                 "also stop once no further compression is possible");
  }
  hbac::IterationPolicy resolved() const {
    auto p = policy;
    p.rule = rule == "target" ? hbac::StopRule::kTargetPolarization : hbac::StopRule::kDiagonalChange;
    return p;
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open output file " + path);
  return os;
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-bath algorithmic cooling: partner pairing simulator and cooling-limit calculator"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "iterate the PPA from an initial state");
  ConfigFlags sim_cfg;
  PolicyFlags sim_policy;
  std::string sim_init;
  std::string sim_out;
  bool strict = false;
  sim_cfg.add_to(*sim);
  sim_policy.add_to(*sim);
  sim->add_option("--init", sim_init, "JSON initial state {\"probs\": [...]} (default: maximally mixed)");
  sim->add_option("--out", sim_out, "trajectory CSV path");
  sim->add_flag("--strict", strict, "exit 1 when the run does not converge");

  // analytic
  auto* ana = app.add_subcommand("analytic", "print closed-form cooling-limit quantities");
  ConfigFlags ana_cfg;
  std::optional<int> ana_n;
  double gap_ratio = 1.0;
  ana_cfg.add_to(*ana);
  ana->add_option("--n", ana_n, "total qubit count for the basis-state bound comparison");
  ana->add_option("--gap-ratio", gap_ratio, "target/bath energy-gap ratio")->capture_default_str();

  // steps
  auto* steps = app.add_subcommand("steps", "step counts to reach eps_infinity - delta");
  double steps_eps = 0;
  double steps_delta = 0;
  std::optional<int> n_prime;
  std::vector<double> deltas;
  steps->add_option("--eps-b", steps_eps, "bath polarization in (0, 1)")->required();
  auto* delta_opt = steps->add_option("--delta", steps_delta, "target gap delta");
  auto* n_prime_opt = steps->add_option("--n-prime", n_prime, "scratch-qubit count for the n-qubit upper bound");
  steps->add_option("--deltas", deltas, "per-stage deltas for the upper bound")
      ->delimiter(',')
      ->needs(n_prime_opt)
      ->excludes(delta_opt);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "parameter sweeps as CSV");
  std::string mode_name;
  std::string sweep_out;
  std::vector<long> d_list;
  std::vector<long> m_list;
  std::vector<int> n_list;
  std::vector<double> eps_list;
  std::optional<double> eps_min, eps_max;
  std::optional<int> eps_count;
  std::optional<std::string> eps_spacing;
  std::optional<double> dr_min, dr_max;
  std::optional<int> dr_count;
  std::optional<std::string> dr_spacing;
  unsigned threads = 1;
  PolicyFlags sweep_policy;
  sweep->add_option("--mode", mode_name, "fig2 | fig3 | fig5 | custom")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig5", "custom"}));
  sweep->add_option("--out", sweep_out, "CSV path (default: standard output)");
  sweep->add_option("--d-list", d_list, "scratch dimensions")->delimiter(',');
  sweep->add_option("--m-list", m_list, "reset counts")->delimiter(',');
  sweep->add_option("--n-list", n_list, "total qubit counts (fig3)")->delimiter(',');
  sweep->add_option("--eps-b", eps_list, "explicit bath polarizations (replace the grid)")->delimiter(',');
  sweep->add_option("--eps-min", eps_min);
  sweep->add_option("--eps-max", eps_max);
  sweep->add_option("--eps-count", eps_count);
  sweep->add_option("--eps-spacing", eps_spacing)->check(CLI::IsMember({"linear", "log"}));
  sweep->add_option("--delta-rel-min", dr_min);
  sweep->add_option("--delta-rel-max", dr_max);
  sweep->add_option("--delta-rel-count", dr_count);
  sweep->add_option("--delta-rel-spacing", dr_spacing)->check(CLI::IsMember({"linear", "log"}));
  sweep->add_option("--threads", threads)->capture_default_str();
  sweep_policy.add_to(*sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) {
      const auto cfg = sim_cfg.config();
      const auto init = sim_init.empty() ? hbac::maximally_mixed(cfg)
                                          : hbac::read_initial_state(sim_init, cfg);
      const auto result = hbac::run(cfg, init, sim_policy.resolved());
      if (!sim_out.empty()) {
        auto os = open_out(sim_out);
        hbac::write_trajectory_csv(os, result.trajectory, cfg);
      }
      print_json(hbac::run_summary(result, cfg));
      return strict && !result.converged ? kExitNotConverged : kExitOk;
    }
    if (*ana) {
      print_json(hbac::analytic_summary(ana_cfg.config(), ana_n, gap_ratio));
      return kExitOk;
    }
    if (*steps) {
      if (!*delta_opt && deltas.empty()) throw std::invalid_argument("one of --delta or --deltas is required");
      if (n_prime) {
        const auto ds = deltas.empty() ? std::vector<double>{steps_delta} : deltas;
        print_json(hbac::to_json(hbac::steps_upper_bound(*n_prime, steps_eps, ds)));
      } else {
        print_json(hbac::to_json(hbac::steps_report(steps_delta, steps_eps)));
      }
      return kExitOk;
    }
    if (*sweep) {
      const auto mode = hbac::parse_sweep_mode(mode_name);
      auto spec = hbac::SweepSpec::defaults(mode);
      if (!d_list.empty()) spec.d_list.assign(d_list.begin(), d_list.end());
      if (!m_list.empty()) spec.m_list.assign(m_list.begin(), m_list.end());
      if (!n_list.empty()) spec.n_list = n_list;
      if (eps_min || eps_max || eps_count || eps_spacing) spec.eps_b_values.clear();
      if (!eps_list.empty()) spec.eps_b_values = eps_list;
      if (eps_min) spec.eps_b_grid.min = *eps_min;
      if (eps_max) spec.eps_b_grid.max = *eps_max;
      if (eps_count) spec.eps_b_grid.count = *eps_count;
      if (eps_spacing) spec.eps_b_grid.spacing = hbac::parse_spacing(*eps_spacing);
      if (dr_min || dr_max || dr_count || dr_spacing) {
        auto g = spec.delta_rel_grid.value_or(hbac::Grid{1e-3, 0.3, 25, hbac::Spacing::kLog});
        if (dr_min) g.min = *dr_min;
        if (dr_max) g.max = *dr_max;
        if (dr_count) g.count = *dr_count;
        if (dr_spacing) g.spacing = hbac::parse_spacing(*dr_spacing);
        spec.delta_rel_grid = g;
      }
      spec.threads = threads;
      spec.policy = sweep_policy.resolved();
      const auto table = hbac::run_sweep(mode, spec);
      if (sweep_out.empty()) {
        hbac::write_csv(std::cout, table.header, table.rows);
      } else {
        auto os = open_out(sweep_out);
        hbac::write_csv(os, table.header, table.rows);
      }
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
