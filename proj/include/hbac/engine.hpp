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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hbac/analytic.hpp"
#include "hbac/config.hpp"
#include "hbac/state.hpp"

namespace hbac {

/// Partner-pairing compression: sorts the diagonal in non-increasing order.
/// The sort is stable, so equal entries keep their relative order.
template <std::floating_point Scalar>
BasicDiagonalState<Scalar> compress(const BasicDiagonalState<Scalar>& state) {
  Vector<Scalar> p = state.probs();
  std::stable_sort(p.data(), p.data() + p.size(), std::greater<Scalar>{});
  return BasicDiagonalState<Scalar>(std::move(p));
}

/// One iteration: compress, trace out the resets, re-attach fresh bath qubits.
template <std::floating_point Scalar>
BasicDiagonalState<Scalar> ppa_iteration(const BasicDiagonalState<Scalar>& state,
                                         const BasicConfig<Scalar>& cfg) {
  detail::require_size(state, cfg.full_dim(), "ppa_iteration");
  return refresh(trace_out_resets(compress(state), cfg), cfg);
}

namespace detail {

template <std::floating_point Scalar>
Vector<Scalar> sorted_descending(const BasicComputationalDiag<Scalar>& a) {
  Vector<Scalar> v = a.probs();
  std::sort(v.data(), v.data() + v.size(), std::greater<Scalar>{});
  return v;
}

template <std::floating_point Scalar>
std::pair<Scalar, Scalar> bath_extremes(const BasicConfig<Scalar>& cfg) {
  const Scalar m = static_cast<Scalar>(cfg.m());
  return {std::pow(Scalar(1) - cfg.eps_b(), m), std::pow(Scalar(1) + cfg.eps_b(), m)};
}

}  // namespace detail

/// min_i A_i (1 - eps_b)^m - A_{i+1} (1 + eps_b)^m over the sorted diagonal.
/// Non-negative exactly when refreshing leaves the full diagonal sorted.
template <std::floating_point Scalar>
Scalar condition_margin(const BasicComputationalDiag<Scalar>& a, const BasicConfig<Scalar>& cfg) {
  detail::require_size(a, cfg.computational_dim(), "condition_margin");
  const Vector<Scalar> v = detail::sorted_descending(a);
  const auto [lo, hi] = detail::bath_extremes(cfg);
  const Index n = v.size();
  if (n < 2) return Scalar(0);
  return (v.head(n - 1) * lo - v.tail(n - 1) * hi).minCoeff();
}

/// True when A_i (1 - eps_b)^m >= A_{i+1} (1 + eps_b)^m - slack for every i,
/// i.e. no further compression is possible. `a` must already be sorted.
template <std::floating_point Scalar>
bool steady_condition_met(const BasicComputationalDiag<Scalar>& a, const BasicConfig<Scalar>& cfg,
                          Scalar slack) {
  detail::require_size(a, cfg.computational_dim(), "steady_condition_met");
  const auto& v = a.probs();
  const auto [lo, hi] = detail::bath_extremes(cfg);
  for (Index i = 0; i + 1 < v.size(); ++i)
    if (v[i] * lo < v[i + 1] * hi - slack) return false;
  return true;
}

/// True when A_i (1 - eps_b)^m <= A_{i+1} (1 + eps_b)^m + slack for every i of
/// the sorted diagonal: neighbouring populations are no further apart than one
/// refresh can separate them. Holds for the maximally mixed state and is
/// preserved by ppa_iteration.
template <std::floating_point Scalar>
bool mixed_side_condition_met(const BasicComputationalDiag<Scalar>& a,
                              const BasicConfig<Scalar>& cfg, Scalar slack = Scalar(1e-12)) {
  detail::require_size(a, cfg.computational_dim(), "mixed_side_condition_met");
  const Vector<Scalar> v = detail::sorted_descending(a);
  const auto [lo, hi] = detail::bath_extremes(cfg);
  for (Index i = 0; i + 1 < v.size(); ++i)
    if (v[i] * lo > v[i + 1] * hi + slack) return false;
  return true;
}

enum class StopRule {
  /// Max-norm change of (A_1..A_2d) between iterations below tolerance. A
  /// fixed point of the iteration is exactly a state whose A stops changing.
  kDiagonalChange,
  /// Absolute change of the target polarization below tolerance. Can stop
  /// early: for d = 2 the target is unchanged on every other iteration.
  kTargetPolarization,
};

struct IterationPolicy {
  long max_iterations = 100000;
  double tolerance = 1e-12;
  StopRule rule = StopRule::kDiagonalChange;
  /// Also stop once steady_condition_met holds with this slack.
  bool steady_check = false;
  double steady_slack = 1e-12;

  void validate() const {
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be > 0");
    if (!(steady_slack >= 0)) throw std::invalid_argument("steady slack must be >= 0");
  }
};

template <std::floating_point Scalar>
struct BasicTrajectoryRecord {
  long iteration = 0;
  BasicPolarizationReport<Scalar> polarizations;
  /// Max-norm distance between A and the analytic steady state.
  Scalar distance_to_steady = 0;
  Scalar condition_margin = 0;
};

using TrajectoryRecord = BasicTrajectoryRecord<double>;

template <std::floating_point Scalar>
struct BasicRunResult {
  BasicDiagonalState<Scalar> final_state;
  /// Record 0 is the refreshed initial state, then one record per iteration.
  std::vector<BasicTrajectoryRecord<Scalar>> trajectory;
  bool converged = false;
  long iterations = 0;
};

using RunResult = BasicRunResult<double>;

template <std::floating_point Scalar>
BasicTrajectoryRecord<Scalar> make_record(long t, const BasicDiagonalState<Scalar>& state,
                                          const BasicComputationalDiag<Scalar>& a,
                                          const BasicComputationalDiag<Scalar>& steady,
                                          const BasicConfig<Scalar>& cfg) {
  return {t, qubit_polarizations(state, cfg), (a.probs() - steady.probs()).cwiseAbs().maxCoeff(),
          condition_margin(a, cfg)};
}

/// Iterates from `init` until the policy's stopping rule fires or
/// max_iterations is reached.
///
/// The initial state is refreshed first (its resets replaced by bath qubits),
/// so iteration 1 is the first compression of a bath-refreshed state. From
/// the maximally mixed state, iteration 2j + 1 then carries the target
/// polarization of j 3qubit-rounds after iteration 0.
template <std::floating_point Scalar>
BasicRunResult<Scalar> run(const BasicConfig<Scalar>& cfg, const BasicDiagonalState<Scalar>& init,
                           const IterationPolicy& policy) {
  policy.validate();
  detail::require_size(init, cfg.full_dim(), "run");
  const auto steady = steady_state(cfg).a;
  const Scalar tol = static_cast<Scalar>(policy.tolerance);

  BasicRunResult<Scalar> result;
  auto a = trace_out_resets(init, cfg);
  auto state = refresh(a, cfg);
  result.trajectory.push_back(make_record(0, state, a, steady, cfg));

  for (long t = 1; t <= policy.max_iterations; ++t) {
    auto next_a = trace_out_resets(compress(state), cfg);
    auto next_state = refresh(next_a, cfg);
    auto record = make_record(t, next_state, next_a, steady, cfg);

    const Scalar change =
        policy.rule == StopRule::kDiagonalChange
            ? (next_a.probs() - a.probs()).cwiseAbs().maxCoeff()
            : std::abs(record.polarizations.target - result.trajectory.back().polarizations.target);
    bool stop = change < tol;
    if (policy.steady_check && steady_condition_met(next_a, cfg, static_cast<Scalar>(policy.steady_slack)))
      stop = true;

    result.trajectory.push_back(std::move(record));
    state = std::move(next_state);
    a = std::move(next_a);
    result.iterations = t;
    if (stop) {
      result.converged = true;
      break;
    }
  }
  result.final_state = std::move(state);
  return result;
}

/// Runs from the maximally mixed state.
template <std::floating_point Scalar>
BasicRunResult<Scalar> run_from_mixed(const BasicConfig<Scalar>& cfg, const IterationPolicy& policy) {
  return run(cfg, maximally_mixed(cfg), policy);
}

}  // namespace hbac
