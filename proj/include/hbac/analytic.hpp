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

// Closed-form cooling-limit quantities for the partner pairing algorithm.
//
// Every expression of the form ((1+e)^k - (1-e)^k) / ((1+e)^k + (1-e)^k) is
// evaluated as tanh(k * atanh(e)), and powers of (1-e)/(1+e) as
// exp(-2 k atanh(e)), so nothing overflows for large k.

#pragma once

#include <cmath>
#include <concepts>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hbac/config.hpp"
#include "hbac/state.hpp"

namespace hbac {

template <std::floating_point Scalar>
struct BasicSteadyState {
  /// Q = ((1 - eps_b) / (1 + eps_b))^m.
  Scalar q_ratio = 1;
  /// A_i = A_1 Q^{i-1}.
  BasicComputationalDiag<Scalar> a;
};

using SteadyState = BasicSteadyState<double>;

namespace detail {

template <std::floating_point Scalar>
void require_bath(Scalar eps_b, bool allow_zero = true) {
  const bool ok = (allow_zero ? eps_b >= Scalar(0) : eps_b > Scalar(0)) && eps_b < Scalar(1);
  if (!ok) {
    std::ostringstream os;
    os << "bath polarization must lie in " << (allow_zero ? "[0, 1)" : "(0, 1)") << ", got "
       << static_cast<double>(eps_b);
    throw std::invalid_argument(os.str());
  }
}

/// tanh(k atanh(e)), the polarization obtained by a k-fold amplification.
template <std::floating_point Scalar>
Scalar amplified(Scalar k, Scalar eps) {
  return std::tanh(k * std::atanh(eps));
}

/// f(e) = 2e / (1 + e^2), the three-qubit cooling limit for bath polarization e.
template <std::floating_point Scalar>
Scalar three_qubit_limit(Scalar eps) {
  return Scalar(2) * eps / (Scalar(1) + eps * eps);
}

}  // namespace detail

/// Fixed point of the iteration reached from the maximally mixed state:
/// A_i = (1 - Q) Q^{i-1} / (1 - Q^{2d}).
template <std::floating_point Scalar>
BasicSteadyState<Scalar> steady_state(const BasicConfig<Scalar>& cfg) {
  const Index n = cfg.computational_dim();
  const Scalar eps = cfg.eps_b();
  if (eps == Scalar(0)) {
    return {Scalar(1), BasicComputationalDiag<Scalar>(Vector<Scalar>::Constant(n, Scalar(1) / n))};
  }
  // log Q = m log((1-e)/(1+e)) = -2 m atanh(e)
  const Scalar log_q = -Scalar(2) * static_cast<Scalar>(cfg.m()) * std::atanh(eps);
  const Scalar head = -std::expm1(log_q) / -std::expm1(static_cast<Scalar>(n) * log_q);
  Vector<Scalar> a(n);
  for (Index i = 0; i < n; ++i) a[i] = head * std::exp(static_cast<Scalar>(i) * log_q);
  // The head/tail ratio is exact up to rounding; rescale so the sum check is tight.
  a /= a.sum();
  return {std::exp(log_q), BasicComputationalDiag<Scalar>(std::move(a))};
}

/// Target-qubit polarization at the cooling limit, tanh(m d atanh(eps_b)).
template <std::floating_point Scalar>
Scalar asymptotic_polarization(const BasicConfig<Scalar>& cfg) {
  return detail::amplified(static_cast<Scalar>(cfg.m() * cfg.d()), cfg.eps_b());
}

/// 1 - asymptotic_polarization, evaluated as 2 z / (1 + z) with
/// z = exp(-2 m d atanh(eps_b)) so it degrades to a denormal or zero rather
/// than cancelling.
template <std::floating_point Scalar>
Scalar delta_max(const BasicConfig<Scalar>& cfg) {
  const Scalar x = static_cast<Scalar>(cfg.m() * cfg.d()) * std::atanh(cfg.eps_b());
  const Scalar z = std::exp(-Scalar(2) * x);
  return Scalar(2) * z / (Scalar(1) + z);
}

/// Cooling limit of qubit j in a string of d = 2^{n'} scratch qubits plus the
/// target, numbered from the reset side: j = 1 is the least significant
/// scratch qubit and j = n' + 1 is the target.
template <std::floating_point Scalar>
Scalar per_qubit_polarization(const BasicConfig<Scalar>& cfg, int j) {
  const int n_scratch = cfg.scratch_qubits();
  if (n_scratch < 0)
    throw std::invalid_argument("per-qubit polarizations need d to be a power of two, got d = " +
                                std::to_string(cfg.d()));
  if (j < 1 || j > n_scratch + 1)
    throw std::invalid_argument("qubit index must lie in [1, " + std::to_string(n_scratch + 1) +
                                "], got " + std::to_string(j));
  const Scalar k = static_cast<Scalar>(cfg.m()) * std::ldexp(Scalar(1), j - 1);
  return detail::amplified(k, cfg.eps_b());
}

/// All per-qubit limits, indexed j - 1.
template <std::floating_point Scalar>
std::vector<Scalar> per_qubit_polarizations(const BasicConfig<Scalar>& cfg) {
  std::vector<Scalar> out;
  for (int j = 1; j <= cfg.scratch_qubits() + 1; ++j) out.push_back(per_qubit_polarization(cfg, j));
  return out;
}

/// T_steady / T_b = (dE_t / dE_b) / (m d). The reset gap equals the bath gap.
template <std::floating_point Scalar>
Scalar steady_temperature_ratio(const BasicConfig<Scalar>& cfg, Scalar gap_ratio) {
  if (!(gap_ratio > Scalar(0)) || !std::isfinite(gap_ratio))
    throw std::invalid_argument("energy-gap ratio must be positive");
  return gap_ratio / static_cast<Scalar>(cfg.m() * cfg.d());
}

/// Bath polarization 1/(md) where the cooling limit leaves the linear regime,
/// and the limit there. Undefined for md = 1.
template <std::floating_point Scalar>
std::pair<Scalar, Scalar> transition_marker(Index d, Index m) {
  const Index md = d * m;
  if (d < 1 || m < 1 || md < 2)
    throw std::invalid_argument("transition marker needs m*d >= 2");
  const Scalar eps = Scalar(1) / static_cast<Scalar>(md);
  return {eps, detail::amplified(static_cast<Scalar>(md), eps)};
}

template <std::floating_point Scalar>
struct BasicBoundComparison {
  int n = 0;
  Scalar eps_b = 0;
  /// Probability of |00...0> at the cooling limit.
  Scalar p_max = 0;
  /// min{2^{-n} exp(atanh(eps_b) 2^{n-1}), 1}.
  Scalar schulman_bound = 0;
};

using BoundComparison = BasicBoundComparison<double>;

/// Exact maximal basis-state probability for n qubits (n - 2 scratch qubits, one
/// reset) against the general heat-bath bound.
template <std::floating_point Scalar>
BasicBoundComparison<Scalar> bound_comparison(int n, Scalar eps_b) {
  if (n < 2) throw std::invalid_argument("qubit count n must be >= 2");
  detail::require_bath(eps_b, /*allow_zero=*/false);
  const Scalar a = std::atanh(eps_b);
  // ((1-e)/(1+e))^{2^{n-1}} = exp(-2^n atanh e)
  const Scalar p_max = eps_b / -std::expm1(-std::ldexp(a, n));
  const Scalar log_bound = std::ldexp(a, n - 1) - static_cast<Scalar>(n) * std::numbers::ln2_v<Scalar>;
  const Scalar bound = log_bound >= Scalar(0) ? Scalar(1) : std::exp(log_bound);
  return {n, eps_b, p_max, bound};
}

// --- Three-qubit (d = 2, m = 1) step counts --------------------------------

/// One 3qubit-round: eps -> ((1 - eps_b^2) / 2) eps + eps_b.
template <std::floating_point Scalar>
Scalar three_qubit_round_map(Scalar eps_t, Scalar eps_b) {
  detail::require_bath(eps_b);
  if (!(std::abs(eps_t) <= Scalar(1))) throw std::invalid_argument("|eps_t| must be <= 1");
  return (Scalar(1) - eps_b * eps_b) / Scalar(2) * eps_t + eps_b;
}

/// Target polarization after j rounds, starting from eps_b after iteration 0.
template <std::floating_point Scalar>
Scalar polarization_after_rounds(long j, Scalar eps_b) {
  detail::require_bath(eps_b);
  if (j < 0) throw std::invalid_argument("round count must be >= 0");
  const Scalar limit = detail::three_qubit_limit(eps_b);
  const Scalar q = (Scalar(1) - eps_b * eps_b) / Scalar(2);
  return limit - std::pow(q, static_cast<Scalar>(j)) * (limit - eps_b);
}

namespace detail {

/// f(e) - e = e (1 - e^2) / (1 + e^2), the gap left after iteration 0.
template <std::floating_point Scalar>
Scalar initial_gap(Scalar eps) {
  return eps * (Scalar(1) - eps * eps) / (Scalar(1) + eps * eps);
}

template <std::floating_point Scalar>
Scalar log_round_factor(Scalar eps) {
  return std::log1p(-eps * eps) - std::numbers::ln2_v<Scalar>;
}

}  // namespace detail

/// Real-valued iteration count N(delta, eps_b) = 2 log(delta / (f - eps_b)) / log q
/// to get within delta of the three-qubit limit. delta = f - eps_b gives 0.
template <std::floating_point Scalar>
Scalar steps_exact_3qubit(Scalar delta, Scalar eps_b) {
  detail::require_bath(eps_b, /*allow_zero=*/false);
  const Scalar gap = detail::initial_gap(eps_b);
  if (!(delta > Scalar(0) && delta <= gap)) {
    std::ostringstream os;
    os.precision(17);
    os << "delta must lie in (0, " << static_cast<double>(gap) << "] for eps_b = "
       << static_cast<double>(eps_b) << ", got " << static_cast<double>(delta);
    throw std::domain_error(os.str());
  }
  return Scalar(2) * std::log(delta / gap) / detail::log_round_factor(eps_b);
}

/// Smallest whole number of rounds j with polarization_after_rounds(j) >= f - delta.
template <std::floating_point Scalar>
long rounds_exact_3qubit(Scalar delta, Scalar eps_b) {
  const Scalar n = steps_exact_3qubit(delta, eps_b);
  const Scalar gap = detail::initial_gap(eps_b);
  const Scalar log_q = detail::log_round_factor(eps_b);
  // q^j gap <= delta decides; the ceiling alone can be off by one at exact multiples.
  const auto reached = [&](long j) { return std::exp(static_cast<Scalar>(j) * log_q) * gap <= delta; };
  long j = static_cast<long>(std::ceil(n / Scalar(2)));
  while (j > 0 && reached(j - 1)) --j;
  while (!reached(j)) ++j;
  return j;
}

template <std::floating_point Scalar>
struct BasicStepLevel {
  Scalar delta = 0;
  /// Polarization acting as the bath at this level, eps_{k-1}.
  Scalar eps_in = 0;
  /// eps_k = f(eps_{k-1}) - delta_k.
  Scalar eps_out = 0;
  /// N(delta_k, eps_{k-1}).
  Scalar steps = 0;
  /// N_k = N(delta_k, eps_{k-1}) N_{k-1}.
  Scalar cumulative = 0;
};

template <std::floating_point Scalar>
struct BasicStepCountReport {
  Scalar eps_b = 0;
  Scalar delta = 0;
  /// N(delta, eps_b), real valued.
  Scalar steps_exact_3qubit = 0;
  /// Whole 3qubit-rounds needed, ceil(N / 2) up to rounding at the boundary.
  long rounds_exact_3qubit = 0;
  /// Two iterations per round plus iteration 0.
  long iterations_exact_3qubit = 0;

  /// Filled only for an n' >= 2 request.
  std::optional<int> n_prime;
  std::vector<BasicStepLevel<Scalar>> levels;
  /// eps_0 = eps_b, eps_1, ..., eps_h.
  std::vector<Scalar> intermediate_eps;
  std::optional<Scalar> upper_bound_n_qubit;
  /// Polarization eps_{h,delta} = eps_h delivered by the construction.
  std::optional<Scalar> eps_reached;
};

using StepCountReport = BasicStepCountReport<double>;

template <std::floating_point Scalar>
BasicStepCountReport<Scalar> steps_report(Scalar delta, Scalar eps_b) {
  BasicStepCountReport<Scalar> r;
  r.eps_b = eps_b;
  r.delta = delta;
  r.steps_exact_3qubit = steps_exact_3qubit(delta, eps_b);
  r.rounds_exact_3qubit = rounds_exact_3qubit(delta, eps_b);
  r.iterations_exact_3qubit = 2 * r.rounds_exact_3qubit + 1;
  return r;
}

/// Upper bound on the steps needed by an n'-scratch-qubit string (m = 1), built
/// from h = floor(n'/2) nested three-qubit stages. Stage k treats the previous
/// stage's polarization eps_{k-1} as its bath. `deltas` holds one delta per
/// stage, or a single delta shared by all of them.
template <std::floating_point Scalar>
BasicStepCountReport<Scalar> steps_upper_bound(int n_prime, Scalar eps_b,
                                               const std::vector<Scalar>& deltas) {
  if (n_prime < 2) throw std::invalid_argument("n' must be >= 2");
  const int h = n_prime / 2;
  if (deltas.empty() || (deltas.size() != 1 && deltas.size() != static_cast<std::size_t>(h)))
    throw std::invalid_argument("expected 1 or " + std::to_string(h) + " delta values for n' = " +
                                std::to_string(n_prime) + ", got " + std::to_string(deltas.size()));

  auto report = steps_report(deltas.front(), eps_b);
  report.n_prime = n_prime;
  report.intermediate_eps.push_back(eps_b);
  Scalar eps = eps_b;
  Scalar product = 1;
  for (int k = 1; k <= h; ++k) {
    const Scalar delta = deltas.size() == 1 ? deltas.front() : deltas[k - 1];
    BasicStepLevel<Scalar> level;
    level.delta = delta;
    level.eps_in = eps;
    try {
      level.steps = steps_exact_3qubit(delta, eps);
    } catch (const std::domain_error& e) {
      throw std::domain_error("stage " + std::to_string(k) + ": " + e.what());
    }
    product *= level.steps;
    level.cumulative = product;
    eps = detail::three_qubit_limit(eps) - delta;
    level.eps_out = eps;
    report.levels.push_back(level);
    report.intermediate_eps.push_back(eps);
  }
  report.upper_bound_n_qubit = product;
  report.eps_reached = eps;
  return report;
}

/// Polarization ceiling tanh((d/2) atanh(eps_b)) of the pairwise construction
/// behind steps_upper_bound. Only m = 1 is meaningful; m is ignored.
template <std::floating_point Scalar>
Scalar eps_max_swap_scheme(const BasicConfig<Scalar>& cfg) {
  if (cfg.d() % 2 != 0)
    throw std::invalid_argument("swap-scheme ceiling needs even d, got d = " +
                                std::to_string(cfg.d()));
  return detail::amplified(static_cast<Scalar>(cfg.d() / 2), cfg.eps_b());
}

}  // namespace hbac
