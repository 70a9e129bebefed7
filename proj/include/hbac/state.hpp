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

#include <array>
#include <cmath>
#include <concepts>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hbac/config.hpp"

namespace hbac {

/// Entries in [-kNegativeClamp, 0) are rounding noise and clamp to zero.
inline constexpr double kNegativeClamp = 1e-15;
/// Allowed deviation of a probability vector's sum from one.
inline constexpr double kSumTolerance = 1e-12;

namespace detail {

template <typename Scalar>
void sanitize_probabilities(Vector<Scalar>& p, Scalar sum_tolerance) {
  for (Index i = 0; i < p.size(); ++i) {
    Scalar& x = p[i];
    if (!std::isfinite(x))
      throw std::domain_error("probability entry " + std::to_string(i) + " is not finite");
    if (x < Scalar(0)) {
      if (x < -Scalar(kNegativeClamp))
        throw std::domain_error("probability entry " + std::to_string(i) +
                                " is negative: " + std::to_string(static_cast<double>(x)));
      x = Scalar(0);
    } else if (x > Scalar(1)) {
      if (x > Scalar(1) + Scalar(kNegativeClamp))
        throw std::domain_error("probability entry " + std::to_string(i) + " exceeds 1");
      x = Scalar(1);
    }
  }
  const Scalar total = p.sum();
  if (!(std::abs(total - Scalar(1)) <= sum_tolerance))
    throw std::domain_error("probabilities sum to " + std::to_string(static_cast<double>(total)) +
                            ", not 1");
}

}  // namespace detail

struct FullSystemTag {};
struct ComputationalTag {};

/// Non-negative vector summing to one. The tag keeps full-system diagonals and
/// computational-register diagonals from being mixed up.
template <std::floating_point Scalar_, typename Tag>
class ProbabilityVector {
 public:
  using Scalar = Scalar_;
  using VectorType = Vector<Scalar>;

  ProbabilityVector() = default;

  /// Validates and clamps; throws std::domain_error on a malformed vector.
  explicit ProbabilityVector(VectorType probs) : probs_(std::move(probs)) {
    detail::sanitize_probabilities(probs_, Scalar(kSumTolerance));
  }

  /// Accepts a vector whose sum is within `sum_tolerance` of one and rescales
  /// it to sum to one.
  static ProbabilityVector renormalized(VectorType probs, Scalar sum_tolerance) {
    detail::sanitize_probabilities(probs, sum_tolerance);
    probs /= probs.sum();
    return ProbabilityVector(std::move(probs));
  }

  const VectorType& probs() const { return probs_; }
  Index size() const { return probs_.size(); }
  Scalar operator[](Index i) const { return probs_[i]; }

  template <std::floating_point Other>
  ProbabilityVector<Other, Tag> cast() const {
    return ProbabilityVector<Other, Tag>(probs_.template cast<Other>());
  }

  friend bool operator==(const ProbabilityVector& a, const ProbabilityVector& b) {
    return a.probs_.size() == b.probs_.size() && a.probs_ == b.probs_;
  }

 private:
  VectorType probs_;
};

/// Diagonal of the full density matrix, length D = 2 d 2^m.
template <std::floating_point Scalar>
using BasicDiagonalState = ProbabilityVector<Scalar, FullSystemTag>;
/// Diagonal (A_1, ..., A_2d) of the target + scratch register.
template <std::floating_point Scalar>
using BasicComputationalDiag = ProbabilityVector<Scalar, ComputationalTag>;

using DiagonalState = BasicDiagonalState<double>;
using ComputationalDiag = BasicComputationalDiag<double>;

template <std::floating_point Scalar>
struct BasicPolarizationReport {
  Scalar target = 0;
  /// Scratch qubit j at index j-1, numbered from the reset side. Empty unless d
  /// is a power of two.
  std::vector<Scalar> scratch_qubits;
  /// Reset qubit k at index k-1; reset qubit 1 is the least significant bit.
  std::vector<Scalar> resets;

  Scalar reset() const { return resets.front(); }
};

using PolarizationReport = BasicPolarizationReport<double>;

// ---------------------------------------------------------------------------

template <std::floating_point Scalar>
BasicDiagonalState<Scalar> maximally_mixed(const BasicConfig<Scalar>& cfg) {
  const Index n = cfg.full_dim();
  return BasicDiagonalState<Scalar>(Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n)));
}

template <std::floating_point Scalar>
std::array<Scalar, 2> bath_qubit(Scalar eps_b) {
  if (!(eps_b >= Scalar(0) && eps_b < Scalar(1)))
    throw std::invalid_argument("bath polarization must lie in [0, 1)");
  return {(Scalar(1) + eps_b) / Scalar(2), (Scalar(1) - eps_b) / Scalar(2)};
}

/// Diagonal of (rho_{eps_b})^{(x) m}, length 2^m.
template <std::floating_point Scalar>
Vector<Scalar> bath_register(const BasicConfig<Scalar>& cfg) {
  const auto q = bath_qubit(cfg.eps_b());
  Vector<Scalar> reg(cfg.reset_dim());
  reg[0] = Scalar(1);
  Index filled = 1;
  for (Index k = 0; k < cfg.m(); ++k) {
    // Appending a less significant qubit: new[2i + b] = old[i] * q[b].
    for (Index i = filled - 1; i >= 0; --i) {
      const Scalar v = reg[i];
      reg[2 * i] = v * q[0];
      reg[2 * i + 1] = v * q[1];
    }
    filled *= 2;
  }
  return reg;
}

namespace detail {

template <typename Scalar, typename Tag>
void require_size(const ProbabilityVector<Scalar, Tag>& v, Index expected, const char* what) {
  if (v.size() != expected)
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(expected) + ", got " + std::to_string(v.size()));
}

}  // namespace detail

/// Partial trace over the reset qubits: A_k is the sum of the k-th contiguous
/// block of 2^m entries.
template <std::floating_point Scalar>
BasicComputationalDiag<Scalar> trace_out_resets(const BasicDiagonalState<Scalar>& state,
                                                const BasicConfig<Scalar>& cfg) {
  detail::require_size(state, cfg.full_dim(), "trace_out_resets");
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::Map<const Matrix> blocks(state.probs().data(), cfg.reset_dim(), cfg.computational_dim());
  return BasicComputationalDiag<Scalar>(blocks.colwise().sum().transpose());
}

/// Replaces the reset qubits with fresh bath qubits: a (x) rho_{eps_b}^{(x) m}.
template <std::floating_point Scalar>
BasicDiagonalState<Scalar> refresh(const BasicComputationalDiag<Scalar>& a,
                                   const BasicConfig<Scalar>& cfg) {
  detail::require_size(a, cfg.computational_dim(), "refresh");
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Vector<Scalar> out(cfg.full_dim());
  Eigen::Map<Matrix>(out.data(), cfg.reset_dim(), cfg.computational_dim()).noalias() =
      bath_register(cfg) * a.probs().transpose();
  return BasicDiagonalState<Scalar>(std::move(out));
}

/// Polarization (p0 - p1) of the qubit stored at `bit` of the full index.
template <typename Derived>
typename Derived::Scalar bit_polarization(const Eigen::MatrixBase<Derived>& p, int bit) {
  using Scalar = typename Derived::Scalar;
  Scalar acc = 0;
  for (Index i = 0; i < p.size(); ++i) acc += ((i >> bit) & 1) ? -p[i] : p[i];
  return acc;
}

template <std::floating_point Scalar>
BasicPolarizationReport<Scalar> qubit_polarizations(const BasicDiagonalState<Scalar>& state,
                                                    const BasicConfig<Scalar>& cfg) {
  detail::require_size(state, cfg.full_dim(), "qubit_polarizations");
  const auto& p = state.probs();
  const Index half = cfg.full_dim() / 2;

  BasicPolarizationReport<Scalar> report;
  report.target = Scalar(2) * p.head(half).sum() - Scalar(1);
  const int m = static_cast<int>(cfg.m());
  report.resets.reserve(m);
  for (int k = 0; k < m; ++k) report.resets.push_back(bit_polarization(p, k));
  const int n_scratch = cfg.scratch_qubits();
  for (int j = 0; j < n_scratch; ++j) report.scratch_qubits.push_back(bit_polarization(p, m + j));
  return report;
}

}  // namespace hbac
