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

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hbac {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Largest full-system dimension we are willing to allocate.
inline constexpr Index kMaxFullDim = Index{1} << 26;

/// Returns n' when d = 2^{n'}, or -1 when d is not a power of two.
inline int log2_exact(Index d) {
  if (d < 1 || (d & (d - 1)) != 0) return -1;
  int n = 0;
  while ((Index{1} << n) < d) ++n;
  return n;
}

/// Hilbert-space layout of target qubit, d-level scratch qudit and m reset
/// qubits in contact with a bath of polarization eps_b.
///
/// Basis ordering is fixed: the target qubit is the most significant
/// subsystem, then the scratch qudit, then the reset qubits with reset qubit 1
/// as the least significant bit. A full-system index therefore decomposes as
/// `(target * d + scratch) * 2^m + resets`.
template <std::floating_point Scalar>
class BasicConfig {
 public:
  BasicConfig(Index scratch_dim, Index resets, Scalar eps_b)
      : d_(scratch_dim), m_(resets), eps_b_(eps_b) {
    if (d_ < 1) throw std::invalid_argument("scratch dimension d must be >= 1");
    if (m_ < 1) throw std::invalid_argument("reset count m must be >= 1");
    if (!(eps_b_ >= Scalar(0) && eps_b_ < Scalar(1)))
      throw std::invalid_argument("bath polarization must lie in [0, 1), got " +
                                  std::to_string(static_cast<double>(eps_b)));
    if (m_ > 24 || 2 * d_ > kMaxFullDim / (Index{1} << m_))
      throw std::invalid_argument("system too large: 2*d*2^m exceeds " +
                                  std::to_string(kMaxFullDim));
    reset_dim_ = Index{1} << m_;
    full_dim_ = 2 * d_ * reset_dim_;
  }

  Index d() const { return d_; }
  Index m() const { return m_; }
  Scalar eps_b() const { return eps_b_; }

  /// 2^m, the size of one block of reset-qubit states.
  Index reset_dim() const { return reset_dim_; }
  /// 2d, target qubit times scratch qudit.
  Index computational_dim() const { return 2 * d_; }
  /// D = 2 d 2^m.
  Index full_dim() const { return full_dim_; }

  /// Number of scratch qubits when d = 2^{n'}, otherwise -1.
  int scratch_qubits() const { return log2_exact(d_); }

  template <std::floating_point Other>
  BasicConfig<Other> cast() const {
    return BasicConfig<Other>(d_, m_, static_cast<Other>(eps_b_));
  }

 private:
  Index d_;
  Index m_;
  Scalar eps_b_;
  Index reset_dim_ = 0;
  Index full_dim_ = 0;
};

using SystemConfig = BasicConfig<double>;

}  // namespace hbac
