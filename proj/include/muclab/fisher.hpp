// Copyright 2026 The muclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "muclab/channel.hpp"
#include "muclab/linalg.hpp"
#include "muclab/povm.hpp"

namespace muclab {

/// Fisher information on the simplex tangent space: symmetric, PSD, and
/// annihilating the all-ones vector.
class FisherMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-9;
  static constexpr double kPsdTolerance = 1e-8;
  static constexpr double kOnesTolerance = 1e-8;

  explicit FisherMatrix(RealMatrix m);

  const RealMatrix& matrix() const { return m_; }
  std::size_t r() const { return static_cast<std::size_t>(m_.rows()); }
  double trace() const { return m_.trace(); }

 private:
  RealMatrix m_;
};

/// d theta^{(x)k} / d theta, an r^k x r matrix in flat-index row order.
class TensorJacobian {
 public:
  TensorJacobian(std::size_t r, std::size_t k, RealMatrix m);

  std::size_t r() const { return r_; }
  std::size_t k() const { return k_; }
  const RealMatrix& matrix() const { return m_; }
  /// Largest singular value squared.
  double spectral_norm_squared() const;

 private:
  std::size_t r_;
  std::size_t k_;
  RealMatrix m_;
};

struct BoundReport {
  double trace_fisher = 0.0;
  double bound = 0.0;
  bool satisfied = false;
  double slack = 0.0;
};

/// p = K theta.
RealVector outcome_distribution(const OverlapMatrix& k, const ProbabilityVector& theta);

/// Orthogonal projector onto {v : 1^T v = 0}, i.e. I - (1/r) 1 1^T.
RealMatrix simplex_projector(std::size_t r);

/// Outcomes with p_i below this are dropped when their K-row is zero.
inline constexpr double kZeroProbability = 1e-14;

/// K^T D(p)^-1 K without the tangent-space projection.
RealMatrix unprojected_fisher(const OverlapMatrix& k, const ProbabilityVector& theta);

/// P_s K^T D(p)^-1 K P_s with p = K theta.
FisherMatrix fisher_matrix(const OverlapMatrix& k, const ProbabilityVector& theta);

TensorJacobian tensor_jacobian(const ProbabilityVector& theta, std::size_t k,
                               std::optional<std::size_t> cap = std::nullopt);

/// Fisher information of the k-fold concatenating protocol with respect to the
/// single-use weights: P_s J^T I~(theta^{(x)k}) J P_s, where I~ is the
/// projected Fisher matrix of the effective channel measured with `povm` on
/// the orbit of `probe`. Without a probe the maximally entangled state on
/// C^d (x) C^d is used.
FisherMatrix fisher_concat(const MixedUnitaryChannel& channel,
                           std::span<const UnitaryMatrix> intermediates, const Povm& povm,
                           const ProbabilityVector& theta,
                           const std::optional<DensityOperator>& probe = std::nullopt);

/// Checks Tr I(u) <= k^2 r d (k = 1 gives r d); satisfied iff slack >= -1e-6 bound.
BoundReport audit_trace_bound(const FisherMatrix& fisher, std::size_t r, std::size_t d,
                              std::size_t k);

/// Reference-scale sample count with unit constant: r^2 / (trace * eps^2)
/// when the Fisher trace is given, otherwise r / (k d eps^2).
double van_trees_lower_bound(std::size_t r, std::size_t d, std::size_t k, double epsilon,
                             std::optional<double> trace_fisher = std::nullopt);

}  // namespace muclab
