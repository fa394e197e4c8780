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
#include <vector>

#include "muclab/linalg.hpp"

namespace muclab {

/// Weights on the probability simplex: non-negative, summing to 1 within 1e-12.
class ProbabilityVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ProbabilityVector(RealVector weights);
  static ProbabilityVector uniform(std::size_t r);
  /// Dirichlet(1, ..., 1), i.e. uniform on the simplex.
  static ProbabilityVector dirichlet(std::size_t r, Rng& rng);

  const RealVector& weights() const { return w_; }
  std::size_t size() const { return static_cast<std::size_t>(w_.size()); }
  double operator[](std::size_t i) const { return w_(static_cast<Eigen::Index>(i)); }

 private:
  RealVector w_;
};

/// Lambda(rho) = sum_a theta_a U_a rho U_a^dag with known unitaries and weights theta.
class MixedUnitaryChannel {
 public:
  MixedUnitaryChannel(std::vector<UnitaryMatrix> unitaries, ProbabilityVector theta);

  std::size_t d_channel() const { return unitaries_.front().dim(); }
  std::size_t rank() const { return unitaries_.size(); }
  const std::vector<UnitaryMatrix>& unitaries() const { return unitaries_; }
  const ProbabilityVector& theta() const { return theta_; }

  MixedUnitaryChannel with_theta(ProbabilityVector theta) const;

 private:
  std::vector<UnitaryMatrix> unitaries_;
  ProbabilityVector theta_;
};

/// r independent Haar unitaries of dimension d_channel.
MixedUnitaryChannel haar_channel(std::size_t d_channel, std::size_t r, ProbabilityVector theta,
                                 Rng& rng);

DensityOperator apply(const MixedUnitaryChannel& channel, const DensityOperator& rho);

/// (Lambda (x) id)(rho), with the channel acting on the first tensor factor.
DensityOperator apply_with_ancilla(const MixedUnitaryChannel& channel, const DensityOperator& rho);

/// Default cap on r^k; MUCLAB_RANK_CAP overrides it.
inline constexpr std::size_t kDefaultRankCap = 4096;
std::size_t rank_cap();

/// r^k, or ResourceLimit if it exceeds `cap`.
std::size_t checked_rank_power(std::size_t r, std::size_t k, std::size_t cap);

/// Flat index of the tuple (a_1, ..., a_k): sum_i a_i r^(k-i), a_1 most significant.
std::size_t flat_index(std::span<const std::size_t> tuple, std::size_t r);
std::vector<std::size_t> index_tuple(std::size_t flat, std::size_t r, std::size_t k);

/// theta^{(x)k} in flat-index order.
RealVector tensor_power(const RealVector& theta, std::size_t k);

/// The rank r^k channel equivalent to k uses of `channel`, each followed by
/// the matching intermediate unitary: U~_{a1..ak} = V_k U_ak ... V_1 U_a1.
MixedUnitaryChannel concat_effective(const MixedUnitaryChannel& channel,
                                     std::span<const UnitaryMatrix> intermediates,
                                     std::optional<std::size_t> cap = std::nullopt);

/// k-fold concatenation with identity intermediates.
MixedUnitaryChannel concat_effective(const MixedUnitaryChannel& channel, std::size_t k,
                                     std::optional<std::size_t> cap = std::nullopt);

}  // namespace muclab
