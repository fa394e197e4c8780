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
#include <vector>

#include "muclab/channel.hpp"
#include "muclab/linalg.hpp"

namespace muclab {

/// A complete POVM. The optional completion effect is an extra, final outcome
/// (for a PGM it is the kernel projector of the ensemble average).
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> effects,
                std::optional<ComplexMatrix> completion = std::nullopt);

  /// Rank-one projective measurement onto the columns of `basis`.
  static Povm projective(const UnitaryMatrix& basis);

  std::size_t dim() const { return static_cast<std::size_t>(effects_.front().rows()); }
  const std::vector<ComplexMatrix>& effects() const { return effects_; }
  const std::optional<ComplexMatrix>& completion() const { return completion_; }
  bool has_completion() const { return completion_.has_value(); }

  /// Number of outcomes including the completion outcome.
  std::size_t outcome_count() const { return effects_.size() + (completion_ ? 1 : 0); }
  /// Effect of outcome i; the completion effect is last.
  const ComplexMatrix& effect(std::size_t i) const;

 private:
  std::vector<ComplexMatrix> effects_;
  std::optional<ComplexMatrix> completion_;
};

/// States rho_1..rho_r of equal dimension.
class Ensemble {
 public:
  explicit Ensemble(std::vector<DensityOperator> states);

  const std::vector<DensityOperator>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  std::size_t dim() const { return states_.front().dim(); }

 private:
  std::vector<DensityOperator> states_;
};

/// K_ij = Tr(E_i rho_j). When built from a POVM with a completion effect,
/// the completion row is last.
class OverlapMatrix {
 public:
  static constexpr double kNegativeTolerance = 1e-12;
  static constexpr double kColumnSumTolerance = 1e-8;
  static constexpr double kZeroRowNorm = 1e-12;

  explicit OverlapMatrix(RealMatrix k, bool has_completion_row = false);

  const RealMatrix& matrix() const { return k_; }
  std::size_t rows() const { return static_cast<std::size_t>(k_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(k_.cols()); }
  bool has_completion_row() const { return completion_row_; }

  /// Rows of K that are not numerically zero, together with their indices.
  struct Reduced {
    RealMatrix k;
    std::vector<std::size_t> kept_rows;
  };
  Reduced without_zero_rows() const;

  /// The block of outcomes other than the completion outcome.
  RealMatrix effect_block() const;

 private:
  RealMatrix k_;
  bool completion_row_;
};

/// Pretty Good Measurement for the uniform mixture sigma = (1/r) sum rho_i:
/// E_i = sigma^-1/2 (rho_i / r) sigma^-1/2, plus completion I - sum E_i.
Povm pgm(const Ensemble& ensemble, std::optional<double> cutoff = std::nullopt);

/// rho_i = (U_i (x) I) rho (U_i (x) I)^dag for a probe on C^d_channel (x) C^d_ancilla.
Ensemble orbit_ensemble(const MixedUnitaryChannel& channel, const DensityOperator& probe);

/// Orbit ensemble of the maximally entangled probe on C^d (x) C^d.
Ensemble unitary_orbit_ensemble(const MixedUnitaryChannel& channel);

OverlapMatrix overlap_matrix(const Povm& povm, const Ensemble& ensemble);

/// Born probabilities Tr(E_i rho) over all outcomes, completion last.
RealVector born_probabilities(const DensityOperator& rho, const Povm& povm);

std::size_t born_sample(const DensityOperator& rho, const Povm& povm, Rng& rng);

/// Random POVM with `outcomes` outcomes. For outcomes >= dim the effects are
/// rank one, built from a Haar isometry; otherwise they are projectors onto
/// groups of columns of a Haar unitary.
Povm random_povm(std::size_t dim, std::size_t outcomes, Rng& rng);

/// sum_i max_j K_ij.
double row_max_sum(const OverlapMatrix& k);

}  // namespace muclab
