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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "muclab/channel.hpp"
#include "muclab/linalg.hpp"
#include "muclab/povm.hpp"

namespace muclab {

enum class SamplingPath {
  /// Draw outcomes from p = K theta after K is computed once.
  kCategoricalFromK,
  /// Simulate (Lambda (x) id)(|psi><psi|) and take Born probabilities of the PGM.
  kFullBorn,
};

struct EstimatorOptions {
  /// Singular values at or below cutoff * sigma_max are discarded in K^+.
  double pseudo_inverse_cutoff = 1e-10;
  bool project_to_simplex = false;
  SamplingPath sampling_path = SamplingPath::kCategoricalFromK;
};

/// Condition numbers of K above this attach a warning to the result.
inline constexpr double kIllConditionedK = 1e8;

struct EstimateResult {
  RealVector theta_hat;
  /// Euclidean projection of theta_hat onto the simplex, when requested.
  std::optional<RealVector> theta_projected;
  /// Counts per POVM outcome, completion outcome last.
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::optional<double> squared_error;
  double condition_number = 1.0;
  std::optional<std::string> warning;
};

/// The PGM-based estimator for a mixed unitary channel with known unitaries:
/// maximally entangled probe, PGM on the orbit ensemble, and the linear
/// inversion theta~ = K^+ p^. The POVM and K are built once per channel.
class PgmEstimator {
 public:
  PgmEstimator(const MixedUnitaryChannel& channel, EstimatorOptions options = {});

  const Povm& povm() const { return povm_; }
  const OverlapMatrix& overlap() const { return overlap_; }
  /// K with zero rows (the completion outcome) removed.
  const RealMatrix& reduced_overlap() const { return reduced_.k; }
  const std::vector<std::size_t>& kept_rows() const { return reduced_.kept_rows; }
  const RealMatrix& pseudo_inverse() const { return pinv_; }
  double condition_number() const { return condition_; }
  const EstimatorOptions& options() const { return options_; }

  /// Outcome probabilities for true weights `theta` under the configured path.
  RealVector outcome_probabilities(const ProbabilityVector& theta) const;

  /// Draws N outcomes from the channel with weights `theta` using a stream
  /// seeded by `seed`, then estimates. squared_error is filled in.
  EstimateResult run(const ProbabilityVector& theta, std::uint64_t n, std::uint64_t seed) const;

  /// K^+ p^ for counts over all POVM outcomes.
  RealVector solve(std::span<const std::uint64_t> counts, std::uint64_t n) const;

 private:
  MixedUnitaryChannel channel_;
  EstimatorOptions options_;
  Ensemble ensemble_;
  Povm povm_;
  OverlapMatrix overlap_;
  OverlapMatrix::Reduced reduced_;
  RealMatrix pinv_;
  double condition_ = 1.0;
};

/// Runs the estimator once against the channel's own weights.
EstimateResult run_pgm_estimator(const MixedUnitaryChannel& channel, std::uint64_t n,
                                 const EstimatorOptions& options, std::uint64_t seed);

/// Euclidean projection onto the probability simplex.
RealVector project_to_simplex(const RealVector& v);

/// Multinomial counts of n draws from p.
std::vector<std::uint64_t> sample_counts(const RealVector& p, std::uint64_t n, Rng& rng);

struct MseRecord {
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  std::size_t n_index = 0;
  std::size_t trial = 0;
  double sq_error = 0.0;
};

struct MsePoint {
  std::uint64_t n = 0;
  std::size_t trials = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Seed of trial `trial` at sweep position `n_index`.
std::uint64_t trial_seed(std::uint64_t root_seed, std::size_t trial, std::size_t n_index);

/// Squared error of the estimator for every (N, trial) pair, ordered by N
/// index then trial. The channel's weights are the ground truth.
std::vector<MseRecord> mse_curve(const MixedUnitaryChannel& channel,
                                 std::span<const std::uint64_t> n_values, std::size_t trials,
                                 const EstimatorOptions& options, std::uint64_t root_seed,
                                 unsigned threads = 1);

std::vector<MsePoint> summarize_mse(std::span<const MseRecord> records);

/// Least-squares slope of log(mean MSE) against log(N).
double loglog_slope(std::span<const MsePoint> points);

/// Exact E||theta~ - theta||^2 of the linear estimator at sample size n:
/// Tr(K^+ Cov(p^) K^+T) with Cov(p^) = (diag(p) - p p^T) / n.
double predicted_mse(const PgmEstimator& estimator, const ProbabilityVector& theta,
                     std::uint64_t n);

/// min_i (K_ii - sum_{j != i} |K_ij|), a lower bound on every eigenvalue of a
/// symmetric K.
double gerschgorin_lower_bound(const RealMatrix& k);

struct DiagonalTrial {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double min_kii = 0.0;
  double mean_kii = 0.0;
  double lambda_min_k = 0.0;
};

struct DiagonalSummary {
  std::size_t d_channel = 0;
  std::size_t r = 0;
  std::vector<DiagonalTrial> trials;
  /// Fraction of trials with min_i K_ii >= 0.7.
  double fraction_min_kii_above = 0.0;
  double mean_of_mean_kii = 0.0;
  double std_error_mean_kii = 0.0;
  /// Trials with min_i K_ii >= 0.7 whose lambda_min(K) fell below 0.4 - 1e-8.
  std::size_t gerschgorin_checked = 0;
  std::size_t gerschgorin_violations = 0;
};

inline constexpr double kDiagonalThreshold = 0.7;
inline constexpr double kEigenvalueFloor = 0.4;

/// Haar ensembles of r unitaries in dimension d_channel: per trial the PGM
/// overlap matrix K, its smallest diagonal entry, mean diagonal and smallest
/// eigenvalue. Requires r <= d_channel^2.
DiagonalSummary min_diagonal_experiment(std::size_t d_channel, std::size_t r, std::size_t trials,
                                        std::uint64_t root_seed, unsigned threads = 1);

}  // namespace muclab
