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

#include "muclab/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "muclab/errors.hpp"
#include "muclab/fisher.hpp"
#include "muclab/parallel.hpp"

namespace muclab {

PgmEstimator::PgmEstimator(const MixedUnitaryChannel& channel, EstimatorOptions options)
    : channel_(channel),
      options_(options),
      ensemble_(unitary_orbit_ensemble(channel)),
      povm_(pgm(ensemble_)),
      overlap_(overlap_matrix(povm_, ensemble_)),
      reduced_(overlap_.without_zero_rows()) {
  if (!(options_.pseudo_inverse_cutoff > 0.0)) {
    throw InvalidArgument("EstimatorOptions: pseudo_inverse_cutoff must be > 0");
  }
  Eigen::JacobiSVD<RealMatrix> svd(reduced_.k, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  double threshold = options_.pseudo_inverse_cutoff * smax;
  RealVector inv(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > threshold ? 1.0 / sv(i) : 0.0;
  pinv_ = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  double smin = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
  // A K with fewer informative rows than columns is rank deficient.
  if (reduced_.k.rows() < reduced_.k.cols()) smin = 0.0;
  condition_ = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
}

RealVector PgmEstimator::outcome_probabilities(const ProbabilityVector& theta) const {
  if (theta.size() != channel_.rank()) {
    throw DimensionMismatch("PgmEstimator: theta length differs from channel rank");
  }
  if (options_.sampling_path == SamplingPath::kFullBorn) {
    DensityOperator probe = max_entangled_state(channel_.d_channel()).density();
    DensityOperator out = apply_with_ancilla(channel_.with_theta(theta), probe);
    return born_probabilities(out, povm_);
  }
  RealVector p = outcome_distribution(overlap_, theta);
  return p / p.sum();
}

RealVector PgmEstimator::solve(std::span<const std::uint64_t> counts, std::uint64_t n) const {
  if (counts.size() != overlap_.rows()) {
    throw DimensionMismatch("PgmEstimator::solve: counts length differs from outcome count");
  }
  if (n == 0) throw InvalidArgument("PgmEstimator::solve: N must be >= 1");
  // The simplex has a single point when r = 1.
  if (channel_.rank() == 1) return RealVector::Ones(1);
  RealVector p_hat(static_cast<Eigen::Index>(reduced_.kept_rows.size()));
  for (std::size_t i = 0; i < reduced_.kept_rows.size(); ++i) {
    p_hat(static_cast<Eigen::Index>(i)) =
        static_cast<double>(counts[reduced_.kept_rows[i]]) / static_cast<double>(n);
  }
  return pinv_ * p_hat;
}

EstimateResult PgmEstimator::run(const ProbabilityVector& theta, std::uint64_t n,
                                 std::uint64_t seed) const {
  if (n == 0) throw InvalidArgument("run_pgm_estimator: N must be >= 1");
  Rng rng(seed);
  EstimateResult res;
  res.n = n;
  res.seed = seed;
  res.counts = sample_counts(outcome_probabilities(theta), n, rng);
  res.theta_hat = solve(res.counts, n);
  if (options_.project_to_simplex) res.theta_projected = project_to_simplex(res.theta_hat);
  res.squared_error = (res.theta_hat - theta.weights()).squaredNorm();
  res.condition_number = condition_;
  if (condition_ > kIllConditionedK) {
    res.warning = "ill-conditioned K (condition number " + std::to_string(condition_) +
                  "); estimate uses the pseudoinverse";
  }
  return res;
}

EstimateResult run_pgm_estimator(const MixedUnitaryChannel& channel, std::uint64_t n,
                                 const EstimatorOptions& options, std::uint64_t seed) {
  return PgmEstimator(channel, options).run(channel.theta(), n, seed);
}

RealVector project_to_simplex(const RealVector& v) {
  if (v.size() == 0) throw InvalidDimension("project_to_simplex: empty vector");
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  return (v.array() - tau).cwiseMax(0.0).matrix();
}

std::vector<std::uint64_t> sample_counts(const RealVector& p, std::uint64_t n, Rng& rng) {
  // Multinomial draw as a chain of conditional binomials.
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(p.size()), 0);
  std::uint64_t remaining = n;
  double mass_left = 1.0;
  for (Eigen::Index i = 0; i < p.size() && remaining > 0; ++i) {
    if (i + 1 == p.size()) {
      counts[static_cast<std::size_t>(i)] = remaining;
      break;
    }
    double q = mass_left > 0.0 ? std::clamp(p(i) / mass_left, 0.0, 1.0) : 0.0;
    std::uint64_t c = 0;
    if (q >= 1.0) {
      c = remaining;
    } else if (q > 0.0) {
      std::binomial_distribution<std::uint64_t> binom(remaining, q);
      c = binom(rng);
    }
    counts[static_cast<std::size_t>(i)] = c;
    remaining -= c;
    mass_left -= p(i);
  }
  return counts;
}

std::uint64_t trial_seed(std::uint64_t root_seed, std::size_t trial, std::size_t n_index) {
  return derive_seed(root_seed, {static_cast<std::uint64_t>(trial),
                                 static_cast<std::uint64_t>(n_index)});
}

std::vector<MseRecord> mse_curve(const MixedUnitaryChannel& channel,
                                 std::span<const std::uint64_t> n_values, std::size_t trials,
                                 const EstimatorOptions& options, std::uint64_t root_seed,
                                 unsigned threads) {
  if (trials == 0) throw InvalidArgument("mse_curve: trials must be >= 1");
  PgmEstimator estimator(channel, options);
  std::vector<MseRecord> records(n_values.size() * trials);
  parallel_for(records.size(), threads, [&](std::size_t idx) {
    std::size_t ni = idx / trials;
    std::size_t t = idx % trials;
    MseRecord rec;
    rec.n = n_values[ni];
    rec.n_index = ni;
    rec.trial = t;
    rec.seed = trial_seed(root_seed, t, ni);
    rec.sq_error = *estimator.run(channel.theta(), rec.n, rec.seed).squared_error;
    records[idx] = rec;
  });
  return records;
}

std::vector<MsePoint> summarize_mse(std::span<const MseRecord> records) {
  std::vector<MsePoint> points;
  for (const auto& rec : records) {
    if (rec.n_index >= points.size()) points.resize(rec.n_index + 1);
    points[rec.n_index].n = rec.n;
  }
  std::vector<double> sums(points.size(), 0.0), sq_sums(points.size(), 0.0);
  for (const auto& rec : records) {
    points[rec.n_index].trials += 1;
    sums[rec.n_index] += rec.sq_error;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].trials > 0) points[i].mean = sums[i] / static_cast<double>(points[i].trials);
  }
  for (const auto& rec : records) {
    double dev = rec.sq_error - points[rec.n_index].mean;
    sq_sums[rec.n_index] += dev * dev;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto t = static_cast<double>(points[i].trials);
    if (points[i].trials > 1) points[i].std_error = std::sqrt(sq_sums[i] / (t - 1.0) / t);
  }
  return points;
}

double loglog_slope(std::span<const MsePoint> points) {
  if (points.size() < 2) throw InvalidArgument("loglog_slope: need at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += std::log(static_cast<double>(p.n));
    my += std::log(p.mean);
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : points) {
    double dx = std::log(static_cast<double>(p.n)) - mx;
    sxy += dx * (std::log(p.mean) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double predicted_mse(const PgmEstimator& estimator, const ProbabilityVector& theta,
                     std::uint64_t n) {
  RealVector p_all = outcome_distribution(estimator.overlap(), theta);
  const auto& kept = estimator.kept_rows();
  RealVector p(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) p(static_cast<Eigen::Index>(i)) = p_all(kept[i]);
  RealMatrix cov = RealMatrix(p.asDiagonal()) - p * p.transpose();
  cov /= static_cast<double>(n);
  const RealMatrix& pinv = estimator.pseudo_inverse();
  return (pinv * cov * pinv.transpose()).trace();
}

double gerschgorin_lower_bound(const RealMatrix& k) {
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    double off = k.row(i).cwiseAbs().sum() - std::abs(k(i, i));
    lo = std::min(lo, k(i, i) - off);
  }
  return lo;
}

DiagonalSummary min_diagonal_experiment(std::size_t d_channel, std::size_t r, std::size_t trials,
                                        std::uint64_t root_seed, unsigned threads) {
  if (d_channel == 0 || r == 0) throw InvalidDimension("min_diagonal_experiment: empty problem");
  if (r > d_channel * d_channel) {
    throw InvalidArgument("min_diagonal_experiment: r = " + std::to_string(r) +
                          " exceeds d_channel^2 = " + std::to_string(d_channel * d_channel));
  }
  if (trials == 0) throw InvalidArgument("min_diagonal_experiment: trials must be >= 1");

  DiagonalSummary out;
  out.d_channel = d_channel;
  out.r = r;
  out.trials.resize(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    DiagonalTrial tr;
    tr.trial = t;
    tr.seed = trial_seed(root_seed, t, 0);
    Rng rng(tr.seed);
    MixedUnitaryChannel channel = haar_channel(d_channel, r, ProbabilityVector::uniform(r), rng);
    Ensemble ens = unitary_orbit_ensemble(channel);
    OverlapMatrix k = overlap_matrix(pgm(ens), ens);
    // The completion row has zero overlap with every orbit state.
    RealMatrix block = k.effect_block();
    RealVector diag = block.diagonal();
    tr.min_kii = diag.minCoeff();
    tr.mean_kii = diag.mean();
    RealMatrix sym = 0.5 * (block + block.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym, Eigen::EigenvaluesOnly);
    tr.lambda_min_k = es.eigenvalues().minCoeff();
    out.trials[t] = tr;
  });

  double sum = 0.0;
  std::size_t above = 0;
  for (const auto& tr : out.trials) {
    sum += tr.mean_kii;
    if (tr.min_kii >= kDiagonalThreshold) {
      ++above;
      ++out.gerschgorin_checked;
      if (tr.lambda_min_k < kEigenvalueFloor - 1e-8) ++out.gerschgorin_violations;
    }
  }
  auto n = static_cast<double>(trials);
  out.fraction_min_kii_above = static_cast<double>(above) / n;
  out.mean_of_mean_kii = sum / n;
  if (trials > 1) {
    double ss = 0.0;
    for (const auto& tr : out.trials) {
      ss += (tr.mean_kii - out.mean_of_mean_kii) * (tr.mean_kii - out.mean_of_mean_kii);
    }
    out.std_error_mean_kii = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace muclab
