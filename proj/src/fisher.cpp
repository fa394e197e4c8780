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

#include "muclab/fisher.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "muclab/errors.hpp"

namespace muclab {

FisherMatrix::FisherMatrix(RealMatrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw InvalidDimension("FisherMatrix: expected a non-empty square matrix");
  }
  if (!m_.allFinite()) throw InvalidArgument("FisherMatrix: non-finite entry");
  double scale = std::max(1.0, m_.norm());
  if ((m_ - m_.transpose()).norm() > kSymmetryTolerance * scale) {
    throw InvalidArgument("FisherMatrix: not symmetric");
  }
  m_ = 0.5 * (m_ + m_.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTolerance * scale) {
    throw InvalidArgument("FisherMatrix: not positive semidefinite");
  }
  if ((m_ * RealVector::Ones(m_.rows())).norm() > kOnesTolerance * scale) {
    throw InvalidArgument("FisherMatrix: does not annihilate the all-ones direction");
  }
}

TensorJacobian::TensorJacobian(std::size_t r, std::size_t k, RealMatrix m)
    : r_(r), k_(k), m_(std::move(m)) {
  if (static_cast<std::size_t>(m_.cols()) != r_) {
    throw DimensionMismatch("TensorJacobian: column count differs from r");
  }
}

double TensorJacobian::spectral_norm_squared() const {
  RealMatrix gram = m_.transpose() * m_;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

RealVector outcome_distribution(const OverlapMatrix& k, const ProbabilityVector& theta) {
  if (k.cols() != theta.size()) {
    throw DimensionMismatch("outcome_distribution: K has " + std::to_string(k.cols()) +
                            " columns but theta has length " + std::to_string(theta.size()));
  }
  RealVector p = k.matrix() * theta.weights();
  return p.cwiseMax(0.0);
}

RealMatrix simplex_projector(std::size_t r) {
  if (r == 0) throw InvalidDimension("simplex_projector: r must be >= 1");
  auto n = static_cast<Eigen::Index>(r);
  return RealMatrix::Identity(n, n) - RealMatrix::Constant(n, n, 1.0 / static_cast<double>(r));
}

RealMatrix unprojected_fisher(const OverlapMatrix& k, const ProbabilityVector& theta) {
  RealVector p = outcome_distribution(k, theta);
  const RealMatrix& km = k.matrix();
  auto r = km.cols();
  RealMatrix full = RealMatrix::Zero(r, r);
  for (Eigen::Index i = 0; i < km.rows(); ++i) {
    double row_norm = km.row(i).norm();
    if (p(i) < kZeroProbability) {
      if (row_norm < OverlapMatrix::kZeroRowNorm) continue;
      throw SingularOutcome("fisher_matrix: outcome " + std::to_string(i) +
                            " has zero probability but a nonzero K-row; theta is on the "
                            "simplex boundary where the Fisher information diverges");
    }
    full.noalias() += km.row(i).transpose() * km.row(i) / p(i);
  }
  return 0.5 * (full + full.transpose());
}

FisherMatrix fisher_matrix(const OverlapMatrix& k, const ProbabilityVector& theta) {
  RealMatrix ps = simplex_projector(theta.size());
  RealMatrix projected = ps * unprojected_fisher(k, theta) * ps;
  return FisherMatrix(0.5 * (projected + projected.transpose()));
}

TensorJacobian tensor_jacobian(const ProbabilityVector& theta, std::size_t k,
                               std::optional<std::size_t> cap) {
  std::size_t r = theta.size();
  std::size_t rows = checked_rank_power(r, k, cap.value_or(rank_cap()));
  RealMatrix jac = RealMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(r));
  for (std::size_t a = 0; a < rows; ++a) {
    std::vector<std::size_t> tuple = index_tuple(a, r, k);
    for (std::size_t i = 0; i < k; ++i) {
      double prod = 1.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (j != i) prod *= theta[tuple[j]];
      }
      jac(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(tuple[i])) += prod;
    }
  }
  return TensorJacobian(r, k, std::move(jac));
}

FisherMatrix fisher_concat(const MixedUnitaryChannel& channel,
                           std::span<const UnitaryMatrix> intermediates, const Povm& povm,
                           const ProbabilityVector& theta,
                           const std::optional<DensityOperator>& probe) {
  if (theta.size() != channel.rank()) {
    throw DimensionMismatch("fisher_concat: theta length differs from channel rank");
  }
  std::size_t k = intermediates.size();
  MixedUnitaryChannel effective = concat_effective(channel, intermediates);
  DensityOperator state = probe ? *probe : max_entangled_state(channel.d_channel()).density();
  if (povm.dim() != state.dim()) {
    throw DimensionMismatch("fisher_concat: POVM dim differs from probe dim");
  }
  OverlapMatrix k_eff = overlap_matrix(povm, orbit_ensemble(effective, state));
  ProbabilityVector theta_eff(tensor_power(theta.weights(), k));
  FisherMatrix inner = fisher_matrix(k_eff, theta_eff);
  TensorJacobian jac = tensor_jacobian(theta, k);
  RealMatrix ps = simplex_projector(theta.size());
  RealMatrix outer = ps * jac.matrix().transpose() * inner.matrix() * jac.matrix() * ps;
  return FisherMatrix(0.5 * (outer + outer.transpose()));
}

BoundReport audit_trace_bound(const FisherMatrix& fisher, std::size_t r, std::size_t d,
                              std::size_t k) {
  BoundReport rep;
  rep.trace_fisher = fisher.trace();
  rep.bound = static_cast<double>(k * k * r * d);
  rep.slack = rep.bound - rep.trace_fisher;
  rep.satisfied = rep.slack >= -1e-6 * rep.bound;
  return rep;
}

double van_trees_lower_bound(std::size_t r, std::size_t d, std::size_t k, double epsilon,
                             std::optional<double> trace_fisher) {
  if (!(epsilon > 0.0)) throw InvalidArgument("van_trees_lower_bound: epsilon must be > 0");
  double eps2 = epsilon * epsilon;
  auto rd = static_cast<double>(r);
  if (trace_fisher) {
    if (!(*trace_fisher > 0.0)) {
      throw InvalidArgument("van_trees_lower_bound: trace_fisher must be > 0");
    }
    return rd * rd / (*trace_fisher * eps2);
  }
  if (d == 0 || k == 0) throw InvalidArgument("van_trees_lower_bound: d and k must be >= 1");
  return rd / (static_cast<double>(k) * static_cast<double>(d) * eps2);
}

}  // namespace muclab
