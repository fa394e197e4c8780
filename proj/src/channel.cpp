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

#include "muclab/channel.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "muclab/errors.hpp"

namespace muclab {

ProbabilityVector::ProbabilityVector(RealVector weights) : w_(std::move(weights)) {
  if (w_.size() == 0) throw InvalidDimension("ProbabilityVector: empty");
  if (!w_.allFinite()) throw InvalidArgument("ProbabilityVector: non-finite weight");
  if (w_.minCoeff() < 0.0) throw InvalidArgument("ProbabilityVector: negative weight");
  if (std::abs(w_.sum() - 1.0) > kSumTolerance) {
    throw InvalidArgument("ProbabilityVector: weights sum to " + std::to_string(w_.sum()));
  }
}

ProbabilityVector ProbabilityVector::uniform(std::size_t r) {
  if (r == 0) throw InvalidDimension("ProbabilityVector::uniform: r must be >= 1");
  auto n = static_cast<Eigen::Index>(r);
  return ProbabilityVector(RealVector::Constant(n, 1.0 / static_cast<double>(r)));
}

ProbabilityVector ProbabilityVector::dirichlet(std::size_t r, Rng& rng) {
  if (r == 0) throw InvalidDimension("ProbabilityVector::dirichlet: r must be >= 1");
  std::exponential_distribution<double> expo(1.0);
  RealVector w(static_cast<Eigen::Index>(r));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = expo(rng);
  w /= w.sum();
  return ProbabilityVector(std::move(w));
}

MixedUnitaryChannel::MixedUnitaryChannel(std::vector<UnitaryMatrix> unitaries,
                                         ProbabilityVector theta)
    : unitaries_(std::move(unitaries)), theta_(std::move(theta)) {
  if (unitaries_.empty()) throw InvalidDimension("MixedUnitaryChannel: rank must be >= 1");
  for (const auto& u : unitaries_) {
    if (u.dim() != unitaries_.front().dim()) {
      throw DimensionMismatch("MixedUnitaryChannel: unitaries have different dimensions");
    }
  }
  if (theta_.size() != unitaries_.size()) {
    throw DimensionMismatch("MixedUnitaryChannel: theta length " + std::to_string(theta_.size()) +
                            " != rank " + std::to_string(unitaries_.size()));
  }
}

MixedUnitaryChannel MixedUnitaryChannel::with_theta(ProbabilityVector theta) const {
  return MixedUnitaryChannel(unitaries_, std::move(theta));
}

MixedUnitaryChannel haar_channel(std::size_t d_channel, std::size_t r, ProbabilityVector theta,
                                 Rng& rng) {
  std::vector<UnitaryMatrix> us;
  us.reserve(r);
  for (std::size_t a = 0; a < r; ++a) us.push_back(haar_unitary(d_channel, rng));
  return MixedUnitaryChannel(std::move(us), std::move(theta));
}

namespace {

ComplexMatrix mix(const MixedUnitaryChannel& channel, const ComplexMatrix& rho,
                  std::size_t d_ancilla) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  auto da = static_cast<Eigen::Index>(d_ancilla);
  for (std::size_t a = 0; a < channel.rank(); ++a) {
    double w = channel.theta()[a];
    if (w == 0.0) continue;
    const ComplexMatrix& u = channel.unitaries()[a].matrix();
    ComplexMatrix ua = d_ancilla == 1 ? u : kron(u, ComplexMatrix::Identity(da, da));
    out.noalias() += w * (ua * rho * ua.adjoint());
  }
  // Restore exact Hermiticity lost to rounding.
  return 0.5 * (out + out.adjoint());
}

}  // namespace

DensityOperator apply(const MixedUnitaryChannel& channel, const DensityOperator& rho) {
  if (rho.dim() != channel.d_channel()) {
    throw DimensionMismatch("apply: state dim " + std::to_string(rho.dim()) +
                            " != channel dim " + std::to_string(channel.d_channel()));
  }
  return DensityOperator(mix(channel, rho.matrix(), 1));
}

DensityOperator apply_with_ancilla(const MixedUnitaryChannel& channel, const DensityOperator& rho) {
  std::size_t dc = channel.d_channel();
  if (rho.dim() % dc != 0) {
    throw DimensionMismatch("apply_with_ancilla: state dim " + std::to_string(rho.dim()) +
                            " is not a multiple of channel dim " + std::to_string(dc));
  }
  return DensityOperator(mix(channel, rho.matrix(), rho.dim() / dc));
}

std::size_t rank_cap() {
  if (const char* env = std::getenv("MUCLAB_RANK_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultRankCap;
}

std::size_t checked_rank_power(std::size_t r, std::size_t k, std::size_t cap) {
  if (r == 0) throw InvalidDimension("rank must be >= 1");
  if (k == 0) throw InvalidArgument("concatenation depth k must be >= 1");
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > cap / r) {
      throw ResourceLimit("effective rank r^k = " + std::to_string(r) + "^" + std::to_string(k) +
                          " exceeds the rank cap " + std::to_string(cap));
    }
    total *= r;
  }
  if (total > cap) {
    throw ResourceLimit("effective rank " + std::to_string(total) + " exceeds the rank cap " +
                        std::to_string(cap));
  }
  return total;
}

std::size_t flat_index(std::span<const std::size_t> tuple, std::size_t r) {
  std::size_t idx = 0;
  for (std::size_t a : tuple) {
    if (a >= r) throw InvalidArgument("flat_index: tuple entry out of range");
    idx = idx * r + a;
  }
  return idx;
}

std::vector<std::size_t> index_tuple(std::size_t flat, std::size_t r, std::size_t k) {
  std::vector<std::size_t> t(k);
  for (std::size_t i = k; i-- > 0;) {
    t[i] = flat % r;
    flat /= r;
  }
  return t;
}

RealVector tensor_power(const RealVector& theta, std::size_t k) {
  RealVector out = RealVector::Ones(1);
  for (std::size_t i = 0; i < k; ++i) {
    RealVector next(out.size() * theta.size());
    for (Eigen::Index a = 0; a < out.size(); ++a) {
      next.segment(a * theta.size(), theta.size()) = out(a) * theta;
    }
    out = std::move(next);
  }
  return out;
}

MixedUnitaryChannel concat_effective(const MixedUnitaryChannel& channel,
                                     std::span<const UnitaryMatrix> intermediates,
                                     std::optional<std::size_t> cap) {
  std::size_t k = intermediates.size();
  std::size_t r = channel.rank();
  std::size_t total = checked_rank_power(r, k, cap.value_or(rank_cap()));
  for (const auto& v : intermediates) {
    if (v.dim() != channel.d_channel()) {
      throw DimensionMismatch("concat_effective: intermediate unitary has wrong dimension");
    }
  }

  // Build products incrementally in flat-index order: extending every prefix
  // (a_1..a_i) by a_{i+1} keeps a_1 most significant.
  std::vector<ComplexMatrix> prods{
      ComplexMatrix::Identity(static_cast<Eigen::Index>(channel.d_channel()),
                              static_cast<Eigen::Index>(channel.d_channel()))};
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<ComplexMatrix> next;
    next.reserve(prods.size() * r);
    const ComplexMatrix& v = intermediates[step].matrix();
    for (const auto& p : prods) {
      for (std::size_t a = 0; a < r; ++a) {
        next.push_back(v * channel.unitaries()[a].matrix() * p);
      }
    }
    prods = std::move(next);
  }

  std::vector<UnitaryMatrix> us;
  us.reserve(total);
  for (auto& p : prods) us.emplace_back(std::move(p));

  RealVector w = tensor_power(channel.theta().weights(), k);
  return MixedUnitaryChannel(std::move(us), ProbabilityVector(std::move(w)));
}

MixedUnitaryChannel concat_effective(const MixedUnitaryChannel& channel, std::size_t k,
                                     std::optional<std::size_t> cap) {
  std::vector<UnitaryMatrix> ids(k, UnitaryMatrix::identity(channel.d_channel()));
  return concat_effective(channel, ids, cap);
}

}  // namespace muclab
