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

#include "muclab/povm.hpp"

#include <cmath>
#include <random>
#include <string>

#include "muclab/errors.hpp"

namespace muclab {
namespace {

void require_psd_effect(const ComplexMatrix& e, std::size_t dim, const char* what) {
  auto n = static_cast<Eigen::Index>(dim);
  if (e.rows() != n || e.cols() != n) throw DimensionMismatch(std::string(what) + ": wrong size");
  if (!is_finite(e)) throw InvalidArgument(std::string(what) + ": non-finite entry");
  if (hermiticity_error(e) > tol::kHermiticity) {
    throw NotHermitian(std::string(what) + ": effect is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(e, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::kEigenFloor) {
    throw NotHermitian(std::string(what) + ": effect has a negative eigenvalue");
  }
}

// Tr(A B) without forming the product.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b_transposed,
                          double* imag_residue) {
  Complex t = a.cwiseProduct(b_transposed).sum();
  if (imag_residue) *imag_residue = std::abs(t.imag());
  return t.real();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

Povm::Povm(std::vector<ComplexMatrix> effects, std::optional<ComplexMatrix> completion)
    : effects_(std::move(effects)), completion_(std::move(completion)) {
  if (effects_.empty()) throw InvalidDimension("Povm: no effects");
  auto n = effects_.front().rows();
  if (n == 0 || effects_.front().cols() != n) throw InvalidDimension("Povm: effects must be square");
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (const auto& e : effects_) {
    require_psd_effect(e, static_cast<std::size_t>(n), "Povm");
    total += e;
  }
  if (completion_) {
    require_psd_effect(*completion_, static_cast<std::size_t>(n), "Povm completion");
    total += *completion_;
  }
  double err = (total - ComplexMatrix::Identity(n, n)).norm();
  if (err > tol::kCompleteness) {
    throw InconsistentPovm("Povm: ||sum E_i - I||_F = " + std::to_string(err));
  }
}

Povm Povm::projective(const UnitaryMatrix& basis) {
  std::vector<ComplexMatrix> effects;
  const ComplexMatrix& b = basis.matrix();
  for (Eigen::Index j = 0; j < b.cols(); ++j) effects.push_back(b.col(j) * b.col(j).adjoint());
  return Povm(std::move(effects));
}

const ComplexMatrix& Povm::effect(std::size_t i) const {
  if (i < effects_.size()) return effects_[i];
  if (completion_ && i == effects_.size()) return *completion_;
  throw InvalidArgument("Povm::effect: outcome index out of range");
}

Ensemble::Ensemble(std::vector<DensityOperator> states) : states_(std::move(states)) {
  if (states_.empty()) throw InvalidDimension("Ensemble: no states");
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw DimensionMismatch("Ensemble: states have different dimensions");
    }
  }
}

OverlapMatrix::OverlapMatrix(RealMatrix k, bool has_completion_row)
    : k_(std::move(k)), completion_row_(has_completion_row) {
  if (k_.rows() == 0 || k_.cols() == 0) throw InvalidDimension("OverlapMatrix: empty");
  if (!k_.allFinite()) throw InvalidArgument("OverlapMatrix: non-finite entry");
  if (k_.minCoeff() < -kNegativeTolerance) {
    throw InvalidArgument("OverlapMatrix: negative entry " + std::to_string(k_.minCoeff()));
  }
  k_ = k_.cwiseMax(0.0);
  double max_col = k_.colwise().sum().maxCoeff();
  if (max_col > 1.0 + kColumnSumTolerance) {
    throw InvalidArgument("OverlapMatrix: column sum " + std::to_string(max_col) + " exceeds 1");
  }
}

OverlapMatrix::Reduced OverlapMatrix::without_zero_rows() const {
  std::vector<std::size_t> kept;
  for (Eigen::Index i = 0; i < k_.rows(); ++i) {
    if (k_.row(i).norm() > kZeroRowNorm) kept.push_back(static_cast<std::size_t>(i));
  }
  RealMatrix out(static_cast<Eigen::Index>(kept.size()), k_.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = k_.row(static_cast<Eigen::Index>(kept[i]));
  }
  return {std::move(out), std::move(kept)};
}

RealMatrix OverlapMatrix::effect_block() const {
  return completion_row_ ? RealMatrix(k_.topRows(k_.rows() - 1)) : k_;
}

Povm pgm(const Ensemble& ensemble, std::optional<double> cutoff) {
  auto n = static_cast<Eigen::Index>(ensemble.dim());
  double r = static_cast<double>(ensemble.size());
  ComplexMatrix sigma = ComplexMatrix::Zero(n, n);
  for (const auto& s : ensemble.states()) sigma += s.matrix();
  sigma /= r;
  ComplexMatrix root = inv_sqrt_psd(hermitian_part(sigma), cutoff);

  std::vector<ComplexMatrix> effects;
  effects.reserve(ensemble.size());
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (const auto& s : ensemble.states()) {
    ComplexMatrix e = hermitian_part(root * (s.matrix() / r) * root);
    total += e;
    effects.push_back(std::move(e));
  }
  ComplexMatrix completion = hermitian_part(ComplexMatrix::Identity(n, n) - total);
  return Povm(std::move(effects), std::move(completion));
}

Ensemble orbit_ensemble(const MixedUnitaryChannel& channel, const DensityOperator& probe) {
  std::size_t dc = channel.d_channel();
  if (probe.dim() % dc != 0) {
    throw DimensionMismatch("orbit_ensemble: probe dim is not a multiple of the channel dim");
  }
  auto da = static_cast<Eigen::Index>(probe.dim() / dc);
  std::vector<DensityOperator> states;
  states.reserve(channel.rank());
  for (const auto& u : channel.unitaries()) {
    ComplexMatrix ua = da == 1 ? u.matrix() : kron(u.matrix(), ComplexMatrix::Identity(da, da));
    states.emplace_back(hermitian_part(ua * probe.matrix() * ua.adjoint()));
  }
  return Ensemble(std::move(states));
}

Ensemble unitary_orbit_ensemble(const MixedUnitaryChannel& channel) {
  return orbit_ensemble(channel, max_entangled_state(channel.d_channel()).density());
}

OverlapMatrix overlap_matrix(const Povm& povm, const Ensemble& ensemble) {
  if (povm.dim() != ensemble.dim()) {
    throw DimensionMismatch("overlap_matrix: POVM dim " + std::to_string(povm.dim()) +
                            " != ensemble dim " + std::to_string(ensemble.dim()));
  }
  std::vector<ComplexMatrix> transposed;
  transposed.reserve(ensemble.size());
  for (const auto& s : ensemble.states()) transposed.push_back(s.matrix().transpose());

  auto s_out = static_cast<Eigen::Index>(povm.outcome_count());
  auto r = static_cast<Eigen::Index>(ensemble.size());
  RealMatrix k(s_out, r);
  for (Eigen::Index i = 0; i < s_out; ++i) {
    const ComplexMatrix& e = povm.effect(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < r; ++j) {
      double imag = 0.0;
      k(i, j) = trace_product_real(e, transposed[static_cast<std::size_t>(j)], &imag);
      if (imag > 1e-8) {
        throw InvalidArgument("overlap_matrix: Tr(E_i rho_j) has imaginary residue " +
                              std::to_string(imag));
      }
    }
  }
  return OverlapMatrix(std::move(k), povm.has_completion());
}

RealVector born_probabilities(const DensityOperator& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) throw DimensionMismatch("born_probabilities: dimension mismatch");
  ComplexMatrix rt = rho.matrix().transpose();
  auto s = static_cast<Eigen::Index>(povm.outcome_count());
  RealVector p(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    p(i) = trace_product_real(povm.effect(static_cast<std::size_t>(i)), rt, nullptr);
  }
  if (std::abs(p.sum() - 1.0) > 1e-6) {
    throw InconsistentPovm("born_probabilities: probabilities sum to " + std::to_string(p.sum()));
  }
  if (p.minCoeff() < -1e-10) {
    throw InconsistentPovm("born_probabilities: negative probability " +
                           std::to_string(p.minCoeff()));
  }
  p = p.cwiseMax(0.0);
  return p / p.sum();
}

std::size_t born_sample(const DensityOperator& rho, const Povm& povm, Rng& rng) {
  RealVector p = born_probabilities(rho, povm);
  std::discrete_distribution<std::size_t> dist(p.data(), p.data() + p.size());
  return dist(rng);
}

Povm random_povm(std::size_t dim, std::size_t outcomes, Rng& rng) {
  if (dim == 0 || outcomes == 0) throw InvalidDimension("random_povm: dim and outcomes must be >= 1");
  auto d = static_cast<Eigen::Index>(dim);
  std::vector<ComplexMatrix> effects;
  if (outcomes >= dim) {
    // Rows of the first d columns of a Haar unitary form an isometry V (s x d):
    // sum_i v_i v_i^dag = V^dag V = I.
    UnitaryMatrix w = haar_unitary(outcomes, rng);
    ComplexMatrix iso = w.matrix().leftCols(d);
    for (Eigen::Index i = 0; i < iso.rows(); ++i) {
      ComplexVector v = iso.row(i).adjoint();
      effects.push_back(v * v.adjoint());
    }
  } else {
    UnitaryMatrix basis = haar_unitary(dim, rng);
    effects.assign(outcomes, ComplexMatrix::Zero(d, d));
    for (Eigen::Index j = 0; j < d; ++j) {
      auto g = static_cast<std::size_t>(j) % outcomes;
      effects[g] += basis.matrix().col(j) * basis.matrix().col(j).adjoint();
    }
  }
  for (auto& e : effects) e = hermitian_part(e);
  return Povm(std::move(effects));
}

double row_max_sum(const OverlapMatrix& k) { return k.matrix().rowwise().maxCoeff().sum(); }

}  // namespace muclab
