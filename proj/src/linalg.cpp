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

#include "muclab/linalg.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "muclab/errors.hpp"

namespace muclab {
namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidDimension(std::string(what) + ": expected a non-empty square matrix, got " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!is_finite(m)) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_eigen(const ComplexMatrix& a,
                                                             const char* what) {
  require_square(a, what);
  require_finite(a, what);
  double scale = std::max(1.0, a.norm());
  if (hermiticity_error(a) > tol::kHermiticity * scale) {
    throw NotHermitian(std::string(what) + ": input is not Hermitian");
  }
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  if (es.eigenvalues().minCoeff() < -tol::kEigenFloor * std::max(1.0, lmax)) {
    throw NotHermitian(std::string(what) + ": input has a negative eigenvalue");
  }
  return es;
}

}  // namespace

bool is_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).norm();
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "UnitaryMatrix");
  require_finite(m_, "UnitaryMatrix");
  auto n = m_.rows();
  double err = (m_.adjoint() * m_ - ComplexMatrix::Identity(n, n)).norm();
  if (err > tol::kUnitarity) {
    throw InvalidArgument("UnitaryMatrix: ||U^dag U - I||_F = " + std::to_string(err));
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim) {
  if (dim == 0) throw InvalidDimension("UnitaryMatrix::identity: dim must be >= 1");
  auto n = static_cast<Eigen::Index>(dim);
  return UnitaryMatrix(ComplexMatrix::Identity(n, n));
}

PureState::PureState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw InvalidDimension("PureState: empty amplitude vector");
  if (!amps_.real().allFinite() || !amps_.imag().allFinite()) {
    throw InvalidArgument("PureState: non-finite amplitude");
  }
  if (std::abs(amps_.squaredNorm() - 1.0) > tol::kNorm) {
    throw InvalidArgument("PureState: squared norm differs from 1");
  }
}

DensityOperator PureState::density() const { return DensityOperator(amps_ * amps_.adjoint()); }

DensityOperator::DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "DensityOperator");
  require_finite(m_, "DensityOperator");
  if (hermiticity_error(m_) > tol::kHermiticity) {
    throw NotHermitian("DensityOperator: matrix is not Hermitian");
  }
  if (std::abs(m_.trace() - Complex(1.0, 0.0)) > tol::kTrace) {
    throw InvalidArgument("DensityOperator: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::kEigenFloor) {
    throw NotHermitian("DensityOperator: negative eigenvalue");
  }
}

double DensityOperator::purity() const { return (m_ * m_).trace().real(); }

UnitaryMatrix haar_unitary(std::size_t dim, Rng& rng) {
  if (dim == 0) throw InvalidDimension("haar_unitary: dim must be >= 1");
  auto n = static_cast<Eigen::Index>(dim);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ComplexMatrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double re = gauss(rng);
      double im = gauss(rng);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex d = r(j, j);
    double mag = std::abs(d);
    Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return UnitaryMatrix(std::move(q));
}

PureState haar_state(std::size_t dim, Rng& rng) {
  UnitaryMatrix u = haar_unitary(dim, rng);
  ComplexVector v = u.matrix().col(0);
  v.normalize();
  return PureState(std::move(v));
}

PureState max_entangled_state(std::size_t d_channel) {
  if (d_channel == 0) throw InvalidDimension("max_entangled_state: d_channel must be >= 1");
  auto d = static_cast<Eigen::Index>(d_channel);
  ComplexVector v = ComplexVector::Zero(d * d);
  double amp = 1.0 / std::sqrt(static_cast<double>(d_channel));
  for (Eigen::Index j = 0; j < d; ++j) v(j * d + j) = amp;
  return PureState(std::move(v));
}

double default_psd_cutoff(std::size_t dim) {
  return static_cast<double>(dim) * std::numeric_limits<double>::epsilon();
}

ComplexMatrix inv_sqrt_psd(const ComplexMatrix& a, std::optional<double> cutoff) {
  auto es = hermitian_eigen(a, "inv_sqrt_psd");
  double rel = cutoff.value_or(default_psd_cutoff(static_cast<std::size_t>(a.rows())));
  const RealVector& lam = es.eigenvalues();
  double threshold = rel * std::max(lam.maxCoeff(), 0.0);
  RealVector f(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    f(i) = (lam(i) > threshold && lam(i) > 0.0) ? 1.0 / std::sqrt(lam(i)) : 0.0;
  }
  const ComplexMatrix& v = es.eigenvectors();
  return v * f.cast<Complex>().asDiagonal() * v.adjoint();
}

ComplexMatrix support_projector(const ComplexMatrix& a, std::optional<double> cutoff) {
  auto es = hermitian_eigen(a, "support_projector");
  double rel = cutoff.value_or(default_psd_cutoff(static_cast<std::size_t>(a.rows())));
  const RealVector& lam = es.eigenvalues();
  double threshold = rel * std::max(lam.maxCoeff(), 0.0);
  RealVector f(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    f(i) = (lam(i) > threshold && lam(i) > 0.0) ? 1.0 : 0.0;
  }
  const ComplexMatrix& v = es.eigenvectors();
  return v * f.cast<Complex>().asDiagonal() * v.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d_first, std::size_t d_second,
                            bool keep_first) {
  auto da = static_cast<Eigen::Index>(d_first);
  auto db = static_cast<Eigen::Index>(d_second);
  if (m.rows() != da * db || m.cols() != da * db) {
    throw DimensionMismatch("partial_trace: matrix size does not match factor dimensions");
  }
  if (keep_first) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index i = 0; i < db; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      for (Eigen::Index k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

}  // namespace muclab
