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

#include <complex>
#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "muclab/random.hpp"

namespace muclab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances shared by every module.
///
///   unitarity      ||U^dag U - I||_F                         1e-10
///   hermiticity    ||A - A^dag||_F                           1e-10
///   trace          |Tr rho - 1|                              1e-10
///   eigen_floor    smallest admissible eigenvalue of a PSD   -1e-10
///   norm           | ||psi||^2 - 1 |                         1e-10
///   completeness   ||sum_i E_i - I||_F                       1e-8
///   support        ||A^-1/2 A A^-1/2 - Pi_supp(A)||           1e-8
namespace tol {
inline constexpr double kUnitarity = 1e-10;
inline constexpr double kHermiticity = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kEigenFloor = 1e-10;
inline constexpr double kNorm = 1e-10;
inline constexpr double kCompleteness = 1e-8;
inline constexpr double kSupport = 1e-8;
}  // namespace tol

bool is_finite(const ComplexMatrix& m);
double hermiticity_error(const ComplexMatrix& m);

class DensityOperator;

/// Square matrix with U^dag U = I (checked on construction).
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix m);
  static UnitaryMatrix identity(std::size_t dim);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  ComplexMatrix m_;
};

/// Normalized state vector.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const { return amps_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  DensityOperator density() const;

 private:
  ComplexVector amps_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  double purity() const;

 private:
  ComplexMatrix m_;
};

/// Haar-distributed unitary from the QR decomposition of a complex Ginibre
/// matrix, with column phases fixed by the diagonal of R.
UnitaryMatrix haar_unitary(std::size_t dim, Rng& rng);

/// Haar-random pure state (first column of a Haar unitary).
PureState haar_state(std::size_t dim, Rng& rng);

/// (1/sqrt(d)) sum_j |j>|j> on C^d (x) C^d.
PureState max_entangled_state(std::size_t d_channel);

/// Relative eigenvalue cutoff used when no explicit cutoff is given.
double default_psd_cutoff(std::size_t dim);

/// Pseudo-inverse square root of a Hermitian PSD matrix. Eigenvalues at or
/// below cutoff * lambda_max are mapped to zero.
ComplexMatrix inv_sqrt_psd(const ComplexMatrix& a, std::optional<double> cutoff = std::nullopt);

/// Orthogonal projector onto the span of eigenvectors with eigenvalue above
/// cutoff * lambda_max.
ComplexMatrix support_projector(const ComplexMatrix& a,
                                std::optional<double> cutoff = std::nullopt);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Partial trace of an operator on C^{d_first} (x) C^{d_second}; `keep_first`
/// selects which factor survives.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d_first, std::size_t d_second,
                            bool keep_first);

}  // namespace muclab
