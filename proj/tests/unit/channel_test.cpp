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

#include <cstdlib>
#include <vector>

#include <gtest/gtest.h>

#include "muclab/errors.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace muclab;
using namespace muclab::testing;

TEST(probability_vector, validation) {
  EXPECT_THROW(ProbabilityVector(RealVector::Zero(0)), InvalidDimension);
  RealVector neg(2);
  neg << 1.1, -0.1;
  EXPECT_THROW(ProbabilityVector{neg}, InvalidArgument);
  RealVector off(2);
  off << 0.5, 0.6;
  EXPECT_THROW(ProbabilityVector{off}, InvalidArgument);
  EXPECT_NEAR(ProbabilityVector::uniform(4)[2], 0.25, 1e-16);
}

TEST(probability_vector, dirichlet_on_simplex) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    ProbabilityVector p = ProbabilityVector::dirichlet(5, rng);
    EXPECT_NEAR(p.weights().sum(), 1.0, 1e-12);
    EXPECT_GE(p.weights().minCoeff(), 0.0);
  }
}

TEST(apply, identity_channel) {
  MixedUnitaryChannel c = channel_of({pauli_i()}, {1.0});
  Rng rng(1);
  DensityOperator rho = random_mixed_state(2, rng);
  EXPECT_LT((apply(c, rho).matrix() - rho.matrix()).norm(), 1e-15);
}

TEST(apply, bit_flip_mixes_zero_state) {
  MixedUnitaryChannel c = channel_of({pauli_i(), pauli_x()}, {0.5, 0.5});
  ComplexMatrix out = apply(c, basis_state(2, 0)).matrix();
  EXPECT_LT((out - ComplexMatrix::Identity(2, 2) / 2.0).norm(), 1e-15);
}

TEST(apply, trace_preserving_and_positive) {
  Rng rng(8);
  for (int t = 0; t < 40; ++t) {
    std::size_t d = 1 + t % 5, r = 1 + t % 4;
    MixedUnitaryChannel c = haar_channel(d, r, ProbabilityVector::dirichlet(r, rng), rng);
    DensityOperator out = apply(c, random_mixed_state(d, rng));
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out.matrix());
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(apply, rejects_wrong_dimension) {
  MixedUnitaryChannel c = channel_of({pauli_i()}, {1.0});
  EXPECT_THROW(apply(c, basis_state(3, 0)), DimensionMismatch);
}

TEST(apply_with_ancilla, trivial_ancilla_matches_apply) {
  Rng rng(2);
  MixedUnitaryChannel c = haar_channel(3, 2, ProbabilityVector::uniform(2), rng);
  DensityOperator rho = random_mixed_state(3, rng);
  EXPECT_LT((apply_with_ancilla(c, rho).matrix() - apply(c, rho).matrix()).norm(), 1e-13);
}

TEST(apply_with_ancilla, phase_flip_on_bell_state) {
  MixedUnitaryChannel c = channel_of({pauli_i(), pauli_z()}, {0.5, 0.5});
  DensityOperator bell = max_entangled_state(2).density();
  ComplexMatrix out = apply_with_ancilla(c, bell).matrix();
  // Equal mixture of |Phi+> and |Phi->, written out by hand.
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 0.5;
  expected(3, 3) = 0.5;
  EXPECT_LT((out - expected).norm(), 1e-14);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out);
  RealVector ev = es.eigenvalues();
  EXPECT_NEAR(ev(0), 0.0, 1e-14);
  EXPECT_NEAR(ev(1), 0.0, 1e-14);
  EXPECT_NEAR(ev(2), 0.5, 1e-14);
  EXPECT_NEAR(ev(3), 0.5, 1e-14);
}

TEST(rank_cap, checked_power_and_env_override) {
  EXPECT_EQ(checked_rank_power(2, 12, kDefaultRankCap), 4096u);
  EXPECT_THROW(checked_rank_power(2, 13, kDefaultRankCap), ResourceLimit);
  EXPECT_THROW(checked_rank_power(100, 40, kDefaultRankCap), ResourceLimit);
  ::setenv("MUCLAB_RANK_CAP", "16", 1);
  EXPECT_EQ(rank_cap(), 16u);
  ::unsetenv("MUCLAB_RANK_CAP");
  EXPECT_EQ(rank_cap(), kDefaultRankCap);
}

TEST(flat_index, first_entry_most_significant) {
  std::vector<std::size_t> t{1, 0};
  EXPECT_EQ(flat_index(t, 3), 3u);
  std::vector<std::size_t> u{2, 1, 0};
  EXPECT_EQ(flat_index(u, 3), 21u);
  EXPECT_EQ(index_tuple(21, 3, 3), u);
  for (std::size_t f = 0; f < 64; ++f) EXPECT_EQ(flat_index(index_tuple(f, 4, 3), 4), f);
}

TEST(tensor_power, matches_odometer) {
  RealVector th(3);
  th << 0.5, 0.3, 0.2;
  for (std::size_t k = 1; k <= 4; ++k)
    EXPECT_LT((tensor_power(th, k) - oracle::tensor_power(th, k)).norm(), 1e-15);
}

TEST(concat_effective, single_use_is_the_channel) {
  Rng rng(3);
  MixedUnitaryChannel c = haar_channel(2, 3, ProbabilityVector::dirichlet(3, rng), rng);
  std::vector<UnitaryMatrix> v{UnitaryMatrix::identity(2)};
  MixedUnitaryChannel e = concat_effective(c, v);
  ASSERT_EQ(e.rank(), 3u);
  EXPECT_EQ(e.theta().weights(), c.theta().weights());
  for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(e.unitaries()[a].matrix(), c.unitaries()[a].matrix());
}

TEST(concat_effective, product_weights) {
  MixedUnitaryChannel c = channel_of({pauli_i(), pauli_x()}, {0.3, 0.7});
  MixedUnitaryChannel e = concat_effective(c, 2);
  RealVector expected(4);
  expected << 0.09, 0.21, 0.21, 0.49;
  EXPECT_LT((e.theta().weights() - expected).norm(), 1e-15);
}

TEST(concat_effective, unitary_ordering) {
  Rng rng(5);
  MixedUnitaryChannel c = haar_channel(3, 3, ProbabilityVector::uniform(3), rng);
  std::vector<UnitaryMatrix> v{haar_unitary(3, rng), haar_unitary(3, rng)};
  MixedUnitaryChannel e = concat_effective(c, v);
  const auto& u = c.unitaries();
  for (std::size_t a1 = 0; a1 < 3; ++a1)
    for (std::size_t a2 = 0; a2 < 3; ++a2) {
      ComplexMatrix expected =
          v[1].matrix() * u[a2].matrix() * v[0].matrix() * u[a1].matrix();
      EXPECT_LT((e.unitaries()[3 * a1 + a2].matrix() - expected).norm(), 1e-12);
    }
}

TEST(concat_effective, equals_sequential_application) {
  Rng rng(19);
  for (int t = 0; t < 25; ++t) {
    std::size_t d = 2 + t % 3, r = 1 + t % 3, k = 1 + (t / 3) % 3;
    MixedUnitaryChannel c = haar_channel(d, r, ProbabilityVector::dirichlet(r, rng), rng);
    std::vector<UnitaryMatrix> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(haar_unitary(d, rng));
    DensityOperator rho = random_mixed_state(d, rng);

    ComplexMatrix seq = rho.matrix();
    for (std::size_t i = 0; i < k; ++i) {
      seq = apply(c, DensityOperator(seq)).matrix();
      seq = v[i].matrix() * seq * v[i].matrix().adjoint();
      seq = (seq + seq.adjoint()) / 2.0;
    }
    ComplexMatrix eff = apply(concat_effective(c, v), rho).matrix();
    EXPECT_LT((eff - seq).norm(), 1e-9) << "d=" << d << " r=" << r << " k=" << k;
  }
}

TEST(concat_effective, respects_rank_cap) {
  MixedUnitaryChannel c = channel_of({pauli_i(), pauli_x()}, {0.5, 0.5});
  EXPECT_THROW(concat_effective(c, 13), ResourceLimit);
  EXPECT_THROW(concat_effective(c, 3, 4), ResourceLimit);
  EXPECT_EQ(concat_effective(c, 3, 8).rank(), 8u);
}
