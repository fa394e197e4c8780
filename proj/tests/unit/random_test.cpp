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

#include "muclab/random.hpp"

#include <set>

#include <gtest/gtest.h>

#include "muclab/estimator.hpp"

using namespace muclab;

TEST(derive_seed, deterministic) {
  EXPECT_EQ(derive_seed(42, {1, 2}), derive_seed(42, {1, 2}));
  EXPECT_EQ(make_stream(9, {3})(), make_stream(9, {3})());
}

TEST(derive_seed, distinct_across_labels_and_roots) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t root = 0; root < 4; ++root)
    for (std::uint64_t a = 0; a < 50; ++a)
      for (std::uint64_t b = 0; b < 10; ++b) seen.insert(derive_seed(root, {a, b}));
  EXPECT_EQ(seen.size(), 4u * 50u * 10u);
  EXPECT_NE(derive_seed(0, {1, 2}), derive_seed(0, {2, 1}));
  EXPECT_NE(derive_seed(0, {}), derive_seed(0, {0}));
}

TEST(trial_seed, independent_of_trial_count) {
  // A trial's seed depends on (root, trial, N index) only.
  EXPECT_EQ(trial_seed(7, 3, 1), derive_seed(7, {3, 1}));
  EXPECT_NE(trial_seed(7, 3, 1), trial_seed(7, 1, 3));
}
