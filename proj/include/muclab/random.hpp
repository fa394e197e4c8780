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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace muclab {

using Rng = std::mt19937_64;

/// Derives a child seed from a root seed and a list of labels (trial index,
/// sweep index, ...). Each label is folded in with a splitmix64 round, so
/// adding labels or trials never perturbs streams derived from other labels.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> labels);

inline Rng make_stream(std::uint64_t root, std::initializer_list<std::uint64_t> labels) {
  return Rng(derive_seed(root, labels));
}

}  // namespace muclab
