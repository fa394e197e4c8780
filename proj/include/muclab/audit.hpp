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
#include <span>
#include <string>
#include <vector>

#include "muclab/fisher.hpp"

namespace muclab {

/// One randomly generated protocol (one measurement per channel output, no
/// adaptivity) and its trace-bound audit at the uniform parameter.
struct AuditRecord {
  std::uint64_t seed = 0;
  std::size_t d_channel = 0;
  std::size_t d_ancilla = 1;
  std::size_t r = 0;
  std::size_t k = 1;
  /// Probe dimension d = d_channel * d_ancilla.
  std::size_t d = 0;
  std::string probe;
  std::string povm;
  BoundReport report;
  /// sum_i max_j K_ij of the overlap matrix the Fisher matrix was built from.
  double row_max_sum = 0.0;

  /// "probe=...;povm=...;d_ancilla=..." for the JSON report.
  std::string descriptor() const;
};

struct AuditSpace {
  std::vector<std::size_t> d_channel_values;
  std::vector<std::size_t> r_values;
  /// Concatenation depths; {1} selects the non-concatenating audit.
  std::vector<std::size_t> k_values{1};
};

AuditSpace default_fisher_audit_space();
AuditSpace default_concat_audit_space();

/// Draws a protocol from `space` with a stream seeded by `seed`: channel of
/// Haar unitaries, an ancilla of dimension 1, 2 or d_channel, a probe that is
/// maximally entangled, Haar pure, or a random rank-two mixture, and either
/// the PGM of the probe's orbit ensemble or a random POVM. For k >= 2 the
/// intermediates are Haar and the audit uses the effective channel.
AuditRecord audit_random_protocol(const AuditSpace& space, std::uint64_t seed);

/// audit_random_protocol for protocols 0..count-1 with seeds derived from root_seed.
std::vector<AuditRecord> run_audit(const AuditSpace& space, std::size_t count,
                                   std::uint64_t root_seed, unsigned threads = 1);

}  // namespace muclab
