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

#include "muclab/audit.hpp"

#include <optional>
#include <random>

#include "muclab/errors.hpp"
#include "muclab/parallel.hpp"

namespace muclab {
namespace {

template <typename T>
const T& pick(const std::vector<T>& values, Rng& rng) {
  if (values.empty()) throw InvalidArgument("audit: empty choice set");
  std::uniform_int_distribution<std::size_t> dist(0, values.size() - 1);
  return values[dist(rng)];
}

DensityOperator random_probe(std::size_t d_channel, std::size_t d_ancilla, Rng& rng,
                             std::string& label) {
  std::size_t d = d_channel * d_ancilla;
  std::vector<std::string> kinds{"haar_pure", "haar_mixed"};
  if (d_ancilla == d_channel) kinds.push_back("max_entangled");
  label = pick(kinds, rng);
  if (label == "max_entangled") return max_entangled_state(d_channel).density();
  if (label == "haar_pure") return haar_state(d, rng).density();
  ComplexVector a = haar_state(d, rng).amplitudes();
  ComplexVector b = haar_state(d, rng).amplitudes();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double w = unif(rng);
  ComplexMatrix m = w * a * a.adjoint() + (1.0 - w) * b * b.adjoint();
  m /= m.trace().real();
  return DensityOperator(0.5 * (m + m.adjoint()));
}

}  // namespace

std::string AuditRecord::descriptor() const {
  return "probe=" + probe + ";povm=" + povm + ";d_ancilla=" + std::to_string(d_ancilla);
}

AuditSpace default_fisher_audit_space() {
  AuditSpace s;
  s.d_channel_values = {2, 4, 8};
  for (std::size_t r = 2; r <= 16; ++r) s.r_values.push_back(r);
  s.k_values = {1};
  return s;
}

AuditSpace default_concat_audit_space() {
  AuditSpace s;
  s.d_channel_values = {2, 4};
  s.r_values = {2, 3};
  s.k_values = {2, 3};
  return s;
}

AuditRecord audit_random_protocol(const AuditSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  AuditRecord rec;
  rec.seed = seed;
  rec.d_channel = pick(space.d_channel_values, rng);
  rec.r = pick(space.r_values, rng);
  rec.k = pick(space.k_values, rng);
  std::vector<std::size_t> ancillas{1, 2, rec.d_channel};
  rec.d_ancilla = pick(ancillas, rng);
  rec.d = rec.d_channel * rec.d_ancilla;

  ProbabilityVector uniform = ProbabilityVector::uniform(rec.r);
  MixedUnitaryChannel channel = haar_channel(rec.d_channel, rec.r, uniform, rng);
  std::vector<UnitaryMatrix> intermediates;
  for (std::size_t i = 0; i < rec.k; ++i) intermediates.push_back(haar_unitary(rec.d_channel, rng));
  if (rec.k == 1) intermediates.front() = UnitaryMatrix::identity(rec.d_channel);

  DensityOperator probe = random_probe(rec.d_channel, rec.d_ancilla, rng, rec.probe);

  MixedUnitaryChannel effective =
      rec.k == 1 ? channel : concat_effective(channel, intermediates);
  Ensemble ensemble = orbit_ensemble(effective, probe);

  std::bernoulli_distribution coin(0.5);
  std::optional<Povm> povm;
  if (coin(rng)) {
    rec.povm = "pgm";
    povm.emplace(pgm(ensemble));
  } else {
    std::uniform_int_distribution<std::size_t> outcomes(2, 2 * rec.d);
    std::size_t s = outcomes(rng);
    rec.povm = "random_" + std::to_string(s);
    povm.emplace(random_povm(rec.d, s, rng));
  }

  OverlapMatrix k = overlap_matrix(*povm, ensemble);
  rec.row_max_sum = row_max_sum(k);
  if (rec.k == 1) {
    rec.report = audit_trace_bound(fisher_matrix(k, uniform), rec.r, rec.d, 1);
  } else {
    FisherMatrix f = fisher_concat(channel, intermediates, *povm, uniform, probe);
    rec.report = audit_trace_bound(f, rec.r, rec.d, rec.k);
  }
  return rec;
}

std::vector<AuditRecord> run_audit(const AuditSpace& space, std::size_t count,
                                   std::uint64_t root_seed, unsigned threads) {
  std::vector<AuditRecord> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    out[i] = audit_random_protocol(space, derive_seed(root_seed, {static_cast<std::uint64_t>(i)}));
  });
  return out;
}

}  // namespace muclab
