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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "muclab/audit.hpp"
#include "muclab/channel.hpp"
#include "muclab/estimator.hpp"
#include "muclab/fisher.hpp"
#include "muclab/harness.hpp"
#include "muclab/povm.hpp"
#include "oracles.hpp"

using namespace muclab;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Audit runs are shared between criteria 1-3.
std::vector<AuditRecord> g_fisher_audit;
std::vector<AuditRecord> g_concat_audit;
double g_fisher_seconds = 0.0;
double g_concat_seconds = 0.0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict fisher_trace_audit() {
  auto t0 = std::chrono::steady_clock::now();
  g_fisher_audit = run_audit(default_fisher_audit_space(), 200, 1);
  g_fisher_seconds = seconds_since(t0);
  std::size_t bad = 0;
  double worst = 0.0;
  for (const auto& a : g_fisher_audit) {
    if (!a.report.satisfied) ++bad;
    worst = std::max(worst, a.report.trace_fisher / a.report.bound);
  }
  bool pass = bad == 0 && g_fisher_audit.size() == 200 && g_fisher_seconds < 120.0;
  return {pass, fmt("200 protocols, %.0f violations, max Tr I / (r d) = %.4f, %.1fs", double(bad), worst,
                    g_fisher_seconds)};
}

Verdict concat_trace_audit() {
  auto t0 = std::chrono::steady_clock::now();
  g_concat_audit = run_audit(default_concat_audit_space(), 50, 2);
  g_concat_seconds = seconds_since(t0);
  std::size_t bad = 0;
  double worst = 0.0;
  for (const auto& a : g_concat_audit) {
    if (!a.report.satisfied || a.k < 2) ++bad;
    worst = std::max(worst, a.report.trace_fisher / a.report.bound);
  }
  bool pass = bad == 0 && g_concat_audit.size() == 50 && g_concat_seconds < 300.0;
  return {pass, fmt("50 protocols, %.0f violations, max Tr I / (k^2 r d) = %.4f, %.1fs", double(bad), worst,
                    g_concat_seconds)};
}

Verdict row_max_bound() {
  double worst = -1e300;
  std::size_t n = 0;
  for (const auto* set : {&g_fisher_audit, &g_concat_audit}) {
    for (const auto& a : *set) {
      worst = std::max(worst, a.row_max_sum - static_cast<double>(a.d));
      ++n;
    }
  }
  return {n == 250 && worst <= 1e-6, fmt("%.0f overlap matrices, max (sum_i max_j K_ij - d) = %.3g", double(n), worst)};
}

Verdict fisher_oracle() {
  Rng rng(404);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    Eigen::Index s = 1 + t % 8, r = 2 + t % 4;
    RealMatrix k(s, r);
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = 0; j < r; ++j) k(i, j) = u(rng);
    for (Eigen::Index j = 0; j < r; ++j) k.col(j) /= k.col(j).sum();
    RealVector th(r);
    for (Eigen::Index i = 0; i < r; ++i) th(i) = u(rng) + 0.2;
    th /= th.sum();
    RealMatrix got = fisher_matrix(OverlapMatrix(k), ProbabilityVector(th)).matrix();
    RealMatrix want = oracle::fd_tangent_fisher([&](const RealVector& x) { return RealVector(k * x); }, th);
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
  }
  double worst_concat = 0.0;
  for (int t = 0; t < 10; ++t) {
    MixedUnitaryChannel c = haar_channel(2, 2, ProbabilityVector::uniform(2), rng);
    std::vector<UnitaryMatrix> v{haar_unitary(2, rng), haar_unitary(2, rng)};
    Ensemble ens = unitary_orbit_ensemble(concat_effective(c, v));
    Povm p = pgm(ens);
    RealMatrix keff = overlap_matrix(p, ens).matrix();
    RealVector th(2);
    th(0) = 0.2 + 0.6 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    th(1) = 1.0 - th(0);
    RealMatrix got = fisher_concat(c, v, p, ProbabilityVector(th)).matrix();
    RealMatrix want = oracle::fd_tangent_fisher(
        [&](const RealVector& x) { return RealVector(keff * oracle::tensor_power(x, 2)); }, th);
    worst_concat = std::max(worst_concat, (got - want).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-6 && worst_concat <= 1e-6,
          fmt("fisher_matrix max error %.3g (50 instances), fisher_concat max error %.3g (10 instances)", worst,
              worst_concat)};
}

// At the uniform point J_ab = m(a,b) r^(1-k), m the multiplicity of b in a.
// Summing multinomial moments over tuples gives
//   J^T J = k r^-k (r I + (k-1) 11^T),   ||J||^2 = k^2 r^(1-k).
// The frequently quoted form k r^-k (I + (k-1) 11^T) drops the factor r on I
// (it fails already at k = 1, where J = I); its gap is reported alongside.
Verdict jacobian_identity() {
  double worst_gram = 0.0, worst_norm = 0.0, worst_fd = 0.0, printed_gap = 0.0;
  for (std::size_t r = 1; r <= 6; ++r)
    for (std::size_t k = 1; k <= 3; ++k) {
      ProbabilityVector u = ProbabilityVector::uniform(r);
      TensorJacobian j = tensor_jacobian(u, k);
      auto n = static_cast<Eigen::Index>(r);
      double rd = static_cast<double>(r), kd = static_cast<double>(k);
      double scale = kd * std::pow(rd, -kd);
      RealMatrix gram = j.matrix().transpose() * j.matrix();
      RealMatrix ones = RealMatrix::Ones(n, n);
      RealMatrix expected = scale * (rd * RealMatrix::Identity(n, n) + (kd - 1.0) * ones);
      RealMatrix printed = scale * (RealMatrix::Identity(n, n) + (kd - 1.0) * ones);
      worst_gram = std::max(worst_gram, (gram - expected).cwiseAbs().maxCoeff());
      printed_gap = std::max(printed_gap, (gram - printed).cwiseAbs().maxCoeff());
      worst_norm = std::max(worst_norm, std::abs(j.spectral_norm_squared() - kd * kd * std::pow(rd, 1.0 - kd)));
      RealMatrix fd = oracle::fd_jacobian([&](const RealVector& x) { return oracle::tensor_power(x, k); },
                                          u.weights());
      worst_fd = std::max(worst_fd, (j.matrix() - fd).cwiseAbs().maxCoeff());
    }
  return {worst_gram <= 1e-12 && worst_norm <= 1e-10 && worst_fd <= 1e-8,
          fmt("max |J^T J - k r^-k (r I + (k-1) 11^T)| = %.3g, max | ||J||^2 - k^2 r^(1-k) | = %.3g, ", worst_gram,
              worst_norm) +
              fmt("J vs finite differences %.3g; gap to k r^-k (I + (k-1) 11^T) is %.3g", worst_fd, printed_gap)};
}

Verdict mse_constant() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(6, {}));
  MixedUnitaryChannel c = haar_channel(8, 64, ProbabilityVector::uniform(64), rng);
  std::vector<std::uint64_t> ns{1000, 10000, 100000};
  auto pts = summarize_mse(mse_curve(c, ns, 100, {}, 6));
  double slope = loglog_slope(pts);
  bool pass = std::abs(slope + 1.0) <= 0.1;
  std::string detail;
  for (const auto& p : pts) {
    double ratio = p.mean * static_cast<double>(p.n);
    pass = pass && p.mean <= 1.2 * 6.25 / static_cast<double>(p.n) && p.trials >= 100;
    detail += fmt("N=%.0f: N*MSE=%.3f; ", double(p.n), ratio);
  }
  double secs = seconds_since(t0);
  pass = pass && secs < 600.0;
  return {pass, detail + fmt("slope %.4f, %.1fs", slope, secs)};
}

// At this size min K_ii rarely reaches 0.7, so the conditional check can be
// vacuous; the inequality behind it, lambda_min >= 2 min K_ii - 1 for a
// symmetric doubly stochastic K, is checked on every trial as well.
Verdict concentration() {
  auto t0 = std::chrono::steady_clock::now();
  DiagonalSummary s = min_diagonal_experiment(8, 64, 50, 7);
  double secs = seconds_since(t0);
  double worst_gap = 1e300;
  for (const auto& tr : s.trials) worst_gap = std::min(worst_gap, tr.lambda_min_k - (2.0 * tr.min_kii - 1.0));
  bool pass = s.mean_of_mean_kii >= 0.70 && s.gerschgorin_violations == 0 && worst_gap >= -1e-8 && secs < 300.0;
  return {pass, fmt("mean K_ii %.4f +- %.4f, %.0f trials with min K_ii >= 0.7, ", s.mean_of_mean_kii,
                    s.std_error_mean_kii, double(s.gerschgorin_checked)) +
                    fmt("%.0f violations; min over trials of lambda_min - (2 min K_ii - 1) = %.4f; %.1fs",
                        double(s.gerschgorin_violations), worst_gap, secs)};
}

ComplexMatrix pauli(char which) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  if (which == 'I') {
    m(0, 0) = m(1, 1) = 1.0;
  } else {
    m(0, 1) = m(1, 0) = 1.0;
  }
  return m;
}

Verdict exactness() {
  MixedUnitaryChannel bitflip({UnitaryMatrix(pauli('I')), UnitaryMatrix(pauli('X'))}, ProbabilityVector::uniform(2));
  Ensemble ens = unitary_orbit_ensemble(bitflip);
  double k_err = (overlap_matrix(pgm(ens), ens).effect_block() - RealMatrix::Identity(2, 2)).norm();

  double tr = fisher_matrix(OverlapMatrix(RealMatrix::Identity(2, 2)), ProbabilityVector::uniform(2)).trace();

  MixedUnitaryChannel single({UnitaryMatrix(pauli('X'))}, ProbabilityVector::uniform(1));
  EstimateResult one = run_pgm_estimator(single, 10, {}, 1);
  bool exact_one = one.theta_hat.size() == 1 && one.theta_hat(0) == 1.0;

  Rng rng(8);
  MixedUnitaryChannel c = haar_channel(3, 4, ProbabilityVector::dirichlet(4, rng), rng);
  std::vector<UnitaryMatrix> id{UnitaryMatrix::identity(3)};
  MixedUnitaryChannel e = concat_effective(c, id);
  bool same = e.rank() == c.rank() && e.theta().weights() == c.theta().weights();
  for (std::size_t a = 0; same && a < c.rank(); ++a) same = e.unitaries()[a].matrix() == c.unitaries()[a].matrix();

  bool pass = k_err < 1e-12 && std::abs(tr - 2.0) < 1e-12 && exact_one && same;
  return {pass, fmt("||K - I_2|| = %.2g, Tr I = %.15g, ", k_err, tr) +
                    std::string("r=1 estimate ") + (exact_one ? "exactly (1)" : "not (1)") +
                    ", k=1 concatenation " + (same ? "identical" : "differs")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  using nlohmann::json;
  std::vector<json> configs = {
      {{"kind", "learn"}, {"N", 5000}, {"channel", {{"d_channel", 2}, {"r", 4}, {"unitaries", "haar"}, {"theta", "dirichlet"}}}},
      {{"kind", "mse_sweep"}, {"N_values", {100, 1000, 10000}}, {"trials", 20}, {"threads", 2},
       {"channel", {{"d_channel", 4}, {"r", 8}, {"unitaries", "haar"}}}},
      {{"kind", "concentration"}, {"d_channel", 4}, {"r", 16}, {"trials", 10}, {"threads", 2}},
      {{"kind", "fisher_audit"}, {"protocols", 40}, {"threads", 2}},
      {{"kind", "concat_audit"}, {"protocols", 10}},
      {{"kind", "bound"}, {"r", 64}, {"d", 8}, {"epsilon", 0.01}},
  };
  auto root = std::filesystem::temp_directory_path() / "muclab_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::size_t identical = 0;
  for (auto cfg : configs) {
    std::string kind = cfg["kind"];
    cfg["seed"] = 2026;
    std::string first;
    bool ok = true;
    for (int rep = 0; rep < 2 && ok; ++rep) {
      cfg["output_path"] = (root / (kind + std::to_string(rep))).string();
      ParseResult pr = parse_config(cfg);
      RunOutcome out = run(pr.config);
      ok = pr.problems.empty() && out.exit_code == 0;
      std::string csv = slurp(out.csv_path);
      if (rep == 0) first = csv;
      ok = ok && !csv.empty() && csv == first;
    }
    if (ok) ++identical;
  }
  std::filesystem::remove_all(root);
  return {identical == configs.size(),
          fmt("%.0f of %.0f kinds produced byte-identical CSV on rerun", double(identical), double(configs.size()))};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> check;
  };
  std::vector<Criterion> criteria = {
      {"fisher trace bound audit", fisher_trace_audit},
      {"concatenation trace bound audit", concat_trace_audit},
      {"row-max sum bound", row_max_bound},
      {"fisher finite-difference equivalence", fisher_oracle},
      {"tensor jacobian identity", jacobian_identity},
      {"estimator MSE constant", mse_constant},
      {"overlap concentration and eigenvalue floor", concentration},
      {"exactness spot checks", exactness},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %zu. %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
