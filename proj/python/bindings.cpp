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

#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "muclab/audit.hpp"
#include "muclab/channel.hpp"
#include "muclab/estimator.hpp"
#include "muclab/errors.hpp"
#include "muclab/fisher.hpp"
#include "muclab/harness.hpp"
#include "muclab/linalg.hpp"
#include "muclab/povm.hpp"

namespace py = pybind11;
using namespace muclab;

namespace {

std::vector<UnitaryMatrix> to_unitaries(const std::vector<ComplexMatrix>& ms) {
  std::vector<UnitaryMatrix> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.emplace_back(m);
  return out;
}

std::vector<ComplexMatrix> to_matrices(const std::vector<UnitaryMatrix>& us) {
  std::vector<ComplexMatrix> out;
  out.reserve(us.size());
  for (const auto& u : us) out.push_back(u.matrix());
  return out;
}

ProbabilityVector theta_from(const py::object& theta, std::size_t r, Rng& rng) {
  if (theta.is_none()) return ProbabilityVector::uniform(r);
  if (py::isinstance<py::str>(theta)) {
    auto mode = theta.cast<std::string>();
    if (mode == "uniform") return ProbabilityVector::uniform(r);
    if (mode == "dirichlet") return ProbabilityVector::dirichlet(r, rng);
    throw InvalidArgument("theta must be \"uniform\", \"dirichlet\" or a weight vector");
  }
  return ProbabilityVector(theta.cast<RealVector>());
}

SamplingPath parse_path(const std::string& s) {
  if (s == "categorical_from_K") return SamplingPath::kCategoricalFromK;
  if (s == "full_born") return SamplingPath::kFullBorn;
  throw InvalidArgument("sampling_path must be \"categorical_from_K\" or \"full_born\"");
}

py::dict report_dict(const BoundReport& rep) {
  py::dict d;
  d["trace_fisher"] = rep.trace_fisher;
  d["bound"] = rep.bound;
  d["slack"] = rep.slack;
  d["satisfied"] = rep.satisfied;
  return d;
}

}  // namespace

PYBIND11_MODULE(_muclab, m) {
  m.doc() = "Mixed unitary channel learning: PGM, Fisher information, and the PGM estimator";

  py::register_exception<Error>(m, "MuclabError", PyExc_ValueError);

  m.def(
      "haar_unitary",
      [](std::size_t dim, std::uint64_t seed) {
        Rng rng(seed);
        return haar_unitary(dim, rng).matrix();
      },
      py::arg("dim"), py::arg("seed") = 0);
  m.def(
      "max_entangled_state",
      [](std::size_t d) { return ComplexVector(max_entangled_state(d).amplitudes()); },
      py::arg("d_channel"));
  m.def("inv_sqrt_psd", &inv_sqrt_psd, py::arg("a"), py::arg("cutoff") = py::none());

  py::class_<MixedUnitaryChannel>(m, "Channel")
      .def(py::init([](const std::vector<ComplexMatrix>& unitaries, const RealVector& theta) {
             return MixedUnitaryChannel(to_unitaries(unitaries), ProbabilityVector(theta));
           }),
           py::arg("unitaries"), py::arg("theta"))
      .def_static(
          "haar",
          [](std::size_t d_channel, std::size_t r, const py::object& theta, std::uint64_t seed) {
            Rng rng(seed);
            std::vector<UnitaryMatrix> us;
            for (std::size_t a = 0; a < r; ++a) us.push_back(haar_unitary(d_channel, rng));
            ProbabilityVector w = theta_from(theta, r, rng);
            return MixedUnitaryChannel(std::move(us), std::move(w));
          },
          py::arg("d_channel"), py::arg("r"), py::arg("theta") = py::none(),
          py::arg("seed") = 0)
      .def_property_readonly("d_channel", &MixedUnitaryChannel::d_channel)
      .def_property_readonly("rank", &MixedUnitaryChannel::rank)
      .def_property_readonly("theta",
                             [](const MixedUnitaryChannel& c) { return c.theta().weights(); })
      .def_property_readonly(
          "unitaries", [](const MixedUnitaryChannel& c) { return to_matrices(c.unitaries()); })
      .def("apply",
           [](const MixedUnitaryChannel& c, const ComplexMatrix& rho) {
             return apply(c, DensityOperator(rho)).matrix();
           })
      .def("apply_with_ancilla",
           [](const MixedUnitaryChannel& c, const ComplexMatrix& rho) {
             return apply_with_ancilla(c, DensityOperator(rho)).matrix();
           })
      .def(
          "concat_effective",
          [](const MixedUnitaryChannel& c, const std::vector<ComplexMatrix>& intermediates) {
            return concat_effective(c, to_unitaries(intermediates));
          },
          py::arg("intermediates"));

  m.def(
      "pgm_overlap",
      [](const MixedUnitaryChannel& c) {
        Ensemble ens = unitary_orbit_ensemble(c);
        return overlap_matrix(pgm(ens), ens).effect_block();
      },
      py::arg("channel"),
      "Overlap matrix K of the PGM on the maximally entangled orbit ensemble "
      "(completion row omitted).");

  m.def(
      "overlap_matrix",
      [](const std::vector<ComplexMatrix>& effects, const std::vector<ComplexMatrix>& states) {
        std::vector<DensityOperator> rhos;
        for (const auto& s : states) rhos.emplace_back(s);
        return overlap_matrix(Povm(effects), Ensemble(std::move(rhos))).matrix();
      },
      py::arg("effects"), py::arg("states"));

  m.def("simplex_projector", &simplex_projector, py::arg("r"));
  m.def(
      "outcome_distribution",
      [](const RealMatrix& k, const RealVector& theta) {
        return outcome_distribution(OverlapMatrix(k), ProbabilityVector(theta));
      },
      py::arg("K"), py::arg("theta"));
  m.def(
      "fisher_matrix",
      [](const RealMatrix& k, const RealVector& theta) {
        return fisher_matrix(OverlapMatrix(k), ProbabilityVector(theta)).matrix();
      },
      py::arg("K"), py::arg("theta"));
  m.def(
      "tensor_jacobian",
      [](const RealVector& theta, std::size_t k) {
        return tensor_jacobian(ProbabilityVector(theta), k).matrix();
      },
      py::arg("theta"), py::arg("k"));
  m.def(
      "fisher_concat_pgm",
      [](const MixedUnitaryChannel& c, const std::vector<ComplexMatrix>& intermediates,
         const RealVector& theta) {
        auto vs = to_unitaries(intermediates);
        MixedUnitaryChannel eff = concat_effective(c, vs);
        Povm povm = pgm(unitary_orbit_ensemble(eff));
        return fisher_concat(c, vs, povm, ProbabilityVector(theta)).matrix();
      },
      py::arg("channel"), py::arg("intermediates"), py::arg("theta"),
      "Fisher matrix of the k-fold protocol measured with the PGM of the effective "
      "channel's maximally entangled orbit.");
  m.def(
      "audit_trace_bound",
      [](const RealMatrix& f, std::size_t r, std::size_t d, std::size_t k) {
        return report_dict(audit_trace_bound(FisherMatrix(f), r, d, k));
      },
      py::arg("fisher"), py::arg("r"), py::arg("d"), py::arg("k") = 1);
  m.def("van_trees_lower_bound", &van_trees_lower_bound, py::arg("r"), py::arg("d"),
        py::arg("k"), py::arg("epsilon"), py::arg("trace_fisher") = py::none());

  m.def(
      "run_pgm_estimator",
      [](const MixedUnitaryChannel& c, std::uint64_t n, std::uint64_t seed,
         const std::string& sampling_path, bool project, double cutoff) {
        EstimatorOptions opts;
        opts.sampling_path = parse_path(sampling_path);
        opts.project_to_simplex = project;
        opts.pseudo_inverse_cutoff = cutoff;
        EstimateResult res = run_pgm_estimator(c, n, opts, seed);
        py::dict d;
        d["theta_hat"] = res.theta_hat;
        if (res.theta_projected) d["theta_projected"] = *res.theta_projected;
        d["counts"] = res.counts;
        d["N"] = res.n;
        d["seed"] = res.seed;
        d["squared_error"] = *res.squared_error;
        d["condition_number"] = res.condition_number;
        d["warning"] = res.warning ? py::cast(*res.warning) : py::none();
        return d;
      },
      py::arg("channel"), py::arg("N"), py::arg("seed") = 0,
      py::arg("sampling_path") = "categorical_from_K", py::arg("project_to_simplex") = false,
      py::arg("pseudo_inverse_cutoff") = 1e-10);

  m.def(
      "mse_curve",
      [](const MixedUnitaryChannel& c, const std::vector<std::uint64_t>& n_values,
         std::size_t trials, std::uint64_t root_seed, unsigned threads) {
        EstimatorOptions opts;
        auto records = mse_curve(c, n_values, trials, opts, root_seed, threads);
        py::list out;
        for (const auto& p : summarize_mse(records)) {
          py::dict d;
          d["N"] = p.n;
          d["trials"] = p.trials;
          d["mean"] = p.mean;
          d["std_error"] = p.std_error;
          out.append(d);
        }
        return out;
      },
      py::arg("channel"), py::arg("N_values"), py::arg("trials"), py::arg("root_seed") = 0,
      py::arg("threads") = 1);

  m.def(
      "min_diagonal_experiment",
      [](std::size_t d_channel, std::size_t r, std::size_t trials, std::uint64_t root_seed) {
        DiagonalSummary s = min_diagonal_experiment(d_channel, r, trials, root_seed);
        py::dict d;
        d["fraction_min_kii_at_least_0_7"] = s.fraction_min_kii_above;
        d["mean_of_mean_kii"] = s.mean_of_mean_kii;
        d["std_error_mean_kii"] = s.std_error_mean_kii;
        d["gerschgorin_checked"] = s.gerschgorin_checked;
        d["gerschgorin_violations"] = s.gerschgorin_violations;
        std::vector<double> mins, means, lams;
        for (const auto& t : s.trials) {
          mins.push_back(t.min_kii);
          means.push_back(t.mean_kii);
          lams.push_back(t.lambda_min_k);
        }
        d["min_kii"] = mins;
        d["mean_kii"] = means;
        d["lambda_min_k"] = lams;
        return d;
      },
      py::arg("d_channel"), py::arg("r"), py::arg("trials"), py::arg("root_seed") = 0);

  m.def(
      "validate_config",
      [](const std::string& text) {
        ParseResult parsed = parse_config(nlohmann::json::parse(text));
        auto problems = parsed.problems;
        if (problems.empty()) problems = validate(parsed.config);
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& p : problems) out.emplace_back(p.field, p.message);
        return out;
      },
      py::arg("config_json"));

  m.def(
      "run_config",
      [](const std::string& text) {
        ParseResult parsed = parse_config(nlohmann::json::parse(text));
        if (!parsed.problems.empty()) {
          std::string msg;
          for (const auto& p : parsed.problems) msg += p.field + ": " + p.message + "\n";
          throw InvalidArgument(msg);
        }
        RunOutcome out;
        {
          py::gil_scoped_release release;
          out = run(parsed.config);
        }
        if (out.exit_code != 0) throw InvalidArgument(out.message);
        return out.summary.dump();
      },
      py::arg("config_json"),
      "Runs an experiment configuration and returns the JSON summary as a string.");
}
