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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "muclab/channel.hpp"
#include "muclab/estimator.hpp"

namespace muclab {

enum class Kind { kLearn, kMseSweep, kConcentration, kFisherAudit, kConcatAudit, kBound };

std::string_view kind_name(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);
const std::vector<Kind>& all_kinds();

/// Channel specification file:
///
///   {
///     "d_channel": 2,
///     "r": 4,                                  // required with "haar"
///     "unitaries": "haar" | [ U_1, ..., U_r ], // U_a = rows of [re, im] pairs
///     "theta": [0.1, ...] | "uniform" | "dirichlet",
///     "seed": 7                                // stream for Haar / Dirichlet draws
///   }
///
/// "theta" defaults to "uniform" for Haar unitaries and is required otherwise.
/// "seed" defaults to the experiment root seed.
struct ChannelSpec {
  std::optional<std::size_t> d_channel;
  std::optional<std::size_t> r;
  bool haar = true;
  std::vector<ComplexMatrix> unitaries;
  std::optional<std::string> theta_mode;
  std::optional<std::vector<double>> theta_values;
  std::optional<std::uint64_t> seed;
};

struct ExperimentConfig {
  Kind kind = Kind::kLearn;
  std::optional<ChannelSpec> channel;

  // learn / mse_sweep
  std::optional<std::uint64_t> n;
  std::vector<std::uint64_t> n_values;
  std::size_t trials = 1;
  EstimatorOptions estimator;

  // concentration (falls back to the channel spec) and bound
  std::optional<std::size_t> d_channel;
  std::optional<std::size_t> r;
  std::optional<std::size_t> d;
  std::size_t k = 1;
  std::optional<double> epsilon;
  std::optional<double> trace_fisher;

  // fisher_audit / concat_audit
  std::size_t protocols = 0;
  std::vector<std::size_t> d_channel_values;
  std::vector<std::size_t> r_values;
  std::vector<std::size_t> k_values;

  std::uint64_t root_seed = 0;
  std::filesystem::path output_path = ".";
  unsigned threads = 1;
  std::size_t rank_cap = muclab::rank_cap();
};

/// A configuration problem, naming the offending field.
struct Problem {
  std::string field;
  std::string message;
};

struct ParseResult {
  ExperimentConfig config;
  std::vector<Problem> problems;
};

/// Reads a configuration object. Type errors become problems; defaults for
/// the kind (audit spaces, trial counts) are filled in.
ParseResult parse_config(const nlohmann::json& j);

/// Empty iff the configuration is runnable. Never throws.
std::vector<Problem> validate(const ExperimentConfig& config);

MixedUnitaryChannel build_channel(const ChannelSpec& spec, std::uint64_t default_seed);

struct RunOutcome {
  int exit_code = 0;
  std::string message;
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
  nlohmann::json summary;
};

/// Validates, runs, and writes <output_path>/<kind>.csv and
/// <output_path>/<kind>_summary.json. The CSV depends only on the config;
/// wall time is reported in the summary alone.
RunOutcome run(const ExperimentConfig& config);

/// CSV header for a kind (bit-exact).
std::string_view csv_header(Kind kind);

/// Fixed 17-significant-digit rendering used in every CSV.
std::string format_double(double v);

}  // namespace muclab
