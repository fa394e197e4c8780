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

// muclab <kind> [--config file.json] [--seed n] [--out dir] [--threads n] [flags]
//
// Flags override values loaded from --config. Writes <out>/<kind>.csv and
// <out>/<kind>_summary.json.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "muclab/harness.hpp"

namespace {

using nlohmann::json;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;

  std::optional<std::size_t> d_channel;
  std::optional<std::size_t> r;
  std::optional<std::string> theta;
  std::optional<std::uint64_t> channel_seed;

  std::optional<std::uint64_t> n;
  std::vector<std::uint64_t> n_values;
  std::optional<std::size_t> trials;
  std::optional<std::string> sampling_path;
  bool project = false;
  std::optional<double> pinv_cutoff;

  std::optional<std::size_t> k;
  std::optional<std::size_t> d;
  std::optional<double> epsilon;
  std::optional<double> trace_fisher;

  std::optional<std::size_t> protocols;
  std::vector<std::size_t> d_channel_values;
  std::vector<std::size_t> r_values;
  std::vector<std::size_t> k_values;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "root seed (default 0)");
  sub->add_option("--out", f.out, "output directory (default .)");
  sub->add_option("--threads", f.threads, "maximum worker threads")->check(CLI::PositiveNumber);
}

void add_channel(CLI::App* sub, Flags& f) {
  sub->add_option("--d-channel", f.d_channel, "channel dimension");
  sub->add_option("--r", f.r, "channel rank (number of Haar unitaries)");
  sub->add_option("--theta", f.theta, "uniform | dirichlet | comma-separated weights");
  sub->add_option("--channel-seed", f.channel_seed, "seed for the channel's random draws");
}

void add_estimator(CLI::App* sub, Flags& f) {
  sub->add_option("--sampling-path", f.sampling_path, "categorical_from_K | full_born");
  sub->add_flag("--project-to-simplex", f.project, "also report the simplex projection");
  sub->add_option("--pinv-cutoff", f.pinv_cutoff, "relative singular-value cutoff for K^+");
}

void add_audit(CLI::App* sub, Flags& f) {
  sub->add_option("--protocols", f.protocols, "number of random protocols");
  sub->add_option("--d-channel-values", f.d_channel_values, "channel dimensions to draw from")
      ->delimiter(',');
  sub->add_option("--r-values", f.r_values, "ranks to draw from")->delimiter(',');
  sub->add_option("--k-values", f.k_values, "concatenation depths to draw from")->delimiter(',');
}

json theta_json(const std::string& text) {
  if (text == "uniform" || text == "dirichlet") return text;
  json out = json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

json overlay(json base, const std::string& kind, const Flags& f) {
  if (!base.is_object()) base = json::object();
  base["kind"] = kind;
  if (f.seed) base["seed"] = *f.seed;
  if (f.out) base["output_path"] = *f.out;
  if (f.threads) base["threads"] = *f.threads;

  bool channel_kind = kind == "learn" || kind == "mse_sweep";
  if (channel_kind) {
    json& ch = base["channel"];
    if (!ch.is_object()) ch = json::object();
    if (f.d_channel) ch["d_channel"] = *f.d_channel;
    if (f.r) ch["r"] = *f.r;
    if (f.theta) ch["theta"] = theta_json(*f.theta);
    if (f.channel_seed) ch["seed"] = *f.channel_seed;
    if (!ch.contains("unitaries")) ch["unitaries"] = "haar";
  } else {
    if (f.d_channel) base["d_channel"] = *f.d_channel;
    if (f.r) base["r"] = *f.r;
  }
  if (f.n) base["N"] = *f.n;
  if (!f.n_values.empty()) base["N_values"] = f.n_values;
  if (f.trials) base["trials"] = *f.trials;
  if (f.sampling_path) base["sampling_path"] = *f.sampling_path;
  if (f.project) base["project_to_simplex"] = true;
  if (f.pinv_cutoff) base["pseudo_inverse_cutoff"] = *f.pinv_cutoff;
  if (f.k) base["k"] = *f.k;
  if (f.d) base["d"] = *f.d;
  if (f.epsilon) base["epsilon"] = *f.epsilon;
  if (f.trace_fisher) base["trace_fisher"] = *f.trace_fisher;
  if (f.protocols) base["protocols"] = *f.protocols;
  if (!f.d_channel_values.empty()) base["d_channel_values"] = f.d_channel_values;
  if (!f.r_values.empty()) base["r_values"] = f.r_values;
  if (!f.k_values.empty()) base["k_values"] = f.k_values;
  return base;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  return json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for learning mixed unitary channels"};
  app.require_subcommand(1);
  Flags flags;

  std::map<std::string, CLI::App*> subs;
  auto* learn = app.add_subcommand("learn", "run the PGM estimator once");
  add_common(learn, flags);
  add_channel(learn, flags);
  add_estimator(learn, flags);
  learn->add_option("--N", flags.n, "number of channel uses");
  subs["learn"] = learn;

  auto* sweep = app.add_subcommand("mse_sweep", "estimator MSE against N");
  add_common(sweep, flags);
  add_channel(sweep, flags);
  add_estimator(sweep, flags);
  sweep->add_option("--N-values", flags.n_values, "sample sizes")->delimiter(',');
  sweep->add_option("--trials", flags.trials, "trials per N");
  subs["mse_sweep"] = sweep;

  auto* conc = app.add_subcommand("concentration", "diagonal of K for Haar ensembles");
  add_common(conc, flags);
  conc->add_option("--d-channel", flags.d_channel, "channel dimension");
  conc->add_option("--r", flags.r, "number of Haar unitaries (<= d_channel^2)");
  conc->add_option("--trials", flags.trials, "number of Haar ensembles");
  subs["concentration"] = conc;

  auto* fa = app.add_subcommand("fisher_audit", "trace bound of random non-concatenating protocols");
  add_common(fa, flags);
  add_audit(fa, flags);
  subs["fisher_audit"] = fa;

  auto* ca = app.add_subcommand("concat_audit", "trace bound of random concatenating protocols");
  add_common(ca, flags);
  add_audit(ca, flags);
  subs["concat_audit"] = ca;

  auto* bound = app.add_subcommand("bound", "reference-scale sample-count lower bound");
  add_common(bound, flags);
  bound->add_option("--r", flags.r, "channel rank");
  bound->add_option("--d", flags.d, "probe dimension");
  bound->add_option("--k", flags.k, "concatenation depth");
  bound->add_option("--epsilon", flags.epsilon, "target RMS error");
  bound->add_option("--trace-fisher", flags.trace_fisher, "measured Fisher trace");
  subs["bound"] = bound;

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "check a configuration file without running it");
  val->add_option("config", validate_path, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (val->parsed()) {
      muclab::ParseResult parsed = muclab::parse_config(load_config(validate_path));
      auto problems = parsed.problems;
      if (problems.empty()) problems = muclab::validate(parsed.config);
      for (const auto& p : problems) std::cerr << p.field << ": " << p.message << "\n";
      if (problems.empty()) std::cout << "ok\n";
      return problems.empty() ? 0 : 2;
    }

    for (const auto& [kind, sub] : subs) {
      if (!sub->parsed()) continue;
      json cfg = overlay(load_config(flags.config_path), kind, flags);
      muclab::ParseResult parsed = muclab::parse_config(cfg);
      if (!parsed.problems.empty()) {
        for (const auto& p : parsed.problems) std::cerr << p.field << ": " << p.message << "\n";
        return 2;
      }
      muclab::RunOutcome outcome = muclab::run(parsed.config);
      if (outcome.exit_code != 0) {
        std::cerr << outcome.message;
        if (!outcome.message.empty() && outcome.message.back() != '\n') std::cerr << "\n";
        return outcome.exit_code;
      }
      std::cout << "wrote " << outcome.csv_path.string() << " and "
                << outcome.summary_path.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
