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

#include "muclab/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

using namespace muclab;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("muclab_harness_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_problem(const std::vector<Problem>& ps, const std::string& field, const std::string& word) {
  for (const auto& p : ps)
    if (p.field == field && p.message.find(word) != std::string::npos) return true;
  return false;
}

std::vector<Problem> problems_of(const json& j) {
  ParseResult pr = parse_config(j);
  if (!pr.problems.empty()) return pr.problems;
  return validate(pr.config);
}

json pauli_unitaries() {
  json id = {{{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}};
  json x = {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
  return json::array({id, x});
}

RunOutcome run_json(json j) {
  ParseResult pr = parse_config(j);
  EXPECT_TRUE(pr.problems.empty());
  return run(pr.config);
}

}  // namespace

TEST(csv_header, exact_strings) {
  EXPECT_EQ(csv_header(Kind::kMseSweep), "kind,seed,d_channel,r,k,N,trial,sq_error");
  EXPECT_EQ(csv_header(Kind::kConcentration), "kind,seed,d_channel,r,trial,min_kii,mean_kii,lambda_min_k");
  EXPECT_EQ(csv_header(Kind::kFisherAudit), "kind,seed,d_channel,r,k,trace_fisher,bound,slack,satisfied");
  EXPECT_EQ(csv_header(Kind::kConcatAudit), csv_header(Kind::kFisherAudit));
  EXPECT_EQ(csv_header(Kind::kLearn), "kind,seed,d_channel,r,N,index,theta_true,theta_hat");
  EXPECT_EQ(csv_header(Kind::kBound), "kind,r,d,k,epsilon,trace_fisher,lower_bound");
}

TEST(format_double, seventeen_digits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(kinds, round_trip_names) {
  for (Kind k : all_kinds()) EXPECT_EQ(parse_kind(kind_name(k)), k);
  EXPECT_FALSE(parse_kind("plots").has_value());
}

TEST(validate, explicit_unitaries_need_theta) {
  json j = {{"kind", "learn"}, {"N", 10}, {"channel", {{"d_channel", 2}, {"unitaries", pauli_unitaries()}}}};
  EXPECT_TRUE(has_problem(problems_of(j), "theta", "required"));
  j["channel"]["theta"] = {0.5, 0.5};
  EXPECT_TRUE(problems_of(j).empty());
  j["channel"]["theta"] = {0.5, 0.6};
  EXPECT_FALSE(problems_of(j).empty());
}

TEST(validate, haar_defaults_to_uniform_theta) {
  json j = {{"kind", "learn"}, {"N", 10}, {"channel", {{"d_channel", 2}, {"r", 3}, {"unitaries", "haar"}}}};
  EXPECT_TRUE(problems_of(j).empty());
}

TEST(validate, rank_cap_names_the_cap) {
  json j = {{"kind", "concat_audit"}, {"r_values", {2}}, {"k_values", {13}}};
  EXPECT_TRUE(has_problem(problems_of(j), "k_values", "4096"));
  j["rank_cap"] = 10000;
  EXPECT_TRUE(problems_of(j).empty());
}

TEST(validate, concentration_regime) {
  json j = {{"kind", "concentration"}, {"d_channel", 2}, {"r", 5}, {"trials", 3}};
  EXPECT_TRUE(has_problem(problems_of(j), "r", "regime"));
  j["r"] = 4;
  EXPECT_TRUE(problems_of(j).empty());
}

TEST(validate, type_errors_and_unknown_kind) {
  EXPECT_FALSE(problems_of(json{{"kind", "nope"}}).empty());
  EXPECT_FALSE(problems_of(json{{"kind", "bound"}, {"r", "four"}}).empty());
  EXPECT_FALSE(problems_of(json::array()).empty());
  EXPECT_TRUE(has_problem(problems_of(json{{"kind", "bound"}, {"d", 2}, {"epsilon", 0.1}}), "r", "required"));
  EXPECT_FALSE(problems_of(json{{"kind", "fisher_audit"}, {"k_values", {2}}}).empty());
}

TEST(run, bound_summary) {
  auto dir = scratch("bound");
  RunOutcome out = run_json({{"kind", "bound"}, {"r", 4}, {"d", 2}, {"k", 1}, {"epsilon", 0.1},
                             {"output_path", dir.string()}});
  ASSERT_EQ(out.exit_code, 0) << out.message;
  EXPECT_NEAR(out.summary["reference_lower_bound"].get<double>(), 200.0, 1e-9);
  std::string csv = slurp(dir / "bound.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header(Kind::kBound));
  EXPECT_TRUE(std::filesystem::exists(dir / "bound_summary.json"));
}

TEST(run, invalid_config_exits_two) {
  ParseResult pr = parse_config({{"kind", "bound"}, {"r", 4}});
  RunOutcome out = run(pr.config);
  EXPECT_EQ(out.exit_code, 2);
  EXPECT_NE(out.message.find("epsilon"), std::string::npos);
}

TEST(run, learn_with_explicit_unitaries) {
  auto dir = scratch("learn");
  RunOutcome out = run_json({{"kind", "learn"}, {"N", 100000}, {"seed", 4},
                             {"channel", {{"d_channel", 2}, {"unitaries", pauli_unitaries()}, {"theta", {0.3, 0.7}}}},
                             {"output_path", dir.string()}});
  ASSERT_EQ(out.exit_code, 0) << out.message;
  auto th = out.summary["theta_hat"].get<std::vector<double>>();
  ASSERT_EQ(th.size(), 2u);
  EXPECT_NEAR(th[0], 0.3, 0.01);
  EXPECT_NEAR(th[1], 0.7, 0.01);
}

TEST(run, outputs_are_deterministic_per_kind) {
  std::vector<json> configs = {
      {{"kind", "learn"}, {"N", 1000}, {"channel", {{"d_channel", 2}, {"r", 3}, {"unitaries", "haar"}, {"theta", "dirichlet"}}}},
      {{"kind", "mse_sweep"}, {"N_values", {100, 1000}}, {"trials", 5},
       {"channel", {{"d_channel", 2}, {"r", 3}, {"unitaries", "haar"}}}},
      {{"kind", "concentration"}, {"d_channel", 2}, {"r", 4}, {"trials", 4}},
      {{"kind", "fisher_audit"}, {"protocols", 10}, {"d_channel_values", {2}}, {"r_values", {2, 3}}},
      {{"kind", "concat_audit"}, {"protocols", 5}},
      {{"kind", "bound"}, {"r", 3}, {"d", 2}, {"epsilon", 0.05}, {"trace_fisher", 5.0}},
  };
  for (auto cfg : configs) {
    std::string kind = cfg["kind"];
    cfg["seed"] = 17;
    cfg["threads"] = 2;
    auto a = scratch(kind + "_a"), b = scratch(kind + "_b");
    cfg["output_path"] = a.string();
    RunOutcome ra = run_json(cfg);
    cfg["output_path"] = b.string();
    cfg["threads"] = 1;
    RunOutcome rb = run_json(cfg);
    ASSERT_EQ(ra.exit_code, 0) << kind << ": " << ra.message;
    ASSERT_EQ(rb.exit_code, 0) << kind << ": " << rb.message;
    std::string csv = slurp(a / (kind + ".csv"));
    EXPECT_EQ(csv, slurp(b / (kind + ".csv"))) << kind;
    EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header(*parse_kind(kind))) << kind;
  }
}

TEST(run, audits_satisfy_the_bound) {
  auto dir = scratch("audit");
  RunOutcome out = run_json({{"kind", "fisher_audit"}, {"protocols", 20}, {"output_path", dir.string()}});
  ASSERT_EQ(out.exit_code, 0) << out.message;
  EXPECT_TRUE(out.summary["all_satisfied"].get<bool>());
  EXPECT_EQ(out.summary["reports"].size(), 20u);
}
