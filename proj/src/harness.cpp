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

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "muclab/audit.hpp"
#include "muclab/errors.hpp"
#include "muclab/fisher.hpp"

namespace muclab {

using nlohmann::json;

namespace {

constexpr std::string_view kLearnHeader = "kind,seed,d_channel,r,N,index,theta_true,theta_hat";
constexpr std::string_view kMseHeader = "kind,seed,d_channel,r,k,N,trial,sq_error";
constexpr std::string_view kConcentrationHeader =
    "kind,seed,d_channel,r,trial,min_kii,mean_kii,lambda_min_k";
constexpr std::string_view kAuditHeader =
    "kind,seed,d_channel,r,k,trace_fisher,bound,slack,satisfied";
constexpr std::string_view kBoundHeader = "kind,r,d,k,epsilon,trace_fisher,lower_bound";

// Reads typed fields out of a JSON object, recording type errors as problems.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string prefix, std::vector<Problem>& problems)
      : obj_(obj), prefix_(std::move(prefix)), problems_(problems) {}

  bool has(const char* key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

  template <typename T>
  std::optional<T> get(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = obj_.at(key);
    if constexpr (std::is_same_v<T, std::string>) {
      if (v.is_string()) return v.get<std::string>();
      fail(key, "expected a string");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (v.is_boolean()) return v.get<bool>();
      fail(key, "expected a boolean");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (v.is_number()) return v.get<T>();
      fail(key, "expected a number");
    } else {
      if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        return static_cast<T>(v.get<std::uint64_t>());
      }
      fail(key, "expected a non-negative integer");
    }
    return std::nullopt;
  }

  template <typename T>
  std::optional<std::vector<T>> get_list(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = obj_.at(key);
    if (!v.is_array()) {
      fail(key, "expected a list");
      return std::nullopt;
    }
    std::vector<T> out;
    for (const auto& e : v) {
      if constexpr (std::is_floating_point_v<T>) {
        if (!e.is_number()) {
          fail(key, "expected a list of numbers");
          return std::nullopt;
        }
        out.push_back(e.get<T>());
      } else {
        if (!(e.is_number_unsigned() || (e.is_number_integer() && e.get<std::int64_t>() >= 0))) {
          fail(key, "expected a list of non-negative integers");
          return std::nullopt;
        }
        out.push_back(static_cast<T>(e.get<std::uint64_t>()));
      }
    }
    return out;
  }

  void fail(const std::string& key, const std::string& msg) {
    problems_.push_back({prefix_ + key, msg});
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<Problem>& problems_;
};

std::optional<ComplexMatrix> parse_matrix(const json& m) {
  if (!m.is_array() || m.empty()) return std::nullopt;
  auto rows = static_cast<Eigen::Index>(m.size());
  if (!m.front().is_array()) return std::nullopt;
  auto cols = static_cast<Eigen::Index>(m.front().size());
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = m.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) return std::nullopt;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& e = row.at(static_cast<std::size_t>(j));
      if (e.is_number()) {
        out(i, j) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        out(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        return std::nullopt;
      }
    }
  }
  return out;
}

ChannelSpec parse_channel(const json& j, std::vector<Problem>& problems) {
  ChannelSpec spec;
  if (!j.is_object()) {
    problems.push_back({"channel", "expected an object"});
    return spec;
  }
  FieldReader f(j, "channel.", problems);
  spec.d_channel = f.get<std::size_t>("d_channel");
  spec.r = f.get<std::size_t>("r");
  spec.seed = f.get<std::uint64_t>("seed");
  if (f.has("unitaries")) {
    const json& u = j.at("unitaries");
    if (u.is_string()) {
      if (u.get<std::string>() == "haar") {
        spec.haar = true;
      } else {
        f.fail("unitaries", "expected \"haar\" or a list of matrices");
      }
    } else if (u.is_array()) {
      spec.haar = false;
      for (std::size_t a = 0; a < u.size(); ++a) {
        auto m = parse_matrix(u[a]);
        if (!m) {
          f.fail("unitaries", "matrix " + std::to_string(a) +
                                  " is not a rectangular list of rows of [re, im] pairs");
          break;
        }
        spec.unitaries.push_back(std::move(*m));
      }
    } else {
      f.fail("unitaries", "expected \"haar\" or a list of matrices");
    }
  }
  if (f.has("theta")) {
    const json& t = j.at("theta");
    if (t.is_string()) {
      spec.theta_mode = t.get<std::string>();
    } else {
      spec.theta_values = f.get_list<double>("theta");
    }
  }
  return spec;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::string_view header) { out_ << header << '\n'; }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  static std::string cell(std::string_view v) { return std::string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  template <typename T>
  static std::string cell(T v)
    requires std::is_integral_v<T>
  {
    return std::to_string(v);
  }

  std::ostringstream out_;
};

std::size_t effective_r(const ExperimentConfig& c) {
  if (c.r) return *c.r;
  if (c.channel && c.channel->r) return *c.channel->r;
  if (c.channel && !c.channel->haar) return c.channel->unitaries.size();
  return 0;
}

std::size_t effective_d_channel(const ExperimentConfig& c) {
  if (c.d_channel) return *c.d_channel;
  if (c.channel && c.channel->d_channel) return *c.channel->d_channel;
  return 0;
}

void validate_channel(const ChannelSpec& spec, std::vector<Problem>& out) {
  if (!spec.d_channel || *spec.d_channel == 0) {
    out.push_back({"channel.d_channel", "required, must be >= 1"});
    return;
  }
  std::size_t d = *spec.d_channel;
  std::size_t r = 0;
  if (spec.haar) {
    if (!spec.r || *spec.r == 0) {
      out.push_back({"channel.r", "required with \"haar\" unitaries, must be >= 1"});
      return;
    }
    r = *spec.r;
  } else {
    r = spec.unitaries.size();
    if (r == 0) {
      out.push_back({"channel.unitaries", "at least one unitary is required"});
      return;
    }
    if (spec.r && *spec.r != r) {
      out.push_back({"channel.r", "differs from the number of explicit unitaries"});
    }
    for (std::size_t a = 0; a < spec.unitaries.size(); ++a) {
      const ComplexMatrix& m = spec.unitaries[a];
      if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d) {
        out.push_back({"channel.unitaries", "matrix " + std::to_string(a) + " is not " +
                                                std::to_string(d) + "x" + std::to_string(d)});
        continue;
      }
      try {
        UnitaryMatrix u(m);
      } catch (const Error& e) {
        out.push_back({"channel.unitaries", "matrix " + std::to_string(a) + ": " + e.what()});
      }
    }
  }
  if (spec.theta_values) {
    if (spec.theta_values->size() != r) {
      out.push_back({"theta", "length " + std::to_string(spec.theta_values->size()) +
                                  " differs from rank " + std::to_string(r)});
    } else {
      try {
        ProbabilityVector p(Eigen::Map<const RealVector>(spec.theta_values->data(),
                                                         static_cast<Eigen::Index>(r)));
      } catch (const Error& e) {
        out.push_back({"theta", e.what()});
      }
    }
  } else if (spec.theta_mode) {
    if (*spec.theta_mode != "uniform" && *spec.theta_mode != "dirichlet") {
      out.push_back({"theta", "expected a list, \"uniform\" or \"dirichlet\""});
    }
  } else if (!spec.haar) {
    out.push_back({"theta", "required when unitaries are given explicitly"});
  }
}

json mse_summary(const std::vector<MseRecord>& records) {
  std::vector<MsePoint> points = summarize_mse(records);
  json pts = json::array();
  for (const auto& p : points) {
    pts.push_back({{"N", p.n},
                   {"trials", p.trials},
                   {"mean_sq_error", p.mean},
                   {"std_error", p.std_error},
                   {"reference_6_25_over_N", 6.25 / static_cast<double>(p.n)}});
  }
  json s{{"points", pts}};
  if (points.size() >= 2) s["loglog_slope"] = loglog_slope(points);
  return s;
}

}  // namespace

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::kLearn: return "learn";
    case Kind::kMseSweep: return "mse_sweep";
    case Kind::kConcentration: return "concentration";
    case Kind::kFisherAudit: return "fisher_audit";
    case Kind::kConcatAudit: return "concat_audit";
    case Kind::kBound: return "bound";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (Kind k : all_kinds()) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

const std::vector<Kind>& all_kinds() {
  static const std::vector<Kind> kinds{Kind::kLearn,       Kind::kMseSweep,
                                       Kind::kConcentration, Kind::kFisherAudit,
                                       Kind::kConcatAudit, Kind::kBound};
  return kinds;
}

std::string_view csv_header(Kind kind) {
  switch (kind) {
    case Kind::kLearn: return kLearnHeader;
    case Kind::kMseSweep: return kMseHeader;
    case Kind::kConcentration: return kConcentrationHeader;
    case Kind::kFisherAudit:
    case Kind::kConcatAudit: return kAuditHeader;
    case Kind::kBound: return kBoundHeader;
  }
  return {};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ParseResult parse_config(const json& j) {
  ParseResult res;
  auto& c = res.config;
  auto& problems = res.problems;
  if (!j.is_object()) {
    problems.push_back({"config", "expected a JSON object"});
    return res;
  }
  FieldReader f(j, "", problems);
  if (auto kind = f.get<std::string>("kind")) {
    if (auto k = parse_kind(*kind)) {
      c.kind = *k;
    } else {
      f.fail("kind", "unknown kind \"" + *kind + "\"");
    }
  } else {
    f.fail("kind", "required");
  }
  if (f.has("channel")) c.channel = parse_channel(j.at("channel"), problems);

  c.n = f.get<std::uint64_t>("N");
  if (auto v = f.get_list<std::uint64_t>("N_values")) c.n_values = *v;
  if (auto v = f.get<std::size_t>("trials")) c.trials = *v;
  c.d_channel = f.get<std::size_t>("d_channel");
  c.r = f.get<std::size_t>("r");
  c.d = f.get<std::size_t>("d");
  if (auto v = f.get<std::size_t>("k")) c.k = *v;
  c.epsilon = f.get<double>("epsilon");
  c.trace_fisher = f.get<double>("trace_fisher");
  if (auto v = f.get<std::size_t>("protocols")) c.protocols = *v;
  if (auto v = f.get_list<std::size_t>("d_channel_values")) c.d_channel_values = *v;
  if (auto v = f.get_list<std::size_t>("r_values")) c.r_values = *v;
  if (auto v = f.get_list<std::size_t>("k_values")) c.k_values = *v;
  if (auto v = f.get<std::uint64_t>("seed")) c.root_seed = *v;
  if (auto v = f.get<std::string>("output_path")) c.output_path = *v;
  if (auto v = f.get<std::size_t>("threads")) c.threads = static_cast<unsigned>(*v);
  if (auto v = f.get<std::size_t>("rank_cap")) c.rank_cap = *v;
  if (auto v = f.get<double>("pseudo_inverse_cutoff")) c.estimator.pseudo_inverse_cutoff = *v;
  if (auto v = f.get<bool>("project_to_simplex")) c.estimator.project_to_simplex = *v;
  if (auto v = f.get<std::string>("sampling_path")) {
    if (*v == "categorical_from_K") {
      c.estimator.sampling_path = SamplingPath::kCategoricalFromK;
    } else if (*v == "full_born") {
      c.estimator.sampling_path = SamplingPath::kFullBorn;
    } else {
      f.fail("sampling_path", "expected \"categorical_from_K\" or \"full_born\"");
    }
  }

  if (c.kind == Kind::kFisherAudit || c.kind == Kind::kConcatAudit) {
    AuditSpace defaults = c.kind == Kind::kFisherAudit ? default_fisher_audit_space()
                                                       : default_concat_audit_space();
    if (c.d_channel_values.empty() && !f.has("d_channel_values")) {
      c.d_channel_values = defaults.d_channel_values;
    }
    if (c.r_values.empty() && !f.has("r_values")) c.r_values = defaults.r_values;
    if (c.k_values.empty() && !f.has("k_values")) c.k_values = defaults.k_values;
    if (!f.has("protocols")) c.protocols = c.kind == Kind::kFisherAudit ? 200 : 50;
  }
  return res;
}

std::vector<Problem> validate(const ExperimentConfig& c) {
  std::vector<Problem> out;
  try {
    if (c.threads == 0) out.push_back({"threads", "must be >= 1"});
    if (c.rank_cap == 0) out.push_back({"rank_cap", "must be >= 1"});
    if (!(c.estimator.pseudo_inverse_cutoff > 0.0)) {
      out.push_back({"pseudo_inverse_cutoff", "must be > 0"});
    }
    switch (c.kind) {
      case Kind::kLearn:
      case Kind::kMseSweep: {
        if (!c.channel) {
          out.push_back({"channel", "required"});
        } else {
          validate_channel(*c.channel, out);
        }
        if (c.kind == Kind::kLearn) {
          if (!c.n || *c.n == 0) out.push_back({"N", "required, must be >= 1"});
        } else {
          if (c.n_values.empty()) out.push_back({"N_values", "at least one N is required"});
          for (auto n : c.n_values) {
            if (n == 0) out.push_back({"N_values", "every N must be >= 1"});
          }
          if (c.trials == 0) out.push_back({"trials", "must be >= 1"});
        }
        break;
      }
      case Kind::kConcentration: {
        std::size_t d = effective_d_channel(c);
        std::size_t r = effective_r(c);
        if (d == 0) out.push_back({"d_channel", "required, must be >= 1"});
        if (r == 0) out.push_back({"r", "required, must be >= 1"});
        if (d > 0 && r > d * d) {
          out.push_back({"r", "r = " + std::to_string(r) + " exceeds d_channel^2 = " +
                                  std::to_string(d * d) +
                                  "; the concentration experiment covers the regime r <= "
                                  "d_channel^2 only"});
        }
        if (c.trials == 0) out.push_back({"trials", "must be >= 1"});
        break;
      }
      case Kind::kFisherAudit:
      case Kind::kConcatAudit: {
        if (c.protocols == 0) out.push_back({"protocols", "must be >= 1"});
        if (c.d_channel_values.empty()) out.push_back({"d_channel_values", "must not be empty"});
        if (c.r_values.empty()) out.push_back({"r_values", "must not be empty"});
        if (c.k_values.empty()) out.push_back({"k_values", "must not be empty"});
        for (auto v : c.d_channel_values) {
          if (v == 0) out.push_back({"d_channel_values", "entries must be >= 1"});
        }
        for (auto v : c.r_values) {
          if (v == 0) out.push_back({"r_values", "entries must be >= 1"});
        }
        for (auto v : c.k_values) {
          if (v == 0) out.push_back({"k_values", "entries must be >= 1"});
        }
        if (c.kind == Kind::kFisherAudit) {
          for (auto v : c.k_values) {
            if (v != 1) out.push_back({"k_values", "fisher_audit is non-concatenating (k = 1)"});
          }
        }
        if (!c.r_values.empty() && !c.k_values.empty()) {
          std::size_t rmax = *std::max_element(c.r_values.begin(), c.r_values.end());
          std::size_t kmax = *std::max_element(c.k_values.begin(), c.k_values.end());
          if (rmax > 0 && kmax > 0) {
            try {
              checked_rank_power(rmax, kmax, c.rank_cap);
            } catch (const ResourceLimit&) {
              out.push_back({"k_values", "r^k = " + std::to_string(rmax) + "^" +
                                             std::to_string(kmax) + " exceeds the rank cap " +
                                             std::to_string(c.rank_cap)});
            }
          }
        }
        break;
      }
      case Kind::kBound: {
        if (!c.r || *c.r == 0) out.push_back({"r", "required, must be >= 1"});
        if (!c.d || *c.d == 0) out.push_back({"d", "required, must be >= 1"});
        if (c.k == 0) out.push_back({"k", "must be >= 1"});
        if (!c.epsilon || !(*c.epsilon > 0.0)) out.push_back({"epsilon", "required, must be > 0"});
        if (c.trace_fisher && !(*c.trace_fisher > 0.0)) {
          out.push_back({"trace_fisher", "must be > 0"});
        }
        break;
      }
    }
  } catch (const std::exception& e) {
    out.push_back({"config", std::string("validation failed: ") + e.what()});
  }
  return out;
}

MixedUnitaryChannel build_channel(const ChannelSpec& spec, std::uint64_t default_seed) {
  std::uint64_t seed = spec.seed.value_or(default_seed);
  Rng rng = make_stream(seed, {0x6368616eULL});  // "chan"
  std::size_t d = spec.d_channel.value_or(0);
  std::vector<UnitaryMatrix> us;
  if (spec.haar) {
    std::size_t r = spec.r.value_or(0);
    for (std::size_t a = 0; a < r; ++a) us.push_back(haar_unitary(d, rng));
  } else {
    for (const auto& m : spec.unitaries) us.emplace_back(m);
  }
  std::size_t r = us.size();
  if (r == 0) throw InvalidDimension("build_channel: rank must be >= 1");
  if (spec.theta_values) {
    RealVector w = Eigen::Map<const RealVector>(spec.theta_values->data(),
                                                static_cast<Eigen::Index>(spec.theta_values->size()));
    return MixedUnitaryChannel(std::move(us), ProbabilityVector(std::move(w)));
  }
  std::string mode = spec.theta_mode.value_or("uniform");
  if (mode == "dirichlet") {
    return MixedUnitaryChannel(std::move(us), ProbabilityVector::dirichlet(r, rng));
  }
  if (mode != "uniform") throw InvalidArgument("build_channel: unknown theta mode " + mode);
  return MixedUnitaryChannel(std::move(us), ProbabilityVector::uniform(r));
}

RunOutcome run(const ExperimentConfig& c) {
  RunOutcome res;
  std::vector<Problem> problems = validate(c);
  if (!problems.empty()) {
    res.exit_code = 2;
    for (const auto& p : problems) res.message += p.field + ": " + p.message + "\n";
    return res;
  }

  auto start = std::chrono::steady_clock::now();
  std::string name(kind_name(c.kind));
  CsvWriter csv(csv_header(c.kind));
  json summary{{"kind", name}, {"seed", c.root_seed}};

  try {
    switch (c.kind) {
      case Kind::kLearn: {
        MixedUnitaryChannel channel = build_channel(*c.channel, c.root_seed);
        std::uint64_t seed = trial_seed(c.root_seed, 0, 0);
        EstimateResult est = run_pgm_estimator(channel, *c.n, c.estimator, seed);
        for (std::size_t i = 0; i < channel.rank(); ++i) {
          csv.row(name, seed, channel.d_channel(), channel.rank(), *c.n, i, channel.theta()[i],
                  est.theta_hat(static_cast<Eigen::Index>(i)));
        }
        summary["d_channel"] = channel.d_channel();
        summary["r"] = channel.rank();
        summary["N"] = *c.n;
        summary["trial_seed"] = seed;
        summary["theta_hat"] = std::vector<double>(est.theta_hat.data(),
                                                   est.theta_hat.data() + est.theta_hat.size());
        if (est.theta_projected) {
          summary["theta_projected"] = std::vector<double>(
              est.theta_projected->data(), est.theta_projected->data() + est.theta_projected->size());
        }
        summary["counts"] = est.counts;
        summary["sq_error"] = *est.squared_error;
        summary["condition_number"] = est.condition_number;
        if (est.warning) summary["warning"] = *est.warning;
        break;
      }
      case Kind::kMseSweep: {
        MixedUnitaryChannel channel = build_channel(*c.channel, c.root_seed);
        std::vector<MseRecord> records =
            mse_curve(channel, c.n_values, c.trials, c.estimator, c.root_seed, c.threads);
        for (const auto& rec : records) {
          csv.row(name, rec.seed, channel.d_channel(), channel.rank(), std::size_t{1}, rec.n,
                  rec.trial, rec.sq_error);
        }
        summary["d_channel"] = channel.d_channel();
        summary["r"] = channel.rank();
        summary.update(mse_summary(records));
        break;
      }
      case Kind::kConcentration: {
        std::size_t d = effective_d_channel(c);
        std::size_t r = effective_r(c);
        DiagonalSummary s = min_diagonal_experiment(d, r, c.trials, c.root_seed, c.threads);
        for (const auto& t : s.trials) {
          csv.row(name, t.seed, d, r, t.trial, t.min_kii, t.mean_kii, t.lambda_min_k);
        }
        summary["d_channel"] = d;
        summary["r"] = r;
        summary["trials"] = c.trials;
        summary["fraction_min_kii_at_least_0_7"] = s.fraction_min_kii_above;
        summary["mean_of_mean_kii"] = s.mean_of_mean_kii;
        summary["std_error_mean_kii"] = s.std_error_mean_kii;
        summary["gerschgorin_checked"] = s.gerschgorin_checked;
        summary["gerschgorin_violations"] = s.gerschgorin_violations;
        break;
      }
      case Kind::kFisherAudit:
      case Kind::kConcatAudit: {
        AuditSpace space{c.d_channel_values, c.r_values, c.k_values};
        std::vector<AuditRecord> records = run_audit(space, c.protocols, c.root_seed, c.threads);
        json reports = json::array();
        bool all = true;
        double worst_row_max_excess = -std::numeric_limits<double>::infinity();
        for (const auto& a : records) {
          csv.row(name, a.seed, a.d_channel, a.r, a.k, a.report.trace_fisher, a.report.bound,
                  a.report.slack, a.report.satisfied);
          reports.push_back({{"protocol", a.descriptor()},
                             {"r", a.r},
                             {"d", a.d},
                             {"k", a.k},
                             {"trace", a.report.trace_fisher},
                             {"bound", a.report.bound},
                             {"slack", a.report.slack},
                             {"satisfied", a.report.satisfied},
                             {"row_max_sum", a.row_max_sum},
                             {"seed", a.seed}});
          all = all && a.report.satisfied;
          worst_row_max_excess =
              std::max(worst_row_max_excess, a.row_max_sum - static_cast<double>(a.d));
        }
        summary["protocols"] = c.protocols;
        summary["all_satisfied"] = all;
        summary["max_row_max_sum_minus_d"] = worst_row_max_excess;
        summary["reports"] = reports;
        break;
      }
      case Kind::kBound: {
        double lb = van_trees_lower_bound(*c.r, *c.d, c.k, *c.epsilon, c.trace_fisher);
        csv.row(name, *c.r, *c.d, c.k, *c.epsilon,
                c.trace_fisher ? format_double(*c.trace_fisher) : std::string(), lb);
        summary["r"] = *c.r;
        summary["d"] = *c.d;
        summary["k"] = c.k;
        summary["epsilon"] = *c.epsilon;
        if (c.trace_fisher) summary["trace_fisher"] = *c.trace_fisher;
        summary["reference_lower_bound"] = lb;
        summary["label"] = "reference scale (unit constant), not a certified bound";
        break;
      }
    }
  } catch (const Error& e) {
    res.exit_code = 1;
    res.message = e.what();
    return res;
  }

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary["wall_time_seconds"] = wall;

  std::filesystem::create_directories(c.output_path);
  res.csv_path = c.output_path / (name + ".csv");
  res.summary_path = c.output_path / (name + "_summary.json");
  write_atomically(res.csv_path, csv.str());
  write_atomically(res.summary_path, summary.dump(2) + "\n");
  res.summary = std::move(summary);
  return res;
}

}  // namespace muclab
