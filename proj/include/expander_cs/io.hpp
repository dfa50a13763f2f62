// Copyright 2026 The expander-cs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "expander_cs/bench.hpp"
#include "expander_cs/field.hpp"
#include "expander_cs/graph.hpp"
#include "expander_cs/noise.hpp"
#include "expander_cs/solve.hpp"
#include "expander_cs/verify.hpp"

namespace xcs::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kLibraryVersion = "0.1.0";

// Doubles are written in shortest round-trip form; non-finite values as null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

inline Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

inline json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  return json::parse(in);
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path.string());
  out << text;
}

// ---- graphs ----

inline json to_json(const BipartiteGraph& g) {
  json j;
  j["p"] = g.p();
  j["n"] = g.n();
  j["d"] = g.d();
  j["provenance"] = g.provenance();
  j["neighbors"] = g.adjacency();
  return j;
}

inline BipartiteGraph graph_from_json(const json& j) {
  auto nbrs = j.at("neighbors").get<std::vector<std::vector<std::uint32_t>>>();
  if (nbrs.size() != j.at("p").get<std::size_t>()) throw std::domain_error("neighbors length differs from p");
  return BipartiteGraph(j.at("n").get<std::size_t>(), j.at("d").get<std::size_t>(), std::move(nbrs),
                        j.value("provenance", std::string()));
}

// Construction spec: {"construct": "random", p, d, n, seed} or
// {"construct": "pv", q, l, m, h}.
inline BipartiteGraph construct_graph(const json& spec) {
  const std::string kind = spec.at("construct").get<std::string>();
  if (kind == "random")
    return random_left_regular(spec.at("p").get<std::size_t>(), spec.at("d").get<std::size_t>(),
                               spec.at("n").get<std::size_t>(), spec.value("seed", std::uint64_t{0}));
  if (kind == "pv")
    return pv_expander(GaloisField(FieldSpec::of_order(spec.at("q").get<std::uint32_t>())),
                       spec.at("l").get<std::uint32_t>(), spec.at("m").get<std::uint32_t>(),
                       spec.at("h").get<std::uint64_t>());
  throw std::invalid_argument("unknown construction '" + kind + "'");
}

// A design is either a path to a graph file (relative paths resolve against
// base_dir) or an inline construction spec / graph object.
inline BipartiteGraph load_design(const json& design, const std::filesystem::path& base_dir) {
  if (design.is_string()) {
    std::filesystem::path path = design.get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    return graph_from_json(read_file(path));
  }
  if (design.contains("construct")) return construct_graph(design);
  return graph_from_json(design);
}

// ---- verification reports ----

inline json to_json(const VerificationReport& r) {
  json j;
  j["condition"] = r.condition;
  j["ok"] = r.ok;
  j["worst_ratio"] = number(r.worst_ratio);
  if (auto* s = std::get_if<SubsetWitness>(&r.witness)) j["witness"] = *s;
  else if (auto* v = std::get_if<VectorWitness>(&r.witness)) {
    json arr = json::array();
    for (double x : *v) arr.push_back(number(x));
    j["witness"] = arr;
  } else j["witness"] = nullptr;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  return j;
}

// ---- noise ----

// {"sigma": s, "model": "iid" | "ar1" | "explicit", "rho": r, "matrix": [[..]]}
inline NoiseModel noise_from_json(const json& j, std::size_t n) {
  const double sigma = j.value("sigma", 1.0);
  const std::string model = j.value("model", std::string("iid"));
  if (model == "iid") return NoiseModel::iid(n, sigma);
  if (model == "ar1") return NoiseModel::ar1(n, sigma, j.at("rho").get<double>());
  if (model == "explicit") {
    const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd C(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows.size()) throw std::domain_error("correlation matrix must be square");
      for (std::size_t c = 0; c < rows.size(); ++c) C(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
    }
    if (rows.size() != n) throw std::domain_error("correlation matrix size differs from n");
    return NoiseModel::explicit_correlation(sigma, C);
  }
  throw std::invalid_argument("unknown noise model '" + model + "'");
}

inline json to_json(const NoiseModel& m) {
  json j;
  j["sigma"] = m.sigma();
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IidCorrelation>) j["model"] = "iid";
        else if constexpr (std::is_same_v<T, Ar1Correlation>) {
          j["model"] = "ar1";
          j["rho"] = c.rho;
        } else {
          j["model"] = "explicit";
          json rows = json::array();
          for (Eigen::Index r = 0; r < c.matrix->rows(); ++r) {
            json row = json::array();
            for (Eigen::Index k = 0; k < c.matrix->cols(); ++k) row.push_back((*c.matrix)(r, k));
            rows.push_back(row);
          }
          j["matrix"] = rows;
        }
      },
      m.correlation());
  return j;
}

inline json to_json(const Thresholds& t) {
  return json{{"sigma", t.sigma}, {"n", t.n},           {"t", t.t},
              {"lambda", t.lambda}, {"lambda_t", t.lambda_t}, {"eta_n", t.eta_n},
              {"high_probability", t.high_probability}};
}

inline json to_json(const NoiseBoundReport& r) {
  return json{{"frequency", r.frequency},
              {"bound", r.bound},
              {"pass", r.pass},
              {"standard_error", r.standard_error},
              {"trials", r.trials},
              {"lambda_t", r.lambda_t},
              {"non_amplification_violations", r.non_amplification_violations}};
}

// ---- experiment configuration ----

// {design, target: {kind, s}, noise: {...}, lambda_multiple, trials, seed}
struct ExperimentConfig {
  BipartiteGraph graph;
  TargetSpec target;
  json noise;
  double lambda_multiple;
  std::uint64_t trials;
  std::uint64_t seed;
};

inline ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  BipartiteGraph g = load_design(j.at("design"), base_dir);
  TargetSpec target;
  const json& t = j.at("target");
  const std::string kind = t.value("kind", std::string("exact-sparse"));
  if (kind == "exact-sparse") target.kind = TargetKind::exact_sparse;
  else if (kind == "compressible") target.kind = TargetKind::compressible;
  else throw std::invalid_argument("unknown target kind '" + kind + "'");
  target.s = t.at("s").get<std::size_t>();
  return ExperimentConfig{std::move(g),
                          target,
                          j.value("noise", json::object()),
                          j.value("lambda_multiple", 6.0),
                          j.value("trials", std::uint64_t{100}),
                          j.value("seed", std::uint64_t{0})};
}

inline RecoveryInstance make_instance(const ExperimentConfig& cfg) {
  NoiseModel model = noise_from_json(cfg.noise, cfg.graph.n());
  return RecoveryInstance::make(DesignMatrix::from_graph(cfg.graph), cfg.target, model.sigma(), model.correlation(),
                                cfg.lambda_multiple, cfg.seed);
}

// ---- problems and solutions ----

// {"estimator": "lasso"|"dantzig"|"basis_pursuit"|"ols", "design": ...,
//  "y": [...], "lambda": x, "support": [...]}
struct Problem {
  std::string estimator;
  BipartiteGraph graph;
  Eigen::VectorXd y;
  double lambda = 0.0;
  std::vector<std::size_t> support;
};

inline Problem problem_from_json(const json& j, const std::filesystem::path& base_dir) {
  Problem pr{j.at("estimator").get<std::string>(), load_design(j.at("design"), base_dir), vector_from_json(j.at("y")),
             j.value("lambda", 0.0), j.value("support", std::vector<std::size_t>{})};
  if (static_cast<std::size_t>(pr.y.size()) != pr.graph.n()) throw std::domain_error("y length differs from n");
  return pr;
}

inline json to_json(const LassoSolution& s) {
  return json{{"estimator", "lasso"},         {"beta", vector_to_json(s.beta)},
              {"objective", number(s.objective)}, {"kkt_residual", number(s.kkt_residual)},
              {"iterations", s.iterations},   {"converged", s.converged}};
}

inline json to_json(const DantzigSolution& s) {
  return json{{"estimator", "dantzig"},        {"beta", vector_to_json(s.beta)},
              {"objective", number(s.l1_norm)}, {"slack", number(s.slack)},
              {"status", to_string(s.status)}, {"pivots", s.pivots}};
}

// ---- bench reports ----

inline json to_json(const ExperimentReport& rep) {
  json checks = json::array();
  for (std::size_t c = 0; c < rep.check_names.size(); ++c)
    checks.push_back({{"name", rep.check_names[c]},
                      {"holds_fraction", rep.holds_fraction(c)},
                      {"holds_on_event", rep.holds_on_event(c)},
                      {"worst_event_slack", number(rep.worst_slack(c))}});
  json records = json::array();
  for (const auto& r : rep.records) {
    json jr{{"trial", r.trial},
            {"event", r.event},
            {"sup_xtz", number(r.sup_xtz)},
            {"solved", r.solved},
            {"prediction_error", number(r.prediction_error)},
            {"off_support_error", number(r.off_support_error)},
            {"off_support_mass", number(r.off_support_mass)}};
    for (std::size_t c = 0; c < rep.check_names.size(); ++c)
      jr[rep.check_names[c]] = {{"lhs", number(r.checks[c].lhs)}, {"rhs", number(r.checks[c].rhs)},
                                {"holds", r.checks[c].holds()}};
    records.push_back(jr);
  }
  return json{{"estimator", rep.estimator},
              {"lambda", number(rep.lambda)},
              {"noise_level", number(rep.noise_level)},
              {"eta_n", number(rep.eta_n)},
              {"trials", rep.records.size()},
              {"unsolved", rep.unsolved()},
              {"event_frequency", rep.event_frequency()},
              {"event_frequency_ok", rep.event_frequency_ok()},
              {"conditional_ok", rep.conditional_ok()},
              {"checks", checks},
              {"records", records}};
}

inline json to_json(const OlsComparison& c) {
  json j{{"trials", c.trials},
         {"mean_ols_error", number(c.mean_ols_error)},
         {"expected", number(c.expected)},
         {"relative_deviation", number(c.relative_deviation)},
         {"comparison_trials", c.comparison_trials},
         {"mean_lasso_error", number(c.mean_lasso_error)},
         {"mean_dantzig_error", number(c.mean_dantzig_error)},
         {"lasso_ratio", number(c.lasso_ratio)},
         {"dantzig_ratio", number(c.dantzig_ratio)},
         {"rho_line", number(c.rho_line)},
         {"tau_line", number(c.tau_line)}};
  if (c.factors) j["factors"] = {{"rho", c.factors->rho}, {"tau", c.factors->tau}};
  return j;
}

inline json to_json(const MvseRow& r) {
  return json{{"p", r.p},
              {"s", r.s},
              {"n", r.n},
              {"d", r.d},
              {"certification", r.certification},
              {"proxy", number(r.proxy)},
              {"bound", number(r.bound)},
              {"event_trials", r.event_trials},
              {"unsolved", r.unsolved}};
}

inline void write_mvse_csv(std::ostream& os, const std::vector<MvseRow>& rows) {
  os << "p,s,n,d,certification,proxy,bound,event_trials,unsolved\n";
  const auto old = os.precision(17);
  for (const auto& r : rows)
    os << r.p << ',' << r.s << ',' << r.n << ',' << r.d << ',' << r.certification << ',' << r.proxy << ','
       << r.bound << ',' << r.event_trials << ',' << r.unsolved << '\n';
  os.precision(old);
}

// ---- manifest ----

inline json manifest(const std::string& command, const std::vector<std::string>& argv, const json& parameters,
                     const json& seeds, const json& outputs, int exit_code) {
  return json{{"tool", "xcs"},
              {"version", kLibraryVersion},
              {"command", command},
              {"argv", argv},
              {"parameters", parameters},
              {"seeds", seeds},
              {"outputs", outputs},
              {"exit_code", exit_code}};
}

}  // namespace xcs::io
