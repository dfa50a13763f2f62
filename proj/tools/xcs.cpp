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

// Command-line front end: construct | verify | solve | bench | noise-check.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.

#include <CLI11.hpp>

#include <expander_cs/io.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using xcs::io::json;
namespace fs = std::filesystem;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "auto";
};

// Result of one command: the payload text, the format it was rendered in,
// the parameters worth recording, and the verdict.
struct Outcome {
  std::string text;
  json parameters = json::object();
  json seeds = json::object();
  bool pass = true;
};

std::string resolve_format(const Globals& g, const char* fallback) {
  if (g.format == "auto") return fallback;
  return g.format;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string report_csv(const xcs::VerificationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "condition,ok,worst_ratio,trials,seed\n"
     << r.condition << ',' << r.ok << ',' << r.worst_ratio << ',' << r.trials << ',' << r.seed << '\n';
  return os.str();
}

template <class Map>
std::string flat_csv(const Map& j) {
  std::ostringstream head, row;
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_structured()) continue;
    head << (first ? "" : ",") << it.key();
    row << (first ? "" : ",") << (it.value().is_string() ? it.value().template get<std::string>() : it.value().dump());
    first = false;
  }
  return head.str() + "\n" + row.str() + "\n";
}

json read_json(const std::string& path) {
  try {
    return xcs::io::read_file(path);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
  std::size_t p = 0, d = 0, n = 0;
  std::uint32_t q = 0, l = 0, m = 0;
  std::uint64_t h = 0;
};

Outcome run_construct(const std::string& kind, const ConstructArgs& a, const Globals& g) {
  Outcome o;
  std::optional<xcs::BipartiteGraph> graph;
  if (kind == "random") {
    graph = xcs::random_left_regular(a.p, a.d, a.n, g.seed);
    o.parameters = {{"construct", "random"}, {"p", a.p}, {"d", a.d}, {"n", a.n}};
    o.seeds = {{"graph", g.seed}};
  } else {
    graph = xcs::pv_expander(xcs::GaloisField(xcs::FieldSpec::of_order(a.q)), a.l, a.m, a.h);
    o.parameters = {{"construct", "pv"}, {"q", a.q}, {"l", a.l}, {"m", a.m}, {"h", a.h}};
  }
  if (resolve_format(g, "json") == "csv") {
    std::ostringstream os;
    xcs::write_dense_csv(os, xcs::DesignMatrix::from_graph(*graph));
    o.text = os.str();
  } else {
    o.text = dump(xcs::io::to_json(*graph));
  }
  o.parameters["provenance"] = graph->provenance();
  return o;
}

// ------------------------------------------------------------------- verify

struct VerifyArgs {
  std::string graph;
  std::size_t s = 1;
  double eps = 0.125;
  std::string mode = "exhaustive";
  std::uint64_t trials = 10'000;
  std::uint64_t budget = xcs::kDefaultSubsetBudget;
};

Outcome run_verify(const VerifyArgs& a, const Globals& g) {
  const json gj = read_json(a.graph);
  const xcs::BipartiteGraph graph = xcs::io::graph_from_json(gj);
  const xcs::DesignMatrix X = xcs::DesignMatrix::from_graph(graph);
  xcs::VerificationReport rep;
  if (a.mode == "exhaustive") rep = xcs::check_expansion_exhaustive(graph, a.s, a.eps, {a.budget, false});
  else if (a.mode == "sampled") rep = xcs::check_expansion_sampled(graph, a.s, a.eps, a.trials, g.seed);
  else if (a.mode == "rip1") rep = xcs::check_rip1_sampled(X, a.s, a.eps, a.trials, g.seed);
  else if (a.mode == "up2") rep = xcs::check_up2_sampled(X, a.s, a.trials, g.seed);
  else if (a.mode == "h-condition") rep = xcs::check_h_condition_sampled(X, a.s, a.trials, g.seed);
  else if (a.mode == "kernel") rep = xcs::check_kernel_concentration(X, a.s, a.trials, g.seed);
  else rep = xcs::nullspace_property_oracle(X, a.s);
  Outcome o;
  o.pass = rep.ok;
  o.text = resolve_format(g, "json") == "csv" ? report_csv(rep) : dump(xcs::io::to_json(rep));
  o.parameters = {{"graph", a.graph}, {"graph_content", gj}, {"s", a.s},         {"eps", a.eps},
                  {"mode", a.mode},   {"trials", a.trials},  {"budget", a.budget}};
  o.seeds = {{"sampling", g.seed}};
  return o;
}

// -------------------------------------------------------------------- solve

Outcome run_solve(const std::string& problem_path, const Globals& g) {
  const json pj = read_json(problem_path);
  const xcs::io::Problem pr = xcs::io::problem_from_json(pj, fs::path(problem_path).parent_path());
  const xcs::DesignMatrix X = xcs::DesignMatrix::from_graph(pr.graph);
  Outcome o;
  json sol;
  if (pr.estimator == "lasso") {
    const auto s = xcs::lasso(X, pr.y, pr.lambda);
    sol = xcs::io::to_json(s);
    o.pass = s.converged;
  } else if (pr.estimator == "dantzig") {
    try {
      sol = xcs::io::to_json(xcs::dantzig(X, pr.y, pr.lambda));
    } catch (const xcs::solver_error& e) {
      sol = {{"estimator", "dantzig"}, {"status", xcs::to_string(e.status())}, {"error", e.what()}};
      o.pass = false;
    }
  } else if (pr.estimator == "basis_pursuit") {
    try {
      sol = {{"estimator", "basis_pursuit"}, {"beta", xcs::io::vector_to_json(xcs::basis_pursuit(X, pr.y))},
             {"status", "optimal"}};
    } catch (const xcs::solver_error& e) {
      sol = {{"estimator", "basis_pursuit"}, {"status", xcs::to_string(e.status())}, {"error", e.what()}};
      o.pass = false;
    }
  } else if (pr.estimator == "ols") {
    sol = {{"estimator", "ols"}, {"beta", xcs::io::vector_to_json(xcs::ols_on_support(X, pr.y, pr.support))}};
  } else {
    throw UsageError("unknown estimator '" + pr.estimator + "'");
  }
  if (resolve_format(g, "json") == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "index,beta\n";
    if (sol.contains("beta"))
      for (std::size_t i = 0; i < sol["beta"].size(); ++i) os << i << ',' << sol["beta"][i].dump() << '\n';
    o.text = os.str();
  } else {
    o.text = dump(sol);
  }
  o.parameters = {{"problem", problem_path}, {"problem_content", pj}};
  return o;
}

// -------------------------------------------------------------------- bench

struct BenchArgs {
  std::string config;
  std::uint64_t comparison_trials = 200;
  std::vector<std::size_t> p_list{25, 49, 81};
  double exponent = 0.4;
  double alpha = 1.0;
  double theta = 1.0;
  double sigma = 1.0;
  std::uint64_t trials = 50;
  std::uint32_t m = 2;
  std::uint64_t h = 3;
  std::size_t s = 4;
  std::size_t p = 256;
  double eps = 0.125;
};

json config_record(const json& cfg, const xcs::io::ExperimentConfig& parsed) {
  json rec = cfg;
  rec["design_content"] = xcs::io::to_json(parsed.graph);
  return rec;
}

Outcome run_bench(const std::string& kind, const BenchArgs& a, const Globals& g) {
  Outcome o;
  auto load = [&](json& raw) {
    raw = read_json(a.config);
    try {
      return xcs::io::config_from_json(raw, fs::path(a.config).parent_path());
    } catch (const json::exception& e) {
      throw UsageError(a.config + ": " + e.what());
    }
  };
  if (kind == "lasso" || kind == "dantzig" || kind == "recovery") {
    json raw;
    const auto cfg = load(raw);
    xcs::ExperimentReport rep;
    if (kind == "recovery") {
      const auto cert = xcs::CertifiedDesign::certify(cfg.graph, 2 * cfg.target.s, 0.125);
      if (!cert) throw std::domain_error("design is not a certified (2s, 1/8)-expander; recovery not claimed");
      rep = xcs::run_recovery_experiment(*cert, cfg.target.s, cfg.trials, cfg.seed);
      o.pass = rep.conditional_ok() && rep.unsolved() == 0;
    } else {
      const auto inst = xcs::io::make_instance(cfg);
      rep = kind == "lasso" ? xcs::run_lasso_experiment(inst, cfg.trials) : xcs::run_dantzig_experiment(inst, cfg.trials);
      o.pass = rep.conditional_ok() && rep.event_frequency_ok();
    }
    if (resolve_format(g, "csv") == "csv") {
      std::ostringstream os;
      xcs::write_csv(os, rep);
      o.text = os.str();
    } else {
      o.text = dump(xcs::io::to_json(rep));
    }
    o.parameters = {{"experiment", kind}, {"config", a.config}, {"config_content", config_record(raw, cfg)}};
    o.seeds = {{"experiment", cfg.seed}, {"target", "derive_seed(seed, 2^64-1)"}, {"trial_k", "derive_seed(seed, k)"}};
    return o;
  }
  if (kind == "ols") {
    json raw;
    const auto cfg = load(raw);
    const auto inst = xcs::io::make_instance(cfg);
    const auto cmp = xcs::ols_oracle_comparison(inst, cfg.trials, a.comparison_trials, a.alpha, a.theta);
    o.pass = cmp.relative_deviation <= 0.1;
    const json j = xcs::io::to_json(cmp);
    o.text = resolve_format(g, "json") == "csv" ? flat_csv(j) : dump(j);
    o.parameters = {{"experiment", kind},          {"config", a.config},     {"config_content", config_record(raw, cfg)},
                    {"comparison_trials", a.comparison_trials}, {"alpha", a.alpha}, {"theta", a.theta}};
    o.seeds = {{"experiment", cfg.seed}};
    return o;
  }
  if (kind == "mvse") {
    xcs::MvseOptions opt;
    opt.sigma = a.sigma;
    opt.exponent = a.exponent;
    opt.alpha = a.alpha;
    opt.trials = a.trials;
    opt.seed = g.seed;
    opt.m = a.m;
    opt.h = a.h;
    const auto rows = xcs::mvse_sweep(a.p_list, opt);
    for (const auto& r : rows)
      if (r.certification != "skipped" && r.proxy > r.bound + xcs::kInequalitySlack) o.pass = false;
    if (resolve_format(g, "csv") == "csv") {
      std::ostringstream os;
      xcs::io::write_mvse_csv(os, rows);
      o.text = os.str();
    } else {
      json arr = json::array();
      for (const auto& r : rows) arr.push_back(xcs::io::to_json(r));
      o.text = dump(arr);
    }
    o.parameters = {{"experiment", kind}, {"p", a.p_list}, {"exponent", a.exponent}, {"alpha", a.alpha},
                    {"sigma", a.sigma},   {"trials", a.trials}, {"m", a.m},          {"h", a.h}};
    o.seeds = {{"sweep", g.seed}, {"certification_row_i", "derive_seed(seed, i)"},
               {"instance_row_i", "derive_seed(seed, 1000 + i)"}};
    return o;
  }
  // factors
  const auto f = xcs::oracle_factors(a.s, a.p, a.alpha, a.theta);
  xcs::ExpanderParams params;
  params.s = a.s;
  params.eps = a.eps;
  params.alpha = a.alpha;
  params.theta0 = a.theta;
  const auto b = xcs::suggest_pv_bounds(a.p, a.s, params);
  const json j{{"s", a.s},   {"p", a.p},         {"alpha", a.alpha},     {"theta", a.theta},
               {"rho", f.rho}, {"tau", f.tau}, {"d_bound", b.d_bound}, {"n_bound", b.n_bound}};
  o.text = resolve_format(g, "json") == "csv" ? flat_csv(j) : dump(j);
  o.parameters = {{"experiment", kind}, {"s", a.s}, {"p", a.p}, {"alpha", a.alpha}, {"theta", a.theta}, {"eps", a.eps}};
  return o;
}

// -------------------------------------------------------------- noise-check

struct NoiseArgs {
  std::size_t n = 100;
  double sigma = 1.0;
  double t = 1.0;
  std::uint64_t trials = 10'000;
  std::string model = "iid";
  std::string graph;
};

xcs::NoiseModel parse_model(const std::string& spec, std::size_t n, double sigma) {
  if (spec == "iid") return xcs::NoiseModel::iid(n, sigma);
  if (spec.rfind("ar1:", 0) == 0) {
    std::size_t used = 0;
    const std::string num = spec.substr(4);
    double rho = 0.0;
    try {
      rho = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size()) throw UsageError("bad ar1 coefficient in '" + spec + "'");
    return xcs::NoiseModel::ar1(n, sigma, rho);
  }
  throw UsageError("unknown noise model '" + spec + "' (expected iid or ar1:RHO)");
}

Outcome run_noise(const NoiseArgs& a, const Globals& g) {
  Outcome o;
  json design;
  std::optional<xcs::BipartiteGraph> graph;
  if (!a.graph.empty()) {
    const json gj = read_json(a.graph);
    graph = xcs::io::graph_from_json(gj);
    design = {{"graph", a.graph}, {"graph_content", gj}};
  } else {
    graph = xcs::random_left_regular(2 * a.n, std::min<std::size_t>(8, a.n), a.n, g.seed);
    design = {{"construct", "random"}, {"p", 2 * a.n}, {"d", std::min<std::size_t>(8, a.n)}, {"n", a.n},
              {"seed", g.seed}};
  }
  const auto model = parse_model(a.model, graph->n(), a.sigma);
  const auto rep = xcs::empirical_noise_bound(xcs::DesignMatrix::from_graph(*graph), model, a.t, a.trials, g.seed);
  o.pass = rep.pass;
  json j = xcs::io::to_json(rep);
  j["thresholds"] = xcs::io::to_json(xcs::thresholds(a.sigma, graph->n(), a.t));
  o.text = resolve_format(g, "json") == "csv" ? flat_csv(j) : dump(j);
  o.parameters = {{"n", graph->n()}, {"sigma", a.sigma}, {"t", a.t},
                  {"trials", a.trials}, {"model", a.model}, {"design", design}};
  o.seeds = {{"noise", g.seed}, {"trial_k", "derive_seed(seed, k)"}};
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expander-graph compressed sensing toolkit", "xcs"};
  app.set_version_flag("--version", std::string(xcs::io::kLibraryVersion));
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output path (manifest goes to <out>.manifest.json)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "auto"}));

  std::string command;
  std::function<Outcome()> action;

  // construct
  auto* construct = app.add_subcommand("construct", "Build a bipartite graph");
  construct->require_subcommand(1);
  ConstructArgs ca;
  auto* c_random = construct->add_subcommand("random", "Random left-regular graph");
  c_random->add_option("--p", ca.p)->required();
  c_random->add_option("--d", ca.d)->required();
  c_random->add_option("--n", ca.n)->required();
  auto* c_pv = construct->add_subcommand("pv", "Code-based construction over GF(q)");
  c_pv->set_help_flag("--help", "Print this help message and exit");
  c_pv->add_option("--q", ca.q)->required();
  c_pv->add_option("--l", ca.l)->required();
  c_pv->add_option("--m", ca.m)->required();
  c_pv->add_option("--h", ca.h)->required();
  c_random->callback([&] { command = "construct random"; action = [&] { return run_construct("random", ca, g); }; });
  c_pv->callback([&] { command = "construct pv"; action = [&] { return run_construct("pv", ca, g); }; });

  // verify
  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check expansion, RIP-1, UP2, H-condition, kernel or NSP");
  verify->add_option("--graph", va.graph, "Graph JSON file")->required();
  verify->add_option("--s", va.s)->capture_default_str();
  verify->add_option("--eps", va.eps)->capture_default_str();
  verify->add_option("--mode", va.mode)
      ->check(CLI::IsMember({"exhaustive", "sampled", "rip1", "up2", "h-condition", "kernel", "nsp"}))
      ->capture_default_str();
  verify->add_option("--trials", va.trials)->capture_default_str();
  verify->add_option("--budget", va.budget)->capture_default_str();
  verify->callback([&] { command = "verify"; action = [&] { return run_verify(va, g); }; });

  // solve
  std::string problem;
  auto* solve = app.add_subcommand("solve", "Solve a lasso, Dantzig, basis pursuit or OLS problem file");
  solve->add_option("--problem", problem)->required();
  solve->callback([&] { command = "solve"; action = [&] { return run_solve(problem, g); }; });

  // bench
  auto* bench = app.add_subcommand("bench", "Run an experiment");
  bench->require_subcommand(1);
  BenchArgs ba;
  const std::pair<const char*, const char*> kinds[] = {
      {"lasso", "Lasso oracle inequalities over noise draws"},
      {"dantzig", "Dantzig selector bounds over noise draws"},
      {"recovery", "Noiseless basis pursuit on a certified design"},
      {"ols", "Support-restricted least squares against sigma^2 s / n"}};
  for (const auto& [kind, about] : kinds) {
    auto* sub = bench->add_subcommand(kind, about);
    sub->add_option("--config", ba.config, "Experiment config JSON")->required();
    if (std::string(kind) == "ols") {
      sub->add_option("--comparison-trials", ba.comparison_trials)->capture_default_str();
      sub->add_option("--alpha", ba.alpha)->capture_default_str();
      sub->add_option("--theta", ba.theta)->capture_default_str();
    }
    sub->callback([&, kind] {
      command = std::string("bench ") + kind;
      action = [&, kind] { return run_bench(kind, ba, g); };
    });
  }
  auto* mvse = bench->add_subcommand("mvse", "Mean variable selection error sweep");
  mvse->set_help_flag("--help", "Print this help message and exit");
  mvse->add_option("--p", ba.p_list, "Left sizes (perfect squares of prime powers)")->delimiter(',');
  mvse->add_option("--exponent", ba.exponent, "s = round(p^exponent)")->capture_default_str();
  mvse->add_option("--alpha", ba.alpha)->capture_default_str();
  mvse->add_option("--sigma", ba.sigma)->capture_default_str();
  mvse->add_option("--trials", ba.trials)->capture_default_str();
  mvse->add_option("--m", ba.m)->capture_default_str();
  mvse->add_option("--h", ba.h)->capture_default_str();
  mvse->callback([&] { command = "bench mvse"; action = [&] { return run_bench("mvse", ba, g); }; });
  auto* factors = bench->add_subcommand("factors", "Oracle factors and construction bounds");
  factors->add_option("--s", ba.s)->capture_default_str();
  factors->add_option("--p", ba.p)->capture_default_str();
  factors->add_option("--alpha", ba.alpha)->capture_default_str();
  factors->add_option("--theta", ba.theta)->capture_default_str();
  factors->add_option("--eps", ba.eps)->capture_default_str();
  factors->callback([&] { command = "bench factors"; action = [&] { return run_bench("factors", ba, g); }; });

  // noise-check
  NoiseArgs na;
  auto* noise = app.add_subcommand("noise-check", "Monte Carlo check of the noise bound");
  noise->add_option("--n", na.n)->capture_default_str();
  noise->add_option("--sigma", na.sigma)->capture_default_str();
  noise->add_option("--t", na.t)->capture_default_str();
  noise->add_option("--trials", na.trials)->capture_default_str();
  noise->add_option("--model", na.model, "iid or ar1:RHO")->capture_default_str();
  noise->add_option("--graph", na.graph, "Design graph JSON (default: random, p = 2n, d = min(8, n))");
  noise->callback([&] { command = "noise-check"; action = [&] { return run_noise(na, g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::vector<std::string> args(argv, argv + argc);
  Outcome outcome;
  try {
    outcome = action();
  } catch (const UsageError& e) {
    std::cerr << "xcs: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "xcs: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "xcs: " << e.what() << '\n';
    return kUsage;
  } catch (const std::length_error& e) {
    std::cerr << "xcs: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "xcs: " << e.what() << '\n';
    return kUsage;
  }

  const int code = outcome.pass ? kPass : kFail;
  json outputs = json::object();
  outputs["format"] = g.format;
  outputs["pass"] = outcome.pass;
  const json globals{{"seed", g.seed}, {"out", g.out}, {"format", g.format}};
  json params = outcome.parameters;
  params["globals"] = globals;
  json seeds = outcome.seeds;
  seeds["global"] = g.seed;
  try {
    if (g.out.empty()) {
      std::cout << outcome.text;
      outputs["result"] = "stdout";
      std::cerr << xcs::io::manifest(command, args, params, seeds, outputs, code).dump() << '\n';
    } else {
      xcs::io::write_file(g.out, outcome.text);
      outputs["result"] = g.out;
      xcs::io::write_file(g.out + ".manifest.json",
                          dump(xcs::io::manifest(command, args, params, seeds, outputs, code)));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "xcs: " << e.what() << '\n';
    return kUsage;
  }
  return code;
}
