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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "expander_cs/design.hpp"
#include "expander_cs/errors.hpp"
#include "expander_cs/field.hpp"
#include "expander_cs/graph.hpp"
#include "expander_cs/noise.hpp"
#include "expander_cs/rng.hpp"
#include "expander_cs/solve.hpp"
#include "expander_cs/verify.hpp"

namespace xcs {

inline constexpr double kInequalitySlack = 1e-9;
inline constexpr double kRecoveryTolerance = 1e-6;

// ---------------------------------------------------------------------------
// Targets and instances
// ---------------------------------------------------------------------------

enum class TargetKind { exact_sparse, compressible };

inline const char* to_string(TargetKind k) { return k == TargetKind::exact_sparse ? "exact-sparse" : "compressible"; }

struct TargetSpec {
  TargetKind kind = TargetKind::exact_sparse;
  std::size_t s = 1;
};

// exact-sparse: uniform support of size s, entries sign * U[1, 2].
// compressible: beta_i = sign_i * (i + 1)^-2 on every coordinate.
inline Eigen::VectorXd make_target(const TargetSpec& spec, std::size_t p, Rng& rng) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  if (spec.kind == TargetKind::exact_sparse) {
    if (spec.s > p) throw std::domain_error("sparsity exceeds dimension");
    for (auto i : detail::floyd_subset(rng, p, spec.s))
      beta[static_cast<Eigen::Index>(i)] = rng.sign() * rng.uniform(1.0, 2.0);
  } else {
    for (std::size_t i = 0; i < p; ++i) {
      const double mag = 1.0 / (static_cast<double>(i + 1) * static_cast<double>(i + 1));
      beta[static_cast<Eigen::Index>(i)] = rng.sign() * mag;
    }
  }
  return beta;
}

// Off-support l1 mass |v_{S^c}|_1.
inline double off_support_l1(const Eigen::VectorXd& v, const std::vector<std::size_t>& S) {
  double total = v.lpNorm<1>();
  for (auto i : S) total -= std::abs(v[static_cast<Eigen::Index>(i)]);
  return std::max(0.0, total);
}

struct RecoveryInstance {
  DesignMatrix X;
  Eigen::VectorXd beta_star;
  TargetSpec target;
  std::vector<std::size_t> support;  // indices of the s largest |beta*_i|
  NoiseModel noise;
  double lambda_multiple = 6.0;  // lambda = multiple * Lambda
  std::uint64_t seed = 0;

  // beta* is drawn from derive_seed(seed, 2^64 - 1); trial k draws its noise
  // from derive_seed(seed, k).
  static RecoveryInstance make(DesignMatrix X, TargetSpec target, double sigma, Correlation corr,
                               double lambda_multiple, std::uint64_t seed) {
    NoiseModel noise = std::visit(
        [&](const auto& c) -> NoiseModel {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, IidCorrelation>) return NoiseModel::iid(X.n(), sigma);
          else if constexpr (std::is_same_v<T, Ar1Correlation>) return NoiseModel::ar1(X.n(), sigma, c.rho);
          else return NoiseModel::explicit_correlation(sigma, *c.matrix);
        },
        corr);
    Rng rng(derive_seed(seed, std::numeric_limits<std::uint64_t>::max()));
    Eigen::VectorXd beta = make_target(target, X.p(), rng);
    auto support = top_indices(beta, target.s);
    std::sort(support.begin(), support.end());
    return RecoveryInstance{std::move(X), std::move(beta), target, std::move(support), std::move(noise),
                            lambda_multiple, seed};
  }
};

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return rhs - lhs >= -kInequalitySlack; }
};

struct TrialRecord {
  std::uint64_t trial = 0;
  bool event = true;         // |X'z|_inf <= Lambda
  double sup_xtz = 0.0;      // |X'z|_inf
  bool solved = true;        // every solve in the trial converged
  double prediction_error = 0.0;   // |X beta* - X beta_hat|_2
  double off_support_error = 0.0;  // |beta_hat_{S^c} - beta*_{S^c}|_1
  double off_support_mass = 0.0;   // |beta_hat_{S^c}|_1
  std::vector<InequalityCheck> checks;
};

struct ExperimentReport {
  std::string estimator;
  std::vector<std::string> check_names;
  std::vector<TrialRecord> records;
  double lambda = 0.0;
  double noise_level = 0.0;  // Lambda
  double eta_n = 0.0;

  std::size_t unsolved() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](auto& r) { return !r.solved; }));
  }
  double event_frequency() const {
    if (records.empty()) return 0.0;
    const auto hits = std::count_if(records.begin(), records.end(), [](auto& r) { return r.event; });
    return static_cast<double>(hits) / static_cast<double>(records.size());
  }
  // Fraction of solved trials on which check c holds.
  double holds_fraction(std::size_t c) const {
    std::size_t solved = 0, ok = 0;
    for (const auto& r : records)
      if (r.solved) ++solved, ok += r.checks[c].holds();
    return solved ? static_cast<double>(ok) / static_cast<double>(solved) : 0.0;
  }
  // Check c holds on every solved trial where the noise event holds.
  bool holds_on_event(std::size_t c) const {
    return std::all_of(records.begin(), records.end(),
                       [&](auto& r) { return !r.solved || !r.event || r.checks[c].holds(); });
  }
  bool conditional_ok() const {
    for (std::size_t c = 0; c < check_names.size(); ++c)
      if (!holds_on_event(c)) return false;
    return true;
  }
  // Event frequency >= 1 - eta_n - 3 binomial standard errors.
  bool event_frequency_ok() const {
    const double bound = 1.0 - eta_n;
    const double se = std::sqrt(bound * (1.0 - bound) / std::max<double>(1.0, double(records.size())));
    return event_frequency() >= bound - 3.0 * se;
  }
  double worst_slack(std::size_t c, bool event_only = true) const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : records)
      if (r.solved && (r.event || !event_only)) worst = std::min(worst, r.checks[c].rhs - r.checks[c].lhs);
    return worst;
  }
};

inline void write_csv(std::ostream& os, const ExperimentReport& rep) {
  os << "trial,event,sup_xtz,solved,prediction_error,off_support_error,off_support_mass";
  for (const auto& name : rep.check_names) os << ',' << name << "_lhs," << name << "_rhs," << name << "_holds";
  os << '\n';
  const auto old = os.precision(17);
  for (const auto& r : rep.records) {
    os << r.trial << ',' << r.event << ',' << r.sup_xtz << ',' << r.solved << ',' << r.prediction_error << ','
       << r.off_support_error << ',' << r.off_support_mass;
    for (const auto& c : r.checks) os << ',' << c.lhs << ',' << c.rhs << ',' << c.holds();
    os << '\n';
  }
  os.precision(old);
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

namespace detail {

struct TrialData {
  Eigen::VectorXd z;
  Eigen::VectorXd y;
  double sup_xtz;
};

inline TrialData draw_trial(const RecoveryInstance& inst, std::uint64_t k) {
  TrialData t;
  t.z = sample_noise(inst.noise, derive_seed(inst.seed, k));
  t.y = inst.X.multiply(inst.beta_star) + t.z;
  t.sup_xtz = inst.X.multiply_transpose(t.z).lpNorm<Eigen::Infinity>();
  return t;
}

inline void fill_errors(TrialRecord& rec, const RecoveryInstance& inst, const Eigen::VectorXd& beta_hat) {
  const Eigen::VectorXd gamma = inst.beta_star - beta_hat;
  rec.prediction_error = inst.X.multiply(gamma).norm();
  rec.off_support_error = off_support_l1(gamma, inst.support);
  rec.off_support_mass = off_support_l1(beta_hat, inst.support);
}

}  // namespace detail

// Lasso at lambda = multiple * Lambda (multiple >= 6). Checks per trial:
//   lasso_oracle:  |X gamma|^2 + (lambda - 6 Lambda)|gamma_{S^c}|_1 <= 4 lambda (2 lambda n + |beta*_{S^c}|_1)
// and for exactly sparse targets additionally
//   lasso_sparse:        |X gamma|^2 + (lambda - 6 Lambda)|beta_{S^c}|_1 <= 8 lambda^2 n
//   lasso_prediction_6:  |X gamma|_2 <= 24 sqrt(2) sigma sqrt(n log n)   (separate solve at 6 Lambda)
//   lasso_selection_7:   |beta_{S^c}|_1 <= 392 sqrt(2) sigma n sqrt(log n) (separate solve at 7 Lambda)
// with gamma = beta* - beta_hat.
inline ExperimentReport run_lasso_experiment(const RecoveryInstance& inst, std::uint64_t trials,
                                             const LassoOptions& opt = {}) {
  if (!(inst.lambda_multiple >= 6.0)) throw std::domain_error("lasso needs lambda >= 6 Lambda");
  const std::size_t n = inst.X.n();
  const double sigma = inst.noise.sigma();
  const Thresholds th = thresholds(sigma, n);
  const double Lambda = th.lambda;
  const double lambda = inst.lambda_multiple * Lambda;
  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);
  const bool sparse = inst.target.kind == TargetKind::exact_sparse;
  const double target_tail = off_support_l1(inst.beta_star, inst.support);

  ExperimentReport rep;
  rep.estimator = "lasso";
  rep.lambda = lambda;
  rep.noise_level = Lambda;
  rep.eta_n = th.eta_n;
  rep.check_names = {"lasso_oracle"};
  if (sparse) rep.check_names.insert(rep.check_names.end(), {"lasso_sparse", "lasso_prediction_6", "lasso_selection_7"});

  for (std::uint64_t k = 0; k < trials; ++k) {
    const auto data = detail::draw_trial(inst, k);
    TrialRecord rec;
    rec.trial = k;
    rec.sup_xtz = data.sup_xtz;
    rec.event = data.sup_xtz <= Lambda;

    const LassoSolution main = lasso(inst.X, data.y, lambda, opt);
    rec.solved = main.converged;
    detail::fill_errors(rec, inst, main.beta);
    const double pred_sq = rec.prediction_error * rec.prediction_error;
    rec.checks.push_back({pred_sq + (lambda - 6.0 * Lambda) * rec.off_support_error,
                          4.0 * lambda * (2.0 * lambda * nd + target_tail)});
    if (sparse) {
      rec.checks.push_back({pred_sq + (lambda - 6.0 * Lambda) * rec.off_support_mass, 8.0 * lambda * lambda * nd});
      auto solve_at = [&](double multiple) {
        if (multiple == inst.lambda_multiple) return main;
        return lasso(inst.X, data.y, multiple * Lambda, opt);
      };
      const LassoSolution at6 = solve_at(6.0);
      const LassoSolution at7 = solve_at(7.0);
      rec.solved = rec.solved && at6.converged && at7.converged;
      rec.checks.push_back({inst.X.multiply(inst.beta_star - at6.beta).norm(),
                            24.0 * std::numbers::sqrt2 * sigma * std::sqrt(nd * log_n)});
      rec.checks.push_back({off_support_l1(at7.beta, inst.support),
                            392.0 * std::numbers::sqrt2 * sigma * nd * std::sqrt(log_n)});
    }
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

// Dantzig selector at lambda = multiple * Lambda (multiple >= 1). Checks:
//   dantzig_oracle:      |X gamma|^2 <= 4(lambda + Lambda)(16(lambda + Lambda) n + 3 |beta*_{S^c}|_1)
//   target_feasible:     |X'(y - X beta*)|_inf <= lambda
//   dantzig_l1_vs_target: |beta_d|_1 <= |beta*|_1
// and for exactly sparse targets
//   dantzig_prediction:  |X gamma|_2 <= 8 (lambda + Lambda) sqrt(n)
//   dantzig_selection:   |beta_d_{S^c}|_1 <= 32 (lambda + Lambda) n
// plus, when lambda = Lambda,
//   dantzig_prediction_1: |X gamma|_2 <= 32 sigma sqrt(n log n)
//   dantzig_selection_1:  |beta_d_{S^c}|_1 <= 128 sigma n sqrt(log n)
inline ExperimentReport run_dantzig_experiment(const RecoveryInstance& inst, std::uint64_t trials,
                                               const LpOptions& opt = {}) {
  if (!(inst.lambda_multiple >= 1.0)) throw std::domain_error("dantzig selector needs lambda >= Lambda");
  const std::size_t n = inst.X.n();
  const double sigma = inst.noise.sigma();
  const Thresholds th = thresholds(sigma, n);
  const double Lambda = th.lambda;
  const double lambda = inst.lambda_multiple * Lambda;
  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);
  const bool sparse = inst.target.kind == TargetKind::exact_sparse;
  const bool at_lambda = inst.lambda_multiple == 1.0;
  const double target_tail = off_support_l1(inst.beta_star, inst.support);
  const double target_l1 = inst.beta_star.lpNorm<1>();

  ExperimentReport rep;
  rep.estimator = "dantzig";
  rep.lambda = lambda;
  rep.noise_level = Lambda;
  rep.eta_n = th.eta_n;
  rep.check_names = {"dantzig_oracle", "target_feasible", "dantzig_l1_vs_target"};
  if (sparse) rep.check_names.insert(rep.check_names.end(), {"dantzig_prediction", "dantzig_selection"});
  if (sparse && at_lambda)
    rep.check_names.insert(rep.check_names.end(), {"dantzig_prediction_1", "dantzig_selection_1"});

  const double ll = lambda + Lambda;
  for (std::uint64_t k = 0; k < trials; ++k) {
    const auto data = detail::draw_trial(inst, k);
    TrialRecord rec;
    rec.trial = k;
    rec.sup_xtz = data.sup_xtz;
    rec.event = data.sup_xtz <= Lambda;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(inst.X.p()));
    try {
      beta = dantzig(inst.X, data.y, lambda, opt).beta;
    } catch (const solver_error&) {
      rec.solved = false;
    }
    detail::fill_errors(rec, inst, beta);
    const double pred = rec.prediction_error;
    rec.checks.push_back({pred * pred, 4.0 * ll * (16.0 * ll * nd + 3.0 * target_tail)});
    rec.checks.push_back({data.sup_xtz, lambda});
    rec.checks.push_back({beta.lpNorm<1>(), target_l1});
    if (sparse) {
      rec.checks.push_back({pred, 8.0 * ll * std::sqrt(nd)});
      rec.checks.push_back({rec.off_support_mass, 32.0 * ll * nd});
    }
    if (sparse && at_lambda) {
      rec.checks.push_back({pred, 32.0 * sigma * std::sqrt(nd * log_n)});
      rec.checks.push_back({rec.off_support_mass, 128.0 * sigma * nd * std::sqrt(log_n)});
    }
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

// A design together with the exhaustive certificate that its graph is an
// (order, eps)-unbalanced expander. Only certify() produces one.
class CertifiedDesign {
 public:
  static std::optional<CertifiedDesign> certify(const BipartiteGraph& g, std::size_t order, double eps,
                                                const ExhaustiveOptions& opt = {}) {
    VerificationReport rep = check_expansion_exhaustive(g, order, eps, opt);
    if (!rep.ok) return std::nullopt;
    return CertifiedDesign(DesignMatrix::from_graph(g), std::move(rep), order, eps);
  }

  const DesignMatrix& design() const noexcept { return X_; }
  const VerificationReport& report() const noexcept { return report_; }
  std::size_t order() const noexcept { return order_; }
  double eps() const noexcept { return eps_; }

 private:
  CertifiedDesign(DesignMatrix X, VerificationReport rep, std::size_t order, double eps)
      : X_(std::move(X)), report_(std::move(rep)), order_(order), eps_(eps) {}

  DesignMatrix X_;
  VerificationReport report_;
  std::size_t order_;
  double eps_;
};

// Noiseless basis pursuit on random s-sparse targets (uniform support,
// entries sign * U[1, 2], trial k from derive_seed(seed, k)). One check,
// bp_recovery: relative l1 error <= 1e-6. Refuses designs whose certificate
// does not cover order 2s at eps <= 1/8.
inline ExperimentReport run_recovery_experiment(const CertifiedDesign& cert, std::size_t s, std::uint64_t trials,
                                                std::uint64_t seed) {
  if (!cert.report().ok || cert.order() < 2 * s || cert.eps() > 0.125)
    throw std::domain_error("recovery needs a (2s, 1/8)-expander certificate");
  const DesignMatrix& X = cert.design();
  ExperimentReport rep;
  rep.estimator = "basis_pursuit";
  rep.check_names = {"bp_recovery"};
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, k));
    const Eigen::VectorXd beta = make_target({TargetKind::exact_sparse, s}, X.p(), rng);
    TrialRecord rec;
    rec.trial = k;
    Eigen::VectorXd bp = Eigen::VectorXd::Zero(beta.size());
    try {
      bp = basis_pursuit(X, X.multiply(beta));
    } catch (const solver_error&) {
      rec.solved = false;
    }
    const double err = (bp - beta).lpNorm<1>();
    const double scale = beta.lpNorm<1>();
    rec.prediction_error = X.multiply(beta - bp).norm();
    rec.off_support_error = err;
    rec.checks.push_back({scale > 0.0 ? err / scale : err, kRecoveryTolerance});
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Oracle comparison
// ---------------------------------------------------------------------------

struct OracleFactors {
  double rho = 0.0;
  double tau = 0.0;
};

// With L = theta log p log s:
//   rho = ((1 + a) log s + (2 + 2/a) log L) s^a L^(2 + 2/a)
//   tau = s^a L^(3 + 3/a) log(s^(1 + a) L^(2 + 2/a)) / log p
inline OracleFactors oracle_factors(std::size_t s, std::size_t p, double alpha, double theta) {
  if (!(s >= 2 && p > s)) throw std::domain_error("need p > s >= 2");
  if (!(alpha > 0.0 && theta > 0.0)) throw std::domain_error("alpha and theta must be positive");
  const double sd = static_cast<double>(s);
  const double L = theta * std::log(static_cast<double>(p)) * std::log(sd);
  const double a = alpha;
  OracleFactors f;
  f.rho = ((1.0 + a) * std::log(sd) + (2.0 + 2.0 / a) * std::log(L)) * std::pow(sd, a) * std::pow(L, 2.0 + 2.0 / a);
  f.tau = std::pow(sd, a) * std::pow(L, 3.0 + 3.0 / a) *
          (std::log(std::pow(sd, 1.0 + a) * std::pow(L, 2.0 + 2.0 / a)) / std::log(static_cast<double>(p)));
  return f;
}

struct OlsComparison {
  std::uint64_t trials = 0;
  double mean_ols_error = 0.0;  // mean of |X beta_ols - X beta*|^2 / n
  double expected = 0.0;        // sigma^2 s / n
  double relative_deviation = 0.0;
  std::uint64_t comparison_trials = 0;
  double mean_lasso_error = 0.0;  // same normalization, lambda = 6 Lambda
  double mean_dantzig_error = 0.0;  // lambda = Lambda
  double lasso_ratio = std::numeric_limits<double>::quiet_NaN();
  double dantzig_ratio = std::numeric_limits<double>::quiet_NaN();
  // Report-only lines; the constant C in front of them is unknown.
  std::optional<OracleFactors> factors;
  double rho_line = std::numeric_limits<double>::quiet_NaN();  // rho sigma^2 s / n
  double tau_line = std::numeric_limits<double>::quiet_NaN();  // tau sigma^2 |X_1|_2^2 s log p / n
};

// OLS restricted to the true support over `trials` noise draws; lasso and
// Dantzig prediction errors over the first `comparison_trials` of them.
inline OlsComparison ols_oracle_comparison(const RecoveryInstance& inst, std::uint64_t trials,
                                           std::uint64_t comparison_trials = 0, double alpha = 1.0,
                                           double theta = 1.0) {
  if (inst.target.kind != TargetKind::exact_sparse) throw std::domain_error("oracle comparison needs a sparse target");
  const double nd = static_cast<double>(inst.X.n());
  const double sigma = inst.noise.sigma();
  const double sd = static_cast<double>(inst.target.s);
  OlsComparison out;
  out.trials = trials;
  out.expected = sigma * sigma * sd / nd;
  comparison_trials = std::min(comparison_trials, trials);
  out.comparison_trials = comparison_trials;
  const double Lambda = thresholds(sigma, inst.X.n()).lambda;
  double ols_cmp_sum = 0.0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    const auto data = detail::draw_trial(inst, k);
    const Eigen::VectorXd ols = ols_on_support(inst.X, data.y, inst.support);
    const double err = inst.X.multiply(ols - inst.beta_star).squaredNorm() / nd;
    out.mean_ols_error += err;
    if (k < comparison_trials) {
      ols_cmp_sum += err;
      const auto l = lasso(inst.X, data.y, 6.0 * Lambda);
      out.mean_lasso_error += inst.X.multiply(l.beta - inst.beta_star).squaredNorm() / nd;
      const auto d = dantzig(inst.X, data.y, Lambda);
      out.mean_dantzig_error += inst.X.multiply(d.beta - inst.beta_star).squaredNorm() / nd;
    }
  }
  if (trials) out.mean_ols_error /= static_cast<double>(trials);
  if (out.expected > 0.0) out.relative_deviation = std::abs(out.mean_ols_error - out.expected) / out.expected;
  if (comparison_trials) {
    const double c = static_cast<double>(comparison_trials);
    out.mean_lasso_error /= c;
    out.mean_dantzig_error /= c;
    if (ols_cmp_sum > 0.0) {
      out.lasso_ratio = out.mean_lasso_error / (ols_cmp_sum / c);
      out.dantzig_ratio = out.mean_dantzig_error / (ols_cmp_sum / c);
    }
  }
  if (inst.target.s >= 2 && inst.X.p() > inst.target.s) {
    out.factors = oracle_factors(inst.target.s, inst.X.p(), alpha, theta);
    const double col_sq = inst.X.column_squared_norm(0);
    out.rho_line = out.factors->rho * out.expected;
    out.tau_line = out.factors->tau * sigma * sigma * col_sq * sd * std::log(static_cast<double>(inst.X.p())) / nd;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mean variable selection error sweep
// ---------------------------------------------------------------------------

struct MvseRow {
  std::size_t p = 0;
  std::size_t s = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::string certification;  // exhaustive | sampled | skipped
  double proxy = 0.0;         // max over event trials of |beta_{S^c}|_1 / |S^c|
  double bound = 0.0;         // 392 sqrt(2) sigma n sqrt(log n) / (p - s)
  std::uint64_t event_trials = 0;
  std::uint64_t unsolved = 0;
};

struct MvseOptions {
  double sigma = 1.0;
  double exponent = 0.4;  // s = max(1, round(p^exponent))
  double alpha = 1.0;
  std::uint64_t trials = 50;
  std::uint64_t seed = 0;
  std::uint64_t sampled_certification_trials = 10'000;
  std::uint64_t subset_budget = kDefaultSubsetBudget;
  std::uint32_t m = 2;  // design: pv_expander(GF(sqrt p), 2, m, h)
  std::uint64_t h = 3;
};

// Designs: for p = q^2 with q a prime power, pv_expander(GF(q), 2, m, h),
// certified as a (2s, 1/8)-expander exhaustively when the subset count fits
// the budget and by sampling otherwise. Lasso at lambda = 7 Lambda. Rows
// whose p is not such a square, or whose certification fails, are skipped.
inline std::vector<MvseRow> mvse_sweep(const std::vector<std::size_t>& p_list, const MvseOptions& opt) {
  if (!(opt.exponent > 0.0 && opt.exponent < 1.0 / (1.0 + opt.alpha)))
    throw std::domain_error("sparsity exponent must lie in (0, 1/(1 + alpha))");
  std::vector<MvseRow> rows;
  for (std::size_t idx = 0; idx < p_list.size(); ++idx) {
    MvseRow row;
    row.p = p_list[idx];
    row.s = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::pow(double(row.p), opt.exponent))));
    row.certification = "skipped";
    const auto q = static_cast<std::uint32_t>(std::llround(std::sqrt(double(row.p))));
    std::optional<BipartiteGraph> g;
    try {
      if (static_cast<std::size_t>(q) * q == row.p) g = pv_expander(GaloisField(FieldSpec::of_order(q)), 2, opt.m, opt.h);
    } catch (const std::exception&) {
      g.reset();
    }
    if (!g) {
      rows.push_back(row);
      continue;
    }
    row.n = g->n();
    row.d = g->d();
    const std::size_t order = 2 * row.s;
    bool certified = false;
    if (detail::subset_count(g->p(), order) <= opt.subset_budget) {
      certified = check_expansion_exhaustive(*g, order, 0.125, {opt.subset_budget, true}).ok;
      row.certification = certified ? "exhaustive" : "skipped";
    } else {
      certified = check_expansion_sampled(*g, order, 0.125, opt.sampled_certification_trials,
                                          derive_seed(opt.seed, idx)).ok;
      row.certification = certified ? "sampled" : "skipped";
    }
    if (!certified) {
      rows.push_back(row);
      continue;
    }
    auto inst = RecoveryInstance::make(DesignMatrix::from_graph(*g), {TargetKind::exact_sparse, row.s}, opt.sigma,
                                       IidCorrelation{}, 7.0, derive_seed(opt.seed, 1000 + idx));
    const double Lambda = thresholds(opt.sigma, row.n).lambda;
    const double nd = static_cast<double>(row.n);
    const double off = static_cast<double>(row.p - row.s);
    row.bound = 392.0 * std::numbers::sqrt2 * opt.sigma * nd * std::sqrt(std::log(nd)) / off;
    for (std::uint64_t k = 0; k < opt.trials; ++k) {
      const auto data = detail::draw_trial(inst, k);
      if (data.sup_xtz > Lambda) continue;
      const auto sol = lasso(inst.X, data.y, 7.0 * Lambda);
      if (!sol.converged) {
        ++row.unsolved;
        continue;
      }
      ++row.event_trials;
      row.proxy = std::max(row.proxy, off_support_l1(sol.beta, inst.support) / off);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace xcs
