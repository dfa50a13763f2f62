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
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "expander_cs/design.hpp"
#include "expander_cs/rng.hpp"

namespace xcs {

struct IidCorrelation {};
struct Ar1Correlation {
  double rho = 0.0;
};
// Unit-diagonal PSD correlation matrix with its symmetric square root.
struct ExplicitCorrelation {
  std::shared_ptr<const Eigen::MatrixXd> matrix;
  std::shared_ptr<const Eigen::MatrixXd> root;
};

using Correlation = std::variant<IidCorrelation, Ar1Correlation, ExplicitCorrelation>;

// Centered Gaussian noise z in R^n whose coordinates are all N(0, sigma^2),
// possibly correlated.
class NoiseModel {
 public:
  static NoiseModel iid(std::size_t n, double sigma) { return NoiseModel(n, sigma, IidCorrelation{}); }

  static NoiseModel ar1(std::size_t n, double sigma, double rho) {
    if (!(rho > -1.0 && rho < 1.0)) throw std::domain_error("ar1 coefficient must lie in (-1, 1)");
    return NoiseModel(n, sigma, Ar1Correlation{rho});
  }

  // Eigenvalues below -1e-12 are rejected; the rest are clipped at zero.
  static NoiseModel explicit_correlation(double sigma, const Eigen::MatrixXd& C) {
    if (C.rows() != C.cols() || C.rows() == 0) throw std::domain_error("correlation matrix must be square");
    if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::domain_error("correlation matrix not symmetric");
    if ((C.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12)
      throw std::domain_error("correlation matrix needs unit diagonal");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    Eigen::VectorXd vals = eig.eigenvalues();
    if (vals.minCoeff() < -1e-12) throw std::domain_error("correlation matrix is not positive semidefinite");
    vals = vals.cwiseMax(0.0).cwiseSqrt();
    auto root = std::make_shared<const Eigen::MatrixXd>(eig.eigenvectors() * vals.asDiagonal() *
                                                        eig.eigenvectors().transpose());
    return NoiseModel(static_cast<std::size_t>(C.rows()), sigma,
                      ExplicitCorrelation{std::make_shared<const Eigen::MatrixXd>(C), std::move(root)});
  }

  std::size_t n() const noexcept { return n_; }
  double sigma() const noexcept { return sigma_; }
  const Correlation& correlation() const noexcept { return corr_; }

  std::string describe() const {
    if (std::holds_alternative<IidCorrelation>(corr_)) return "iid";
    if (auto* a = std::get_if<Ar1Correlation>(&corr_)) return "ar1:" + std::to_string(a->rho);
    return "explicit";
  }

 private:
  NoiseModel(std::size_t n, double sigma, Correlation corr) : n_(n), sigma_(sigma), corr_(std::move(corr)) {
    if (n_ < 1) throw std::domain_error("noise length must be positive");
    if (!(sigma_ >= 0.0)) throw std::domain_error("sigma must be nonnegative");
  }

  std::size_t n_;
  double sigma_;
  Correlation corr_;
};

// Draws g_0, g_1, ... ~ N(0, 1) from Rng(seed) in order, then
//   iid:      z_i = sigma g_i
//   ar1:      w_0 = g_0, w_i = rho w_{i-1} + sqrt(1 - rho^2) g_i, z = sigma w
//   explicit: z = sigma R g, R the symmetric square root of the correlation.
inline Eigen::VectorXd sample_noise(const NoiseModel& model, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(model.n());
  if (model.sigma() == 0.0) return Eigen::VectorXd::Zero(n);
  Rng rng(seed);
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = rng.normal();
  return std::visit(
      [&](const auto& c) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IidCorrelation>) {
          return model.sigma() * g;
        } else if constexpr (std::is_same_v<T, Ar1Correlation>) {
          Eigen::VectorXd w(n);
          const double innov = std::sqrt(1.0 - c.rho * c.rho);
          w[0] = g[0];
          for (Eigen::Index i = 1; i < n; ++i) w[i] = c.rho * w[i - 1] + innov * g[i];
          return model.sigma() * w;
        } else {
          return model.sigma() * ((*c.root) * g);
        }
      },
      model.correlation());
}

// Noise levels and their probability bounds (natural logarithms):
//   Lambda   = 2 sigma sqrt(log n)
//   Lambda_t = (1 + t) sigma sqrt(log n)
//   eta_n    = 1 / (sqrt(2 pi) n sqrt(log n))
//   P(|X'z|_inf <= Lambda_t) >= 1 - sqrt(2) / ((1 + t) sqrt(pi log n) n^((1+t)^2/2 - 1))
// The last bound equals 1 - eta_n at t = 1.
struct Thresholds {
  double sigma = 0.0;
  std::size_t n = 0;
  double t = 1.0;
  double lambda = 0.0;
  double lambda_t = 0.0;
  double eta_n = 0.0;
  double high_probability = 0.0;
};

inline Thresholds thresholds(double sigma, std::size_t n, double t = 1.0) {
  if (n < 2) throw std::domain_error("need n >= 2");
  if (!(sigma >= 0.0)) throw std::domain_error("sigma must be nonnegative");
  if (!(t >= 1.0)) throw std::domain_error("need t >= 1");
  const double nd = static_cast<double>(n);
  const double root_log = std::sqrt(std::log(nd));
  Thresholds th;
  th.sigma = sigma;
  th.n = n;
  th.t = t;
  th.lambda = 2.0 * sigma * root_log;
  th.lambda_t = (1.0 + t) * sigma * root_log;
  th.eta_n = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * nd * root_log);
  th.high_probability = 1.0 - std::numbers::sqrt2 / ((1.0 + t) * std::sqrt(std::numbers::pi) * root_log *
                                                     std::pow(nd, (1.0 + t) * (1.0 + t) / 2.0 - 1.0));
  return th;
}

struct NoiseBoundReport {
  double frequency = 0.0;  // fraction of draws with |X'z|_inf <= Lambda_t
  double bound = 0.0;      // theoretical lower bound on that probability
  double standard_error = 0.0;
  bool pass = false;
  std::uint64_t trials = 0;
  std::uint64_t non_amplification_violations = 0;  // draws with |X'z|_inf > |z|_inf
  double lambda_t = 0.0;
};

// Monte Carlo frequency of the event |X'z|_inf <= Lambda_t over draws
// sample_noise(model, derive_seed(seed, trial)). Passes iff the frequency is
// at least bound - 3 sqrt(bound (1 - bound) / trials) and no draw breaks
// |X'z|_inf <= |z|_inf.
template <DesignOperator Op>
NoiseBoundReport empirical_noise_bound(const Op& X, const NoiseModel& model, double t, std::uint64_t trials,
                                       std::uint64_t seed) {
  if (trials < 1) throw std::domain_error("need at least one trial");
  if (X.rows() != model.n()) throw std::domain_error("noise length must match design rows");
  const Thresholds th = thresholds(model.sigma(), model.n(), t);
  NoiseBoundReport rep;
  rep.bound = th.high_probability;
  rep.lambda_t = th.lambda_t;
  rep.trials = trials;
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    const Eigen::VectorXd z = sample_noise(model, derive_seed(seed, k));
    const double sup = X.multiply_transpose(z).template lpNorm<Eigen::Infinity>();
    if (sup <= th.lambda_t) ++hits;
    if (sup > z.lpNorm<Eigen::Infinity>()) ++rep.non_amplification_violations;
  }
  rep.frequency = static_cast<double>(hits) / static_cast<double>(trials);
  rep.standard_error = std::sqrt(std::max(0.0, rep.bound * (1.0 - rep.bound)) / static_cast<double>(trials));
  rep.pass = rep.frequency >= rep.bound - 3.0 * rep.standard_error && rep.non_amplification_violations == 0;
  return rep;
}

}  // namespace xcs
