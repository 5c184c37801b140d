/*
 * Copyright 2026 The tcal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Core>
#include <Eigen/LU>

#include "tcal/core.hpp"

namespace tcal {

/// Reproducible random stream keyed by (seed, stream id).
///
/// Variates are derived from raw 64-bit engine output here rather than
/// through <random> distributions, whose algorithms differ between standard
/// libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on [0,1) with 53 random bits.
  double uniform();
  /// Standard normal (Marsaglia polar method).
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Gaussian class-conditional model: y ~ Bernoulli(prior), x | y ~ N(m_y, s^2).
struct GdaConfig {
  double prior = 0.5;
  double mean0 = -1.0;
  double mean1 = 1.0;
  /// Standard deviation shared by both classes.
  double scale = 2.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GdaSample {
  Eigen::VectorXd x;
  Eigen::VectorXi y;
};

/// Draws n pairs. `stream` separates independent draws under one seed.
GdaSample sample(const GdaConfig& cfg, Index n, std::uint64_t stream = 0);

/// Exact Bayes posterior log-odds of y = 1 given x.
double true_log_odds(const GdaConfig& cfg, double x);
/// Exact Bayes posterior P(y = 1 | x).
double true_posterior(const GdaConfig& cfg, double x);

/// The literal form 1 / (1 + exp(b0 + 4 x)), b0 = log(prior / (1 - prior)),
/// kept only for side-by-side comparison with the Bayes posterior.
double paper_stated_posterior(const GdaConfig& cfg, double x);

/// Logistic sigmoid, evaluated without overflow for large |z|.
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline constexpr double kLogitClamp = 1e-12;

/// Replaces every p by sigmoid(z), z ~ N(logit(p), sigma^2), after clamping p
/// to [1e-12, 1 - 1e-12]. sigma = 0 returns the clamped input.
Eigen::VectorXd perturb_logit_normal(const Eigen::Ref<const Eigen::VectorXd>& preds,
                                     double sigma, std::uint64_t seed);

struct LogisticFit {
  double intercept = 0.0;
  double slope = 0.0;
  int iterations = 0;
  bool converged = false;

  double predict(double x) const { return sigmoid(intercept + slope * x); }
  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return x.unaryExpr([this](double v) { return predict(v); });
  }
};

struct NewtonOptions {
  double gradient_tolerance = 1e-10;
  int max_iterations = 100;
};

/// Maximum-likelihood fit of P(y = 1 | x) = sigmoid(b0 + b1 x) by damped
/// Newton steps with backtracking on the log-likelihood.
template <typename XDerived, typename YDerived>
LogisticFit fit_logistic(const Eigen::MatrixBase<XDerived>& x,
                         const Eigen::MatrixBase<YDerived>& y,
                         const NewtonOptions& options = {}) {
  using Scalar = typename XDerived::Scalar;
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
  const Index n = x.size();
  if (n == 0 || y.size() != n) throw ArgumentError("fit_logistic: bad input sizes");

  // Stable log(1 + exp(z)).
  const auto softplus = [](Scalar z) {
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  };
  const auto neg_log_likelihood = [&](const Vec2& beta) {
    Scalar acc = 0;
    for (Index i = 0; i < n; ++i) {
      const Scalar z = beta[0] + beta[1] * x[i];
      acc += softplus(z) - Scalar(y[i]) * z;
    }
    return acc;
  };

  LogisticFit fit;
  Vec2 beta = Vec2::Zero();
  Scalar current = neg_log_likelihood(beta);
  for (int it = 0; it < options.max_iterations; ++it) {
    Vec2 gradient = Vec2::Zero();
    Mat2 hessian = Mat2::Zero();
    for (Index i = 0; i < n; ++i) {
      const Scalar p = sigmoid(beta[0] + beta[1] * x[i]);
      const Scalar r = p - Scalar(y[i]);
      const Scalar w = p * (1 - p);
      gradient += r * Vec2(1, x[i]);
      hessian(0, 0) += w;
      hessian(0, 1) += w * x[i];
      hessian(1, 1) += w * x[i] * x[i];
    }
    hessian(1, 0) = hessian(0, 1);
    fit.iterations = it;
    if (gradient.norm() < options.gradient_tolerance) {
      fit.converged = true;
      break;
    }
    const Eigen::FullPivLU<Mat2> lu(hessian);
    // Separable or degenerate data: fall back to a gradient step.
    Vec2 step = lu.isInvertible() ? Vec2(lu.solve(gradient)) : gradient;
    // At large n the gradient norm bottoms out at summation noise; a Newton
    // step below rounding level means we are at the optimum.
    if (lu.isInvertible() &&
        step.norm() <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * (1 + beta.norm())) {
      fit.converged = true;
      break;
    }
    // Increases within the rounding noise of the summed objective count as
    // no change, otherwise the search stalls next to the optimum.
    const Scalar noise = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * std::abs(current);
    Scalar damping = 1;
    Vec2 candidate = beta - step;
    Scalar value = neg_log_likelihood(candidate);
    while (value > current + noise && damping > Scalar(1e-10)) {
      damping /= 2;
      candidate = beta - damping * step;
      value = neg_log_likelihood(candidate);
    }
    if (value > current + noise) break;
    beta = candidate;
    current = value;
    fit.iterations = it + 1;
  }
  fit.intercept = static_cast<double>(beta[0]);
  fit.slope = static_cast<double>(beta[1]);
  return fit;
}

}  // namespace tcal
