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

#include "tcal/synthdata.hpp"

#include <algorithm>
#include <string>

namespace tcal {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

void GdaConfig::validate() const {
  if (!(prior >= 0.0 && prior <= 1.0)) {
    throw ArgumentError("gda: prior must lie in [0,1], got " + std::to_string(prior));
  }
  if (!(scale > 0.0)) {
    throw ArgumentError("gda: scale must be positive, got " + std::to_string(scale));
  }
}

GdaSample sample(const GdaConfig& cfg, Index n, std::uint64_t stream) {
  cfg.validate();
  if (n < 1) throw ArgumentError("gda: sample size must be positive");
  RandomStream rng(cfg.seed, stream);
  GdaSample out;
  out.x.resize(n);
  out.y.resize(n);
  for (Index i = 0; i < n; ++i) {
    const int y = rng.bernoulli(cfg.prior) ? 1 : 0;
    out.y[i] = y;
    out.x[i] = (y == 1 ? cfg.mean1 : cfg.mean0) + cfg.scale * rng.normal();
  }
  return out;
}

double true_log_odds(const GdaConfig& cfg, double x) {
  const double s2 = cfg.scale * cfg.scale;
  return std::log(cfg.prior / (1.0 - cfg.prior)) + (cfg.mean1 - cfg.mean0) * x / s2 +
         (cfg.mean0 * cfg.mean0 - cfg.mean1 * cfg.mean1) / (2.0 * s2);
}

double true_posterior(const GdaConfig& cfg, double x) {
  return sigmoid(true_log_odds(cfg, x));
}

double paper_stated_posterior(const GdaConfig& cfg, double x) {
  const double b0 = std::log(cfg.prior / (1.0 - cfg.prior));
  return sigmoid(-(b0 + 4.0 * x));
}

Eigen::VectorXd perturb_logit_normal(const Eigen::Ref<const Eigen::VectorXd>& preds,
                                     double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ArgumentError("perturb: sigma must be non-negative");
  RandomStream rng(seed, 0x6e6f697365ULL);
  Eigen::VectorXd out(preds.size());
  for (Index i = 0; i < preds.size(); ++i) {
    const double p = preds[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ArgumentError("perturb: prediction outside [0,1] at row " +
                          std::to_string(i + 1));
    }
    const double clamped = std::clamp(p, kLogitClamp, 1.0 - kLogitClamp);
    if (sigma == 0.0) {
      out[i] = clamped;
      continue;
    }
    const double z = std::log(clamped / (1.0 - clamped)) + sigma * rng.normal();
    out[i] = sigmoid(z);
  }
  return out;
}

}  // namespace tcal
