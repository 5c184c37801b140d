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

#include "tcal/stattest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tcal {

std::string_view to_string(TestKind kind) {
  switch (kind) {
    case TestKind::binomial:
      return "binomial";
    case TestKind::t_test:
      return "t";
  }
  return "binomial";
}

TestKind parse_test_kind(std::string_view text) {
  if (text == "binomial") return TestKind::binomial;
  if (text == "t" || text == "t_test" || text == "t-test") return TestKind::t_test;
  throw ArgumentError("unknown test kind '" + std::string(text) + "'");
}

void TestConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("alpha must lie in (0,1), got " + std::to_string(alpha));
  }
}

namespace {

struct BinomialLogPmf {
  std::int64_t n;
  double log_q;
  double log_1mq;
  double log_n_fact;

  BinomialLogPmf(std::int64_t n_, double q)
      : n(n_),
        log_q(std::log(q)),
        log_1mq(std::log1p(-q)),
        log_n_fact(std::lgamma(static_cast<double>(n_) + 1.0)) {}

  double operator()(std::int64_t j) const {
    const auto jd = static_cast<double>(j);
    const auto rest = static_cast<double>(n - j);
    return log_n_fact - std::lgamma(jd + 1.0) - std::lgamma(rest + 1.0) +
           jd * log_q + rest * log_1mq;
  }
};

constexpr double kTailCutoff = 1e-17;

// Mass of {0..end} relative to f(end), walking outward from `end` by the
// ratio f(j-1)/f(j). The pmf is log-concave, so once the ratio drops below
// one the remainder is bounded by a geometric series.
long double left_tail_relative(std::int64_t n, std::int64_t end, double q) {
  const long double odds_inv = (1.0L - q) / static_cast<long double>(q);
  long double term = 1.0L;
  long double sum = 1.0L;
  for (std::int64_t j = end; j >= 1; --j) {
    const long double ratio = static_cast<long double>(j) /
                              static_cast<long double>(n - j + 1) * odds_inv;
    term *= ratio;
    sum += term;
    const long double next = static_cast<long double>(j - 1) /
                             static_cast<long double>(n - j + 2) * odds_inv;
    if (next < 1.0L && term * next / (1.0L - next) < kTailCutoff * sum) break;
  }
  return sum;
}

// Mass of {start..n} relative to f(start).
long double right_tail_relative(std::int64_t n, std::int64_t start, double q) {
  const long double odds = static_cast<long double>(q) / (1.0L - q);
  long double term = 1.0L;
  long double sum = 1.0L;
  for (std::int64_t j = start; j < n; ++j) {
    const long double ratio = static_cast<long double>(n - j) /
                              static_cast<long double>(j + 1) * odds;
    term *= ratio;
    sum += term;
    const long double next = static_cast<long double>(n - j - 1) /
                             static_cast<long double>(j + 2) * odds;
    if (next < 1.0L && term * next / (1.0L - next) < kTailCutoff * sum) break;
  }
  return sum;
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

// P(|T| >= |t|) for T ~ Student-t(dof).
double student_t_two_sided(double t, double dof) {
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

}  // namespace

double binom_pvalue(std::int64_t n, std::int64_t k, double q) {
  if (n < 1) throw ArgumentError("binom_pvalue: n must be positive");
  if (k < 0 || k > n) throw ArgumentError("binom_pvalue: k outside [0,n]");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("binom_pvalue: q outside [0,1]");

  if (q == 0.0) return k == 0 ? 1.0 : 0.0;
  if (q == 1.0) return k == n ? 1.0 : 0.0;

  const BinomialLogPmf log_pmf(n, q);
  const double threshold = log_pmf(k) + std::log1p(kBinomialMassSlack);
  const auto within = [&](std::int64_t j) { return log_pmf(j) <= threshold; };

  // f is non-decreasing on [0, mode] and strictly decreasing on [mode, n].
  const auto mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor(static_cast<double>(n + 1) * q)), 0, n);

  // Largest j in [lo, hi] with within(j), given within is a prefix property.
  const auto last_within = [&](std::int64_t lo, std::int64_t hi) {
    std::int64_t found = lo - 1;
    while (lo <= hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (within(mid)) {
        found = mid;
        lo = mid + 1;
      } else {
        hi = mid - 1;
      }
    }
    return found;
  };
  // Smallest j in [lo, hi] with within(j), given within is a suffix property.
  const auto first_within = [&](std::int64_t lo, std::int64_t hi) {
    std::int64_t found = hi + 1;
    while (lo <= hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (within(mid)) {
        found = mid;
        hi = mid - 1;
      } else {
        lo = mid + 1;
      }
    }
    return found;
  };

  std::int64_t left_end;     // outcomes 0..left_end are counted
  std::int64_t right_start;  // outcomes right_start..n are counted
  if (k <= mode) {
    left_end = last_within(k, mode);
    right_start = first_within(std::max(mode, left_end + 1), n);
  } else {
    right_start = first_within(mode, k);
    left_end = last_within(0, std::min(mode, right_start - 1));
  }

  long double p = 0.0L;
  if (left_end >= 0) {
    p += std::exp(static_cast<long double>(log_pmf(left_end))) *
         left_tail_relative(n, left_end, q);
  }
  if (right_start <= n) {
    p += std::exp(static_cast<long double>(log_pmf(right_start))) *
         right_tail_relative(n, right_start, q);
  }
  return std::clamp(static_cast<double>(p), 0.0, 1.0);
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw ArgumentError("student_t_cdf: dof must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  const double tail = 0.5 * student_t_two_sided(t, dof);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double t_pvalue(std::int64_t n, std::int64_t k, double q) {
  if (n < 2) throw ArgumentError("t_pvalue: at least two labels required");
  if (k < 0 || k > n) throw ArgumentError("t_pvalue: k outside [0,n]");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("t_pvalue: q outside [0,1]");
  if (k == 0 || k == n) {
    const double v = k == 0 ? 0.0 : 1.0;
    return q == v ? 1.0 : 0.0;
  }
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  const double mean = kd / nd;
  const double variance = kd * (nd - kd) / nd / (nd - 1.0);
  const double t = (mean - q) / std::sqrt(variance / nd);
  return std::clamp(student_t_two_sided(t, nd - 1.0), 0.0, 1.0);
}

double t_pvalue(const Eigen::Ref<const Eigen::VectorXi>& labels, double q) {
  return t_pvalue(labels.size(), labels.sum(), q);
}

TestOutcome reject(std::int64_t n, std::int64_t k, double q,
                   const TestConfig& cfg) {
  cfg.validate();
  if (n < 1) throw ArgumentError("reject: empty label set");
  TestOutcome out;
  switch (cfg.kind) {
    case TestKind::binomial:
      out.p_value = binom_pvalue(n, k, q);
      break;
    case TestKind::t_test:
      if (n == 1) {
        out.p_value = q == static_cast<double>(k) ? 1.0 : 0.0;
      } else {
        out.p_value = t_pvalue(n, k, q);
      }
      break;
  }
  out.rejected = out.p_value < cfg.alpha;
  return out;
}

TestOutcome reject(const Eigen::Ref<const Eigen::VectorXi>& labels, double q,
                   const TestConfig& cfg) {
  return reject(labels.size(), labels.sum(), q, cfg);
}

}  // namespace tcal
