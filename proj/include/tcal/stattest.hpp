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

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "tcal/core.hpp"

namespace tcal {

enum class TestKind { binomial, t_test };

std::string_view to_string(TestKind kind);
/// Accepts "binomial" and "t" / "t_test".
TestKind parse_test_kind(std::string_view text);

/// Configuration of the rejection function: test family and significance
/// level. Tests are always two-sided.
struct TestConfig {
  TestKind kind = TestKind::binomial;
  double alpha = 0.05;

  /// Throws ArgumentError unless alpha is in (0,1).
  void validate() const;
};

struct TestOutcome {
  double p_value = 1.0;
  bool rejected = false;
};

/// Relative slack under which two binomial masses count as equal.
inline constexpr double kBinomialMassSlack = 1e-7;

/// Exact two-sided binomial p-value by the minimum-likelihood method: the
/// total mass of all outcomes j with f(j) <= f(k) (1 + kBinomialMassSlack),
/// f being the Binomial(n, q) pmf. Log-space throughout, stable for n in the
/// hundreds of thousands.
double binom_pvalue(std::int64_t n, std::int64_t k, double q);

/// Student-t CDF with `dof` degrees of freedom (dof > 0).
double student_t_cdf(double t, double dof);

/// Two-sided one-sample t-test p-value of H0: mean(labels) == q.
///
/// Uses the n-1 sample standard deviation and n-1 degrees of freedom.
/// Zero-variance samples return 1 when q equals the common label and 0
/// otherwise. Requires at least two labels.
double t_pvalue(const Eigen::Ref<const Eigen::VectorXi>& labels, double q);
/// Same as above from sufficient statistics (n labels, k of them ones).
double t_pvalue(std::int64_t n, std::int64_t k, double q);

/// Rejection function on a bin's label counts: n labels, k positives.
TestOutcome reject(std::int64_t n, std::int64_t k, double q,
                   const TestConfig& cfg);

TestOutcome reject(const Eigen::Ref<const Eigen::VectorXi>& labels, double q,
                   const TestConfig& cfg);

}  // namespace tcal
