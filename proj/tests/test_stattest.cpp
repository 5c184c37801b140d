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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tcal/stattest.hpp"

namespace tcal {
namespace {

// Direct enumeration of every outcome mass.
double enumerate_pvalue(int n, int k, double q) {
  std::vector<double> f(n + 1);
  for (int j = 0; j <= n; ++j) {
    if (q == 0.0) {
      f[j] = j == 0 ? 1.0 : 0.0;
    } else if (q == 1.0) {
      f[j] = j == n ? 1.0 : 0.0;
    } else {
      f[j] = std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                      j * std::log(q) + (n - j) * std::log1p(-q));
    }
  }
  double p = 0.0;
  for (int j = 0; j <= n; ++j) {
    if (f[j] <= f[k] * (1.0 + kBinomialMassSlack)) p += f[j];
  }
  return std::min(1.0, p);
}

Eigen::VectorXi labels(std::initializer_list<int> v) {
  Eigen::VectorXi out(static_cast<Index>(v.size()));
  Index i = 0;
  for (int x : v) out[i++] = x;
  return out;
}

TEST(Binomial, ModeGivesOne) { EXPECT_EQ(binom_pvalue(10, 5, 0.5), 1.0); }

TEST(Binomial, SymmetricTails) {
  EXPECT_NEAR(binom_pvalue(20, 0, 0.5), 2.0 * std::pow(0.5, 20), 1e-18);
  EXPECT_NEAR(binom_pvalue(20, 0, 0.5), 1.9073e-6, 1e-10);
}

TEST(Binomial, ImpossibleOutcome) {
  EXPECT_EQ(binom_pvalue(3, 2, 0.0), 0.0);
  EXPECT_EQ(binom_pvalue(3, 2, 1.0), 0.0);
  EXPECT_EQ(binom_pvalue(3, 0, 0.0), 1.0);
  EXPECT_EQ(binom_pvalue(3, 3, 1.0), 1.0);
}

TEST(Binomial, MatchesEnumerationAtFifty) {
  const double p = binom_pvalue(50, 5, 0.1);
  EXPECT_NEAR(p, enumerate_pvalue(50, 5, 0.1), 1e-12);
  EXPECT_GT(p, 0.05);
}

TEST(Binomial, RejectsInvalidArguments) {
  EXPECT_THROW(binom_pvalue(0, 0, 0.5), ArgumentError);
  EXPECT_THROW(binom_pvalue(5, 6, 0.5), ArgumentError);
  EXPECT_THROW(binom_pvalue(5, -1, 0.5), ArgumentError);
  EXPECT_THROW(binom_pvalue(5, 1, 1.5), ArgumentError);
  EXPECT_THROW(binom_pvalue(5, 1, std::nan("")), ArgumentError);
}

TEST(Binomial, LargeNStaysFinite) {
  const double p = binom_pvalue(100000, 1030, 0.01);
  EXPECT_GT(p, 0.0);
  EXPECT_LE(p, 1.0);
  EXPECT_LT(binom_pvalue(100000, 2000, 0.01), 1e-100);
}

TEST(BinomialProperty, SymmetryAtHalf) {
  for (int n = 1; n <= 200; n += 7) {
    for (int k = 0; k <= n; ++k) {
      EXPECT_EQ(binom_pvalue(n, k, 0.5), binom_pvalue(n, n - k, 0.5));
    }
  }
}

TEST(BinomialProperty, WithinUnitInterval) {
  for (int n : {1, 2, 9, 77, 301}) {
    for (double q : {0.0, 1e-6, 0.03, 0.5, 0.97, 1.0}) {
      for (int k = 0; k <= n; ++k) {
        const double p = binom_pvalue(n, k, q);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
      }
    }
  }
}

TEST(Reject, Examples) {
  const TestConfig cfg;
  EXPECT_FALSE(reject(labels({0, 1}), 0.5, cfg).rejected);
  const auto r = reject(labels({1, 1, 1}), 0.0, cfg);
  EXPECT_TRUE(r.rejected);
  EXPECT_EQ(r.p_value, 0.0);
  Eigen::VectorXi many = Eigen::VectorXi::Zero(110);
  many.tail(10).setOnes();
  EXPECT_TRUE(reject(many, 0.5, cfg).rejected);
  EXPECT_THROW(reject(Eigen::VectorXi(0), 0.5, cfg), ArgumentError);
}

TEST(Reject, ConfigValidation) {
  EXPECT_THROW((TestConfig{TestKind::binomial, 0.0}.validate()), ArgumentError);
  EXPECT_THROW((TestConfig{TestKind::binomial, 1.0}.validate()), ArgumentError);
  EXPECT_NO_THROW((TestConfig{TestKind::t_test, 0.5}.validate()));
}

TEST(RejectProperty, MonotoneInAlpha) {
  const double alphas[] = {0.001, 0.005, 0.01, 0.05, 0.1, 0.5};
  for (auto kind : {TestKind::binomial, TestKind::t_test}) {
    for (int n : {2, 5, 40}) {
      for (int k = 0; k <= n; ++k) {
        for (double q : {0.0, 0.1, 0.33, 0.5, 0.9, 1.0}) {
          bool prev = false;
          for (double a : alphas) {
            const auto out = reject(n, k, q, TestConfig{kind, a});
            EXPECT_EQ(out.rejected, out.p_value < a);
            if (prev) EXPECT_TRUE(out.rejected);
            prev = out.rejected;
          }
        }
      }
    }
  }
}

// Independent Student-t tail by Simpson integration of the density.
double t_two_sided_quadrature(double t, double dof) {
  const auto pdf = [dof](double x) {
    return std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2)) /
           std::sqrt(dof * M_PI) * std::pow(1 + x * x / dof, -(dof + 1) / 2);
  };
  const int steps = 200000;
  const double h = std::abs(t) / steps;
  double s = pdf(0) + pdf(std::abs(t));
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4 : 2) * pdf(i * h);
  const double central = s * h / 3;  // integral over [0, |t|]
  return 1.0 - 2.0 * central;
}

TEST(TTest, Examples) {
  EXPECT_EQ(t_pvalue(labels({0, 1}), 0.5), 1.0);
  EXPECT_EQ(t_pvalue(labels({1, 1, 1, 1}), 1.0), 1.0);
  EXPECT_EQ(t_pvalue(labels({1, 1, 1, 1}), 0.9), 0.0);
  EXPECT_FALSE(reject(labels({1, 1, 1, 1}), 1.0, {TestKind::t_test, 0.05}).rejected);
  EXPECT_THROW(t_pvalue(labels({1}), 0.5), ArgumentError);
}

TEST(TTest, ReferenceValue) {
  // mean 0.6, sd sqrt(4/15), t = 0.4 / sqrt(4/150) on 9 dof
  const auto y = labels({0, 0, 0, 0, 1, 1, 1, 1, 1, 1});
  const double p = t_pvalue(y, 0.2);
  const double t = 0.4 / std::sqrt((0.6 * 0.4 * 10.0 / 9.0) / 10.0);
  EXPECT_NEAR(p, t_two_sided_quadrature(t, 9.0), 1e-9);
  EXPECT_NEAR(p, 0.03678749787978613, 1e-9);
}

TEST(TTest, CdfSymmetry) {
  for (double dof : {1.0, 3.5, 30.0}) {
    for (double t : {0.0, 0.3, 1.7, 6.0}) {
      EXPECT_NEAR(student_t_cdf(t, dof) + student_t_cdf(-t, dof), 1.0, 1e-14);
    }
  }
  EXPECT_EQ(student_t_cdf(0.0, 4.0), 0.5);
  // Cauchy
  EXPECT_NEAR(student_t_cdf(1.0, 1.0), 0.75, 1e-14);
}

TEST(TTest, CountFormMatchesLabelForm) {
  const auto y = labels({0, 1, 1, 0, 1, 1, 1});
  EXPECT_NEAR(t_pvalue(y, 0.3), t_pvalue(7, 5, 0.3), 1e-15);
}

}  // namespace
}  // namespace tcal
