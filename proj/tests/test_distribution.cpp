#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "powerbuf/distribution.hpp"
#include "powerbuf/errors.hpp"
#include "powerbuf/rng.hpp"

using namespace powerbuf;

TEST(KStar, ExponentialIsExactlyZero) {
  for (double mean : {1.0, 64.0, 128.0, 1e6}) {
    EXPECT_EQ(k_star(SizeDistribution::exponential(mean)), 0.0);
  }
}

TEST(KStar, ConstantIsOneTwelfth) {
  EXPECT_DOUBLE_EQ(k_star(SizeDistribution::constant(128.0)), 1.0 / 12.0);
}

TEST(KStar, ErlangMatchesRationalForm) {
  for (int a : {1, 2, 3, 4, 8, 16}) {
    const double expected = (1.0 - 1.0 / (a * a)) / 12.0;
    EXPECT_NEAR(k_star(SizeDistribution::erlang_with_mean(a, 128.0)), expected, 1e-15) << "alpha=" << a;
  }
}

TEST(KStar, MatchesCvSkewPolynomial) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> cv(0.0, 3.0);
  std::uniform_real_distribution<double> skew(-2.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    const double c = cv(gen);
    const double g = skew(gen);
    const double k = k_star(SizeDistribution::from_moments(100.0, c, g));
    EXPECT_NEAR(k, oracle::k_star(c, g), 1e-12 * std::max(1.0, std::abs(k)));
  }
}

TEST(Moments, ParametricLaws) {
  const auto e = moments(SizeDistribution::exponential(50.0));
  EXPECT_DOUBLE_EQ(e.mean, 50.0);
  EXPECT_DOUBLE_EQ(e.variance, 2500.0);
  EXPECT_DOUBLE_EQ(e.cv, 1.0);
  EXPECT_DOUBLE_EQ(e.skew, 2.0);

  const auto erl = moments(SizeDistribution::erlang(4, 0.5));
  EXPECT_DOUBLE_EQ(erl.mean, 8.0);
  EXPECT_DOUBLE_EQ(erl.variance, 16.0);
  EXPECT_DOUBLE_EQ(erl.cv, 0.5);
  EXPECT_DOUBLE_EQ(erl.skew, 1.0);

  const auto c = moments(SizeDistribution::constant(3.0));
  EXPECT_EQ(c.variance, 0.0);
  EXPECT_EQ(c.skew, 0.0);
}

TEST(Moments, HyperexponentialAgainstDirectSums) {
  const double p = 0.3, m1 = 200.0, m2 = 20.0;
  const auto m = moments(SizeDistribution::hyperexp2(p, m1, m2));
  const double e1 = p * m1 + (1 - p) * m2;
  const double e2 = 2 * (p * m1 * m1 + (1 - p) * m2 * m2);
  const double e3 = 6 * (p * m1 * m1 * m1 + (1 - p) * m2 * m2 * m2);
  const double var = e2 - e1 * e1;
  const double c3 = e3 - 3 * e1 * e2 + 2 * e1 * e1 * e1;
  EXPECT_NEAR(m.mean, e1, 1e-12 * e1);
  EXPECT_NEAR(m.variance, var, 1e-10 * var);
  EXPECT_NEAR(m.skew, c3 / std::pow(var, 1.5), 1e-10);
}

TEST(HyperexpFit, RecoversRequestedMoments) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> cv(1.05, 4.0);
  std::uniform_real_distribution<double> extra(0.05, 3.0);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const double c = cv(gen);
    // H2 skewness is bounded below by that of the limiting degenerate fit;
    // aim above the balanced law's skewness to stay feasible.
    const auto balanced = moments(hyperexp2_balanced(64.0, c));
    const double g = balanced.skew + extra(gen);
    const auto fit = hyperexp2_fit(64.0, c, g);
    const auto m = moments(fit);
    EXPECT_NEAR(m.mean, 64.0, 1e-9 * 64.0);
    EXPECT_NEAR(m.cv, c, 1e-9 * c);
    EXPECT_NEAR(m.skew, g, 1e-7 * g);
    ++checked;
  }
  EXPECT_EQ(checked, 300);
}

TEST(HyperexpFit, HeavyTailedSetOfTheComparisonStudy) {
  const auto fit = hyperexp2_fit(64.0, 1.72, 2.72);
  const auto& law = std::get<SizeDistribution::Hyperexp2>(fit.law());
  EXPECT_NEAR(law.p, 0.496122320717613, 1e-9);
  EXPECT_NEAR(law.mean1, 127.823975659988, 1e-7);
  EXPECT_NEAR(law.mean2, 1.15836159491379, 1e-9);
  EXPECT_NEAR(k_star(fit), 1.79644416, 1e-9);
}

TEST(HyperexpFit, InfeasibleInputsThrow) {
  EXPECT_THROW(hyperexp2_fit(64.0, 0.9, 2.0), infeasible_error);
  EXPECT_THROW(hyperexp2_fit(64.0, 1.72, 1.0), infeasible_error);
}

TEST(HyperexpBalanced, HitsTargetCv) {
  for (double c : {1.0, 1.2, 1.5, 2.0, 3.5}) {
    const auto m = moments(hyperexp2_balanced(10.0, c));
    EXPECT_NEAR(m.mean, 10.0, 1e-12);
    EXPECT_NEAR(m.cv, c, 1e-12);
  }
  EXPECT_THROW(hyperexp2_balanced(10.0, 0.8), domain_error);
}

TEST(SizeDistribution, ValidatesParameters) {
  EXPECT_THROW(SizeDistribution::constant(0.0), domain_error);
  EXPECT_THROW(SizeDistribution::exponential(-1.0), domain_error);
  EXPECT_THROW(SizeDistribution::erlang(0, 1.0), domain_error);
  EXPECT_THROW(SizeDistribution::hyperexp2(1.5, 1.0, 2.0), domain_error);
  EXPECT_THROW(SizeDistribution::from_moments(1.0, -0.5, 0.0), domain_error);
  EXPECT_THROW(SizeDistribution::from_moments(1.0, 0.5, NAN), domain_error);
}

TEST(StoppingTimeStats, AsymptoticFormula) {
  const auto s = stopping_time_stats(SizeDistribution::exponential(128.0), 12800.0);
  EXPECT_DOUBLE_EQ(s.mean_tau, 100.0);
  EXPECT_DOUBLE_EQ(s.var_tau, 100.0);
  const auto erl = stopping_time_stats(SizeDistribution::erlang_with_mean(4, 128.0), 12800.0);
  EXPECT_NEAR(erl.var_tau, 25.078125, 1e-12);
}

TEST(StoppingTimeStats, ClampsToSupport) {
  // a tiny threshold with a strongly skewed law gives a negative raw variance
  const auto law = SizeDistribution::from_moments(100.0, 1.0, 5.0);
  const auto s = stopping_time_stats(law, 1.0);
  EXPECT_EQ(s.mean_tau, 1.0);
  EXPECT_EQ(s.var_tau, 0.0);
}

TEST(VarianceGap, EqualMeansOnly) {
  const auto a = SizeDistribution::exponential(128.0);
  const auto b = SizeDistribution::constant(128.0);
  EXPECT_NEAR(variance_gap(a, b, 12800.0), 100.0 - 1.0 / 12.0, 1e-12);
  EXPECT_THROW(variance_gap(a, SizeDistribution::constant(64.0), 100.0), precondition_error);
}

TEST(Sampling, EmpiricalMomentsMatch) {
  Rng rng(2024);
  const std::vector<SizeDistribution> laws{SizeDistribution::exponential(50.0),
                                           SizeDistribution::erlang_with_mean(4, 50.0),
                                           SizeDistribution::hyperexp2(0.2, 200.0, 12.5)};
  for (const auto& d : laws) {
    const auto target = moments(d);
    const int n = 400000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = sample(d, rng);
      s1 += y;
      s2 += y * y;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    EXPECT_NEAR(mean, target.mean, 0.01 * target.mean) << to_string(d.kind());
    EXPECT_NEAR(var, target.variance, 0.03 * target.variance) << to_string(d.kind());
  }
  EXPECT_EQ(sample(SizeDistribution::constant(7.0), rng), 7.0);
}

TEST(Sampling, MomentsOnlyLawIsUnsupported) {
  Rng rng(1);
  EXPECT_THROW(sample(SizeDistribution::from_moments(10.0, 1.0, 0.0), rng), unsupported_error);
  EXPECT_FALSE(SizeDistribution::from_moments(10.0, 1.0, 0.0).sampleable());
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a(5, 0), b(5, 0), c(5, 1), d(6, 0);
  const auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
  EXPECT_NE(x, d.next_u64());
  Rng u(9);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}
