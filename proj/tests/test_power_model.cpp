#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "powerbuf/fixed_interval.hpp"
#include "powerbuf/fixed_size.hpp"

using namespace powerbuf;

namespace {

const HardwareProfile kHw = default_table2_profile();

TrafficProfile constant128(double lambda) { return {lambda, SizeDistribution::constant(128.0)}; }

struct RandomConfig {
  HardwareProfile hw;
  oracle::Hw raw;
  double lambda;
  double mu;
};

RandomConfig random_config(std::mt19937_64& gen) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  auto lu = [&](double lo, double hi) { return std::exp(u(std::log(lo), std::log(hi))); };
  HardwareParams p;
  p.e_wu = lu(1.0, 5000.0);
  p.e_tx = p.e_rx = lu(0.1, 20.0);
  p.p_idle = lu(0.01, 20.0);
  p.e_r = lu(0.001, 0.1);
  p.e_w = lu(0.001, 0.1);
  p.e_resyn = lu(0.1, 5.0);
  p.b_size = std::round(lu(32.0, 1024.0));
  oracle::Hw raw{p.e_wu, p.e_tx, p.p_idle, p.e_r, p.e_w, p.e_resyn, p.b_size};
  return {HardwareProfile(p), raw, lu(0.01, 20.0), lu(8.0, 1024.0)};
}

}  // namespace

TEST(FixedSize, ReferenceOperatingPoint) {
  const auto t = constant128(0.5);
  const auto e = optimal_fixed_size(kHw, t);
  EXPECT_NEAR(e.b, 1790.547, 1e-3);
  EXPECT_EQ(e.banks, 14);
  EXPECT_NEAR(e.power, 1197.660858, 1e-6);
}

TEST(FixedSize, PowerMatchesOracle) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_config(gen);
    const double cv = std::uniform_real_distribution<double>(0.0, 2.0)(gen);
    const double skew = std::uniform_real_distribution<double>(0.0, 3.0)(gen);
    const TrafficProfile t(c.lambda, SizeDistribution::from_moments(c.mu, cv, skew));
    const double b = std::uniform_real_distribution<double>(c.mu, 50.0 * c.mu)(gen);
    EXPECT_NEAR(avg_power_fs(c.hw, t, b), oracle::fs_power(c.raw, c.lambda, c.mu, cv, skew, b),
                1e-10 * oracle::fs_power(c.raw, c.lambda, c.mu, cv, skew, b));
  }
}

TEST(FixedSize, OptimumIsStationaryAndMinimal) {
  std::mt19937_64 gen(2);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_config(gen);
    const TrafficProfile t(c.lambda, SizeDistribution::exponential(c.mu));
    const double b = optimal_size(c.hw, t);
    EXPECT_NEAR(b, oracle::fs_b_star(c.raw, c.lambda, c.mu, 1.0, 2.0), 1e-10 * b);
    const double at = avg_power_fs(c.hw, t, b);
    EXPECT_LE(at, avg_power_fs(c.hw, t, b * 1.01));
    EXPECT_LE(at, avg_power_fs(c.hw, t, b * 0.99));
  }
}

TEST(FixedSize, InfeasibleRadicandThrows) {
  // a very negatively contributing k* at a tiny rate
  const TrafficProfile t(1e-9, SizeDistribution::from_moments(128.0, 2.0, 6.0));
  EXPECT_LT(k_star(t.size()), 0.0);
  EXPECT_THROW(optimal_size(kHw, t), infeasible_error);
}

TEST(FixedSize, BankCount) {
  EXPECT_EQ(bank_count(1.0, 128.0), 1);
  EXPECT_EQ(bank_count(128.0, 128.0), 1);
  EXPECT_EQ(bank_count(128.5, 128.0), 2);
  EXPECT_EQ(bank_count(1790.547, 128.0), 14);
}

TEST(FixedSize, QuantizedOptimumIsBankAlignedAndNoWorseThanNeighbours) {
  const auto t = constant128(0.5);
  const auto q = quantized_optimal_size(kHw, t);
  EXPECT_DOUBLE_EQ(std::fmod(q.b, 128.0), 0.0);
  EXPECT_GE(q.power, optimal_fixed_size(kHw, t).power);
  for (int n = 1; n <= 40; ++n) EXPECT_LE(q.power, avg_power_fs(kHw, t, n * 128.0));
}

TEST(FixedSize, OptimalBankCount) {
  EXPECT_NEAR(optimal_bank_count(kHw, constant128(1.0)), 19.780834, 1e-6);
  EXPECT_THROW(optimal_bank_count(kHw, TrafficProfile(1.0, SizeDistribution::constant(64.0))),
               precondition_error);
  EXPECT_THROW(optimal_bank_count(kHw, TrafficProfile(1.0, SizeDistribution::exponential(128.0))),
               precondition_error);
}

TEST(FixedSize, SizeVariationEffects) {
  EXPECT_NEAR(size_variation_penalty(kHw, constant128(0.5)), 0.381302, 1e-6);
  EXPECT_NEAR(relative_variation_effect(kHw, constant128(0.01)), 0.0105949155, 1e-9);
  EXPECT_EQ(size_variation_penalty(kHw, TrafficProfile(1.0, SizeDistribution::exponential(128.0))), 0.0);
}

TEST(FixedSize, GainIsNonNegativeAndZeroAtOptimum) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 100; ++i) {
    const auto c = random_config(gen);
    const TrafficProfile t(c.lambda, SizeDistribution::erlang_with_mean(3, c.mu));
    const double b_star = optimal_size(c.hw, t);
    EXPECT_EQ(gain_fs(c.hw, t, b_star), 0.0);
    for (double f : {0.1, 0.5, 0.9, 1.1, 2.0, 10.0}) {
      const double g = gain_fs(c.hw, t, f * b_star);
      EXPECT_GT(g, 0.0);
      const double direct = avg_power_fs(c.hw, t, f * b_star) - avg_power_fs(c.hw, t, b_star);
      EXPECT_NEAR(g, direct, 1e-9 * avg_power_fs(c.hw, t, b_star));
    }
  }
}

TEST(FixedSize, ComponentsSumToOptimalPower) {
  std::mt19937_64 gen(4);
  for (int i = 0; i < 100; ++i) {
    const auto c = random_config(gen);
    const TrafficProfile t(c.lambda, SizeDistribution::exponential(c.mu));
    const auto parts = fs_optimal_components(c.hw, t);
    const double p = optimal_fixed_size(c.hw, t).power;
    EXPECT_NEAR(parts.total(), p, 1e-9 * p);
  }
}

TEST(FixedInterval, ReferenceOperatingPoint) {
  const auto t = constant128(1.0);
  EXPECT_NEAR(optimal_interval(kHw, t), 19.7787, 1e-4);
  EXPECT_NEAR(power_at_optimal_fi(kHw, t), 2392.377499, 1e-6);
}

TEST(FixedInterval, PowerMatchesOracleAndClosedFormOptimum) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_config(gen);
    const TrafficProfile t(c.lambda, SizeDistribution::exponential(c.mu));
    const double T = std::uniform_real_distribution<double>(0.1, 500.0)(gen);
    const double p = avg_power_fi(c.hw, t, T);
    EXPECT_NEAR(p, oracle::fi_power(c.raw, c.lambda, c.mu, T), 1e-10 * p);
    const double t_star = optimal_interval(c.hw, t);
    EXPECT_NEAR(t_star, oracle::fi_t_star(c.raw, c.lambda, c.mu), 1e-12 * t_star);
    const double at = power_at_optimal_fi(c.hw, t);
    EXPECT_NEAR(at, avg_power_fi(c.hw, t, t_star), 1e-10 * at);
    EXPECT_LE(at, avg_power_fi(c.hw, t, t_star * 1.001) + 1e-12 * at);
    EXPECT_LE(at, avg_power_fi(c.hw, t, t_star * 0.999) + 1e-12 * at);
  }
}

TEST(FixedInterval, IgnoresSizeShape) {
  const TrafficProfile a(0.7, SizeDistribution::exponential(100.0));
  const TrafficProfile b(0.7, SizeDistribution::constant(100.0));
  EXPECT_DOUBLE_EQ(avg_power_fi(kHw, a, 12.0), avg_power_fi(kHw, b, 12.0));
}

TEST(FixedInterval, GainAtTwiceOptimum) {
  // g(2T*) = S/4 with S = sqrt(2 p e lambda mu / b_size)
  HardwareParams p;
  const HardwareProfile h(p);
  const TrafficProfile t(1.0, SizeDistribution::exponential(64.0));
  const double T = 2.0 * optimal_interval(h, t);
  EXPECT_NEAR(gain_fi(h, t, T), 1.43003496, 1e-8);
  EXPECT_NEAR(gain_fi(h, t, optimal_interval(h, t)), 0.0, 1e-12);
}

TEST(NoBuffer, ReferenceValueAndOracle) {
  EXPECT_NEAR(no_buffer_power(kHw, constant128(1.0)), 2464.288, 1e-9);
  EXPECT_EQ(no_buffer_power(kHw, 0.0, 128.0), 0.0);
  EXPECT_THROW(no_buffer_power(kHw, -1.0, 128.0), domain_error);
  std::mt19937_64 gen(6);
  for (int i = 0; i < 50; ++i) {
    const auto c = random_config(gen);
    const double v = no_buffer_power(c.hw, c.lambda, c.mu);
    EXPECT_NEAR(v, oracle::no_buffer(c.raw, c.lambda, c.mu), 1e-12 * v);
  }
}

TEST(Schemes, ExponentialSizesMakeOptimaCoincide) {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 100; ++i) {
    const auto c = random_config(gen);
    const TrafficProfile t(c.lambda, SizeDistribution::exponential(c.mu));
    const double fs = optimal_fixed_size(c.hw, t).power;
    EXPECT_NEAR(fs, power_at_optimal_fi(c.hw, t), 1e-9 * fs);
  }
}

TEST(HardwareProfile, RejectsNonPositiveFields) {
  HardwareParams p;
  p.p_idle = 0.0;
  EXPECT_THROW(HardwareProfile{p}, domain_error);
  p = {};
  p.b_size = -1.0;
  EXPECT_THROW(HardwareProfile{p}, domain_error);
  EXPECT_THROW(TrafficProfile(0.0, SizeDistribution::constant(1.0)), domain_error);
  EXPECT_DOUBLE_EQ(HardwareProfile::resync_from_mode_energies(1.0, 3.0), 2.0);
  EXPECT_FALSE(kHw.radio_asymmetric());
}
