#pragma once

#include <span>
#include <vector>

#include "powerbuf/fixed_interval.hpp"
#include "powerbuf/fixed_size.hpp"

namespace powerbuf {

struct Battery {
  double capacity_mah = 2700.0;
  double voltage = 3.3;

  Battery() = default;
  Battery(double capacity, double volts) : capacity_mah(capacity), voltage(volts) {
    detail::require_positive(capacity_mah, "battery capacity");
    detail::require_positive(voltage, "battery voltage");
  }
};

inline constexpr double kHoursPerYear = 24.0 * 365.0;

/// Years until the battery's energy (capacity x voltage) is drained at a
/// constant draw of power_uw. No discharge-curve derating.
inline double lifespan_years(const Battery& battery, double power_uw) {
  detail::require_positive(power_uw, "power");
  // mAh * V * 1000 = uW * h
  return battery.voltage * battery.capacity_mah * 1000.0 / (power_uw * kHoursPerYear);
}

struct LifespanRow {
  double lambda = 0.0;
  double power_fs_opt = 0.0;
  double life_fs_opt = 0.0;
  double power_fi_opt = 0.0;
  double life_fi_opt = 0.0;
  double power_fixed = 0.0;
  double life_fixed = 0.0;
};

inline const std::vector<double>& table3_default_rates() {
  static const std::vector<double> rates{1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
  return rates;
}

/// Optimal fixed-size, optimal fixed-interval and a fixed threshold
/// fixed_b, for constant one-bank data sizes (mu = b_size).
inline std::vector<LifespanRow> table3(const HardwareProfile& h, const Battery& battery,
                                       double fixed_b, std::span<const double> lambdas) {
  std::vector<LifespanRow> rows;
  rows.reserve(lambdas.size());
  const auto size = SizeDistribution::constant(h.b_size());
  for (double lambda : lambdas) {
    const TrafficProfile t(lambda, size);
    LifespanRow r;
    r.lambda = lambda;
    r.power_fs_opt = avg_power_fs(h, t, optimal_size(h, t));
    r.power_fi_opt = power_at_optimal_fi(h, t);
    r.power_fixed = avg_power_fs(h, t, fixed_b);
    r.life_fs_opt = lifespan_years(battery, r.power_fs_opt);
    r.life_fi_opt = lifespan_years(battery, r.power_fi_opt);
    r.life_fixed = lifespan_years(battery, r.power_fixed);
    rows.push_back(r);
  }
  return rows;
}

struct IntervalLifespanRow {
  double lambda = 0.0;
  double interval = 0.0;  // T*, s
  double power = 0.0;     // uW at T*
  double years = 0.0;
};

// Arrival rates of the fixed-interval lifespan table.
inline const std::vector<double>& table5_default_rates() {
  static const std::vector<double> rates{1.0, 2.0, 4.0, 8.0, 16.0};
  return rates;
}

// Second hardware setting of the fixed-interval lifespan table: a costlier
// wakeup and a leakier memory bank.
inline HardwareProfile table5_high_power_profile() {
  HardwareParams p;
  p.e_wu = 800.0;
  p.p_idle = 10.0;
  return HardwareProfile(p);
}

/// Optimal fixed-interval operating point per (profile, rate), constant
/// one-bank data sizes. Outer index follows `profiles`.
inline std::vector<std::vector<IntervalLifespanRow>> table5(
    std::span<const HardwareProfile> profiles, const Battery& battery,
    std::span<const double> lambdas) {
  std::vector<std::vector<IntervalLifespanRow>> out;
  for (const auto& h : profiles) {
    auto& rows = out.emplace_back();
    const auto size = SizeDistribution::constant(h.b_size());
    for (double lambda : lambdas) {
      const TrafficProfile t(lambda, size);
      IntervalLifespanRow r;
      r.lambda = lambda;
      r.interval = optimal_interval(h, t);
      r.power = power_at_optimal_fi(h, t);
      r.years = lifespan_years(battery, r.power);
      rows.push_back(r);
    }
  }
  return out;
}

/// Lifespan at the optimal fixed-size threshold for a symmetric (skew 0)
/// size law of the given mean, over a lambda x c_v grid.
/// result[i][j] corresponds to lambdas[i], cvs[j].
inline std::vector<std::vector<double>> lifespan_vs_cv(const HardwareProfile& h,
                                                       const Battery& battery,
                                                       std::span<const double> lambdas,
                                                       std::span<const double> cvs,
                                                       double mean_size = 128.0) {
  std::vector<std::vector<double>> grid;
  for (double lambda : lambdas) {
    auto& row = grid.emplace_back();
    for (double cv : cvs) {
      const TrafficProfile t(lambda, SizeDistribution::from_moments(mean_size, cv, 0.0));
      row.push_back(lifespan_years(battery, avg_power_fs(h, t, optimal_size(h, t))));
    }
  }
  return grid;
}

}  // namespace powerbuf
