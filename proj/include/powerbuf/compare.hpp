#pragma once

#include <cmath>
#include <optional>

#include "powerbuf/fixed_interval.hpp"
#include "powerbuf/fixed_size.hpp"

namespace powerbuf {

enum class PreferredScheme { FixedSize, NoBuffer };

struct IncentiveReport {
  double f_lambda = 0.0;                // uW, no-buffer power minus optimal fixed-size power
  std::optional<double> lambda_c;       // 1/s, critical rate when a root exists
  std::optional<double> lambda_star;    // 1/s, minimizer of f over lambda
  PreferredScheme preferred = PreferredScheme::NoBuffer;
};

namespace detail {

inline double incentive_at(const HardwareProfile& h, const SizeDistribution& d, double lambda) {
  const TrafficProfile t(lambda, d);
  const double mu = t.mean_size();
  const double cv2 = normalized_moments(d).cv2;
  return lambda * h.e_wu() -
         (h.p_idle() / h.b_size()) * (optimal_size(h, t) + mu * (cv2 - 1.0) / 2.0);
}

}  // namespace detail

/// f(lambda) = e(nb) - e_FS(b*) = lambda e_wu - (p_idle / b_size)(b* + mu (c_v^2 - 1) / 2).
/// Positive means optimal fixed-size buffering beats sending on arrival.
inline double incentive_differential(const HardwareProfile& h, const TrafficProfile& t) {
  return detail::incentive_at(h, t.size(), t.lambda());
}

/// lambda_c = 2 mu p_idle / (b_size e_wu), the no-buffer/fixed-size
/// crossover for exponential sizes.
inline double critical_rate_exponential(const HardwareProfile& h, double mean_size) {
  detail::require_positive(mean_size, "mean size");
  return 2.0 * mean_size * h.p_idle() / (h.b_size() * h.e_wu());
}

/// Stationary point of f(lambda): f'(lambda) = e_wu (1 - mu / b*) vanishes
/// where b* = mu, i.e. lambda* = mu p_idle (1 - k*) / (2 b_size e_wu).
/// Empty when k* >= 1 (f is then increasing on lambda > 0).
inline std::optional<double> incentive_minimizer(const HardwareProfile& h,
                                                 const SizeDistribution& d) {
  const double k = k_star(d);
  if (k >= 1.0) return std::nullopt;
  return mean_size(d) * h.p_idle() * (1.0 - k) / (2.0 * h.b_size() * h.e_wu());
}

struct ErlangIncentive {
  double f = 0.0;            // uW at the requested lambda
  double lambda_star = 0.0;  // 1/s
  double f_at_star = 0.0;    // uW
};

inline ErlangIncentive erlang_incentive(const HardwareProfile& h, double mean_size, int alpha,
                                        double lambda) {
  if (alpha < 1) throw domain_error("Erlang shape must be >= 1");
  detail::require_positive(mean_size, "mean size");
  const double a = alpha;
  const double b_size = h.b_size();
  const double p = h.p_idle();
  const double e = h.e_wu();
  const double b_star = std::sqrt(2.0 * lambda * b_size * e * mean_size / p +
                                  mean_size * mean_size / 12.0 * (1.0 - 1.0 / (a * a)));
  ErlangIncentive out;
  out.f = lambda * e - (p / b_size) * (b_star - mean_size / 2.0 * (1.0 - 1.0 / a));
  out.lambda_star = mean_size * p / (24.0 * b_size * e) * (11.0 + 1.0 / (a * a));
  out.f_at_star = -(mean_size * p / (24.0 * b_size)) * (1.0 + 12.0 / a - 1.0 / (a * a));
  return out;
}

struct CriticalRate {
  double lambda_c = 0.0;
  // A sign change of f below lambda* (f(0+) > 0 happens for low-variance
  // laws); it is reported but not taken as the critical rate.
  std::optional<double> lower_root;
};

/// Root of incentive_differential on (lambda*, inf) by bracketing bisection.
/// f is convex in lambda, so the root above lambda* is unique.
inline CriticalRate critical_rate_numeric(const HardwareProfile& h, const SizeDistribution& d,
                                          double rel_tol = 1e-9) {
  auto f = [&](double lambda) { return detail::incentive_at(h, d, lambda); };
  const double scale = critical_rate_exponential(h, mean_size(d));
  const auto star = incentive_minimizer(h, d);
  double lo = star ? *star : scale * 1e-12;
  if (!(f(lo) < 0.0)) {
    throw no_root_error("incentive differential is not negative at the lower bracket");
  }
  double hi = std::max(lo * 2.0, scale);
  for (int i = 0; f(hi) <= 0.0; ++i) {
    if (i > 200) throw no_root_error("incentive differential never turns positive");
    hi *= 2.0;
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  CriticalRate out;
  out.lambda_c = 0.5 * (lo + hi);

  if (star) {
    // scan (0, lambda*] on a log grid for a second sign change
    const double floor_rate = *star * 1e-6;
    double prev_x = floor_rate;
    double prev = f(prev_x);
    constexpr int kScan = 200;
    for (int i = 1; i <= kScan; ++i) {
      const double x = floor_rate * std::pow(*star / floor_rate, static_cast<double>(i) / kScan);
      const double fx = f(x);
      if ((prev > 0.0) != (fx > 0.0)) {
        double a = prev_x;
        double b = x;
        while (b - a > rel_tol * b) {
          const double mid = 0.5 * (a + b);
          ((f(mid) > 0.0) == (prev > 0.0) ? a : b) = mid;
        }
        out.lower_root = 0.5 * (a + b);
        break;
      }
      prev_x = x;
      prev = fx;
    }
  }
  return out;
}

inline IncentiveReport incentive_report(const HardwareProfile& h, const TrafficProfile& t) {
  IncentiveReport r;
  r.f_lambda = incentive_differential(h, t);
  r.lambda_star = incentive_minimizer(h, t.size());
  try {
    r.lambda_c = critical_rate_numeric(h, t.size()).lambda_c;
  } catch (const no_root_error&) {
  }
  r.preferred = r.f_lambda > 0.0 ? PreferredScheme::FixedSize : PreferredScheme::NoBuffer;
  return r;
}

/// g(T*, b*) = e_FI(T*) - e_FS(b*). Positive means fixed-size is cheaper.
inline double scheme_gap(const HardwareProfile& h, const TrafficProfile& t) {
  const double mu = t.mean_size();
  const double cv2 = detail::normalized_moments(t.size()).cv2;
  return std::sqrt(2.0 * mu * t.lambda() * h.p_idle() * h.e_wu() / h.b_size()) -
         (h.p_idle() / h.b_size()) * (optimal_size(h, t) + mu * (cv2 - 1.0) / 2.0);
}

}  // namespace powerbuf
