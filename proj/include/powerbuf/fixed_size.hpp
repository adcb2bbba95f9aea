#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "powerbuf/distribution.hpp"
#include "powerbuf/profile.hpp"

namespace powerbuf {

/// Fixed-size buffering: the node transmits as soon as the buffered volume
/// first reaches the threshold b. Powers are long-run means in uW.

struct FixedSizeEval {
  double b = 0.0;      // bytes
  double power = 0.0;  // uW
  long banks = 0;      // ceil(b / b_size)
};

inline long bank_count(double bytes, double b_size) {
  return std::max(1L, static_cast<long>(std::ceil(bytes / b_size)));
}

namespace detail {

// Per-arrival energy that does not depend on the policy: receive + transmit
// (e_tx used for both directions), write + read, receive wakeup, and the
// 2 e_resyn bank resynchronization.
inline double per_arrival_energy(const HardwareProfile& h, double mean) {
  return mean * (2.0 * h.e_tx() + h.e_w() + h.e_r()) + h.e_wu() + 2.0 * h.e_resyn();
}

}  // namespace detail

inline double avg_power_fs(const HardwareProfile& h, const TrafficProfile& t, double b) {
  detail::require_positive(b, "buffer size b");
  const double mu = t.mean_size();
  const auto n = detail::normalized_moments(t.size());
  const double k = k_star(t.size());
  const double idle_per_byte = h.p_idle() / (2.0 * h.b_size());
  return (t.lambda() * mu * h.e_wu() + idle_per_byte * mu * mu * k) / b +
         t.lambda() * detail::per_arrival_energy(h, mu) + idle_per_byte * mu * (n.cv2 - 1.0) +
         idle_per_byte * b;
}

inline FixedSizeEval evaluate_fixed_size(const HardwareProfile& h, const TrafficProfile& t,
                                         double b) {
  return {b, avg_power_fs(h, t, b), bank_count(b, h.b_size())};
}

namespace detail {

inline double wakeup_radicand(const HardwareProfile& h, const TrafficProfile& t) {
  return 2.0 * h.b_size() * h.e_wu() * bandwidth(t) / h.p_idle();
}

}  // namespace detail

/// Threshold minimizing avg_power_fs:
/// b* = sqrt(2 b_size e_wu lambda mu / p_idle + mu^2 k*).
inline double optimal_size(const HardwareProfile& h, const TrafficProfile& t) {
  const double mu = t.mean_size();
  const double radicand = detail::wakeup_radicand(h, t) + mu * mu * k_star(t.size());
  if (!(radicand > 0.0)) {
    throw infeasible_error("no positive optimal buffer size: radicand is " +
                           std::to_string(radicand));
  }
  return std::sqrt(radicand);
}

inline FixedSizeEval optimal_fixed_size(const HardwareProfile& h, const TrafficProfile& t) {
  return evaluate_fixed_size(h, t, optimal_size(h, t));
}

/// Best bank-aligned threshold: evaluates the two multiples of b_size
/// around b* and keeps the cheaper one.
inline FixedSizeEval quantized_optimal_size(const HardwareProfile& h, const TrafficProfile& t) {
  const double b_star = optimal_size(h, t);
  const double lo = std::max(1.0, std::floor(b_star / h.b_size())) * h.b_size();
  const double hi = std::max(1.0, std::ceil(b_star / h.b_size())) * h.b_size();
  const auto a = evaluate_fixed_size(h, t, lo);
  const auto b = evaluate_fixed_size(h, t, hi);
  return b.power < a.power ? b : a;
}

/// Optimal bank count when every datum is exactly one bank long:
/// n* = sqrt(2 lambda e_wu / p_idle + 1/12).
inline double optimal_bank_count(const HardwareProfile& h, const TrafficProfile& t) {
  const auto* c = std::get_if<SizeDistribution::Constant>(&t.size().law());
  if (c == nullptr || c->value != h.b_size()) {
    throw precondition_error("optimal_bank_count requires constant sizes equal to b_size");
  }
  return std::sqrt(2.0 * t.lambda() * h.e_wu() / h.p_idle() + 1.0 / 12.0);
}

/// Extra buffer caused purely by size variability: b*(k*) - b*(k* = 0).
inline double size_variation_penalty(const HardwareProfile& h, const TrafficProfile& t) {
  return optimal_size(h, t) - std::sqrt(detail::wakeup_radicand(h, t));
}

/// Size-variability effect relative to the variability-free optimum,
/// sqrt(1 + mu p_idle k* / (2 lambda e_wu b_size)) - 1.
inline double relative_variation_effect(const HardwareProfile& h, const TrafficProfile& t) {
  optimal_size(h, t);  // feasibility
  const double x = t.mean_size() * h.p_idle() * k_star(t.size()) /
                   (2.0 * t.lambda() * h.e_wu() * h.b_size());
  return std::sqrt(1.0 + x) - 1.0;
}

/// Excess power of threshold b over the optimal threshold (>= 0), in the
/// factored form (b* - b)(A / (b b*) - p_idle / (2 b_size)) with A the
/// numerator of the 1/b term, which is exactly zero at b = b*.
inline double gain_fs(const HardwareProfile& h, const TrafficProfile& t, double b) {
  detail::require_positive(b, "buffer size b");
  const double b_star = optimal_size(h, t);
  const double mu = t.mean_size();
  const double a = t.lambda() * mu * h.e_wu() +
                   h.p_idle() * mu * mu * k_star(t.size()) / (2.0 * h.b_size());
  return (b_star - b) * (a / (b * b_star) - h.p_idle() / (2.0 * h.b_size()));
}

// Optimal fixed-size power split into its buffering part and the part that
// scales with bandwidth (transmission + reception).
struct PowerComponents {
  double buffering = 0.0;
  double trans_rec = 0.0;
  double total() const { return buffering + trans_rec; }
};

inline PowerComponents fs_optimal_components(const HardwareProfile& h, const TrafficProfile& t) {
  const double b_star = optimal_size(h, t);
  const double mu = t.mean_size();
  const double cv2 = detail::normalized_moments(t.size()).cv2;
  const double lambda = t.lambda();
  PowerComponents c;
  c.buffering = h.p_idle() * b_star / h.b_size() + h.p_idle() * mu * (cv2 - 1.0) / (2.0 * h.b_size()) +
                lambda * (2.0 * h.e_resyn() + h.e_wu() + mu * (h.e_w() + h.e_r()));
  c.trans_rec = 2.0 * lambda * mu * h.e_tx();
  return c;
}

}  // namespace powerbuf
