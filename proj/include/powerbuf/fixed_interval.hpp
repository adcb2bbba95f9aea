#pragma once

#include <cmath>

#include "powerbuf/fixed_size.hpp"
#include "powerbuf/profile.hpp"

namespace powerbuf {

// Fixed-interval buffering: the node transmits every T seconds whatever has
// accumulated. The power model reads the size law only through its mean.

struct FixedIntervalEval {
  double interval = 0.0;  // s
  double power = 0.0;     // uW
};

inline double avg_power_fi(const HardwareProfile& h, const TrafficProfile& t, double interval) {
  detail::require_positive(interval, "interval T");
  const double mu = t.mean_size();
  return h.e_wu() / interval + t.lambda() * interval * h.p_idle() * mu / (2.0 * h.b_size()) +
         t.lambda() * detail::per_arrival_energy(h, mu);
}

inline FixedIntervalEval evaluate_fixed_interval(const HardwareProfile& h, const TrafficProfile& t,
                                                 double interval) {
  return {interval, avg_power_fi(h, t, interval)};
}

/// T* = sqrt(2 e_wu b_size / (p_idle lambda mu)).
inline double optimal_interval(const HardwareProfile& h, const TrafficProfile& t) {
  const double bw = bandwidth(t);
  detail::require_positive(bw, "bandwidth");
  return std::sqrt(2.0 * h.e_wu() * h.b_size() / (h.p_idle() * bw));
}

namespace detail {

inline double interval_wakeup_term(const HardwareProfile& h, double bw) {
  return std::sqrt(2.0 * h.p_idle() * h.e_wu() * bw / h.b_size());
}

}  // namespace detail

/// Closed-form power at T*.
inline double power_at_optimal_fi(const HardwareProfile& h, const TrafficProfile& t) {
  const double bw = bandwidth(t);
  detail::require_positive(bw, "bandwidth");
  const double mu = t.mean_size();
  const double lambda = t.lambda();
  return detail::interval_wakeup_term(h, bw) +
         lambda * (2.0 * h.e_resyn() + h.e_wu() + mu * (h.e_w() + h.e_r())) +
         2.0 * lambda * mu * h.e_tx();
}

inline FixedIntervalEval optimal_fixed_interval(const HardwareProfile& h, const TrafficProfile& t) {
  return {optimal_interval(h, t), power_at_optimal_fi(h, t)};
}

/// Power when every datum is sent on arrival: one receive and one transmit
/// wakeup per datum, no buffering. lambda may be zero here.
inline double no_buffer_power(const HardwareProfile& h, double lambda, double mean_size) {
  if (!(lambda >= 0.0)) throw domain_error("arrival rate must be >= 0");
  detail::require_positive(mean_size, "mean size");
  return lambda * (2.0 * h.e_wu() + mean_size * (2.0 * h.e_tx() + h.e_w() + h.e_r()) +
                   2.0 * h.e_resyn());
}

inline double no_buffer_power(const HardwareProfile& h, const TrafficProfile& t) {
  return no_buffer_power(h, t.lambda(), t.mean_size());
}

/// Excess power of interval T over T*:
/// e_wu/T + T p_idle lambda mu / (2 b_size) - sqrt(2 p_idle e_wu lambda mu / b_size).
inline double gain_fi(const HardwareProfile& h, const TrafficProfile& t, double interval) {
  detail::require_positive(interval, "interval T");
  const double bw = bandwidth(t);
  return h.e_wu() / interval + interval * h.p_idle() * bw / (2.0 * h.b_size()) -
         detail::interval_wakeup_term(h, bw);
}

}  // namespace powerbuf
