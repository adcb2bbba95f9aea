#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "powerbuf/fixed_interval.hpp"
#include "powerbuf/profile.hpp"

namespace powerbuf {

// One-level data-collection tree: a parent node relays the data of k
// children, every node running optimal fixed-interval buffering.

struct ChildSpec {
  double lambda = 0.0;  // 1/s
  double mu = 0.0;      // bytes

  ChildSpec(double rate, double mean) : lambda(rate), mu(mean) {
    detail::require_positive(lambda, "child arrival rate");
    detail::require_positive(mu, "child mean size");
  }

  double bandwidth() const { return lambda * mu; }
};

/// Per-child bandwidths lambda_i mu_i (bytes/s). Zero entries are allowed
/// (idle children); at least one entry must be positive.
class BandwidthVector {
 public:
  explicit BandwidthVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw domain_error("bandwidth vector needs at least one child");
    for (double e : entries_) {
      if (!(e >= 0.0) || !std::isfinite(e)) throw domain_error("bandwidths must be finite and >= 0");
    }
    if (!(total() > 0.0)) throw domain_error("total bandwidth must be positive");
  }

  static BandwidthVector from_children(std::span<const ChildSpec> children) {
    std::vector<double> v;
    v.reserve(children.size());
    for (const auto& c : children) v.push_back(c.bandwidth());
    return BandwidthVector(std::move(v));
  }

  // Every child carries total / k.
  static BandwidthVector uniform(double total, std::size_t k) {
    if (k == 0) throw domain_error("k must be >= 1");
    return BandwidthVector(std::vector<double>(k, total / static_cast<double>(k)));
  }

  // One child carries everything.
  static BandwidthVector degenerate(double total, std::size_t k) {
    if (k == 0) throw domain_error("k must be >= 1");
    std::vector<double> v(k, 0.0);
    v[0] = total;
    return BandwidthVector(std::move(v));
  }

  std::span<const double> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double total() const { return std::accumulate(entries_.begin(), entries_.end(), 0.0); }

 private:
  std::vector<double> entries_;
};

inline double parent_optimal_interval(const HardwareProfile& h, const BandwidthVector& v) {
  return std::sqrt(2.0 * h.e_wu() * h.b_size() / (h.p_idle() * v.total()));
}

/// T_p* = sqrt(2 e_wu b_size / (p_idle sum lambda_i mu_i)).
inline double parent_optimal_interval(const HardwareProfile& h, std::span<const ChildSpec> children) {
  if (children.empty()) throw domain_error("parent needs at least one child");
  return parent_optimal_interval(h, BandwidthVector::from_children(children));
}

/// Parent power at T_p* with every child sending at its own optimal interval.
/// Children with zero bandwidth never transmit and add nothing.
inline double parent_power(const HardwareProfile& h, const BandwidthVector& v) {
  const double total = v.total();
  double sqrt_sum = 0.0;
  for (double e : v.entries()) sqrt_sum += std::sqrt(e);
  return std::sqrt(2.0 * h.p_idle() * h.e_wu() * total / h.b_size()) +
         (2.0 * h.e_tx() + h.e_w() + h.e_r()) * total +
         (h.e_resyn() + h.e_wu() / 2.0) * std::sqrt(2.0 * h.p_idle() / (h.e_wu() * h.b_size())) *
             sqrt_sum;
}

inline double parent_power(const HardwareProfile& h, std::span<const ChildSpec> children) {
  if (children.empty()) throw domain_error("parent needs at least one child");
  return parent_power(h, BandwidthVector::from_children(children));
}

/// True when x is majorized by y (x is the more even of the two): the
/// ascending partial sums of x dominate those of y and the totals agree.
inline bool majorizes(const BandwidthVector& x, const BandwidthVector& y) {
  if (x.size() != y.size()) throw precondition_error("majorization needs equal lengths");
  const double tx = x.total();
  const double ty = y.total();
  if (std::abs(tx - ty) > 1e-9 * std::max(tx, ty)) {
    throw precondition_error("majorization needs equal totals");
  }
  std::vector<double> xs(x.entries().begin(), x.entries().end());
  std::vector<double> ys(y.entries().begin(), y.entries().end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double slack = 1e-12 * std::max(tx, ty);
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    if (sx < sy - slack) return false;
  }
  return true;
}

/// Parent power under v minus under v_prime, for v majorized by v_prime
/// (>= 0: the more even split costs the parent more).
inline double power_ordering_check(const HardwareProfile& h, const BandwidthVector& v,
                                   const BandwidthVector& v_prime) {
  if (!majorizes(v, v_prime)) throw precondition_error("v must be majorized by v_prime");
  double diff = 0.0;
  for (double e : v.entries()) diff += std::sqrt(e);
  for (double e : v_prime.entries()) diff -= std::sqrt(e);
  return (h.e_resyn() + h.e_wu() / 2.0) * std::sqrt(2.0 * h.p_idle() / (h.e_wu() * h.b_size())) *
         diff;
}

/// Spread between the most even and the most concentrated split of a total
/// bandwidth over k children.
inline double range_bound(const HardwareProfile& h, double total_bandwidth, std::size_t k) {
  if (k == 0) throw domain_error("k must be >= 1");
  detail::require_positive(total_bandwidth, "total bandwidth");
  return (h.e_resyn() + h.e_wu() / 2.0) *
         std::sqrt(2.0 * h.p_idle() * total_bandwidth / (h.e_wu() * h.b_size())) *
         (std::sqrt(static_cast<double>(k)) - 1.0);
}

}  // namespace powerbuf
