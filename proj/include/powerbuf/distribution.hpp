#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "powerbuf/errors.hpp"
#include "powerbuf/rng.hpp"

namespace powerbuf {

// First three standardized moments of a data-size law. Sizes are in bytes.
struct SizeMoments {
  double mean = 0.0;      // bytes
  double variance = 0.0;  // bytes^2
  double cv = 0.0;        // coefficient of variation
  double skew = 0.0;      // third standardized moment
};

enum class SizeKind { Constant, Exponential, Erlang, Hyperexp2, Moments };

/// Law of the per-arrival data size.
///
/// Parametric kinds (constant, exponential, Erlang, two-phase
/// hyperexponential) can be sampled; the Moments kind only carries measured
/// (mean, c_v, skew) so that the analytic models can be driven by traffic
/// statistics without a fitted law.
class SizeDistribution {
 public:
  struct Constant {
    double value;
    bool operator==(const Constant&) const = default;
  };
  struct Exponential {
    double mean;
    bool operator==(const Exponential&) const = default;
  };
  struct Erlang {
    int shape;
    double rate;  // 1/bytes
    bool operator==(const Erlang&) const = default;
  };
  struct Hyperexp2 {
    double p;  // weight of the first phase
    double mean1;
    double mean2;
    bool operator==(const Hyperexp2&) const = default;
  };
  struct Moments {
    double mean;
    double cv;
    double skew;
    bool operator==(const Moments&) const = default;
  };
  using Law = std::variant<Constant, Exponential, Erlang, Hyperexp2, Moments>;

  static SizeDistribution constant(double value) {
    detail::require_positive(value, "constant size");
    return SizeDistribution(Constant{value});
  }

  static SizeDistribution exponential(double mean) {
    detail::require_positive(mean, "exponential mean");
    return SizeDistribution(Exponential{mean});
  }

  static SizeDistribution erlang(int shape, double rate) {
    if (shape < 1) throw domain_error("Erlang shape must be >= 1");
    detail::require_positive(rate, "Erlang rate");
    return SizeDistribution(Erlang{shape, rate});
  }

  static SizeDistribution erlang_with_mean(int shape, double mean) {
    detail::require_positive(mean, "Erlang mean");
    return erlang(shape, shape / mean);
  }

  static SizeDistribution hyperexp2(double p, double mean1, double mean2) {
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error("hyperexponential weight p must lie in [0, 1]");
    detail::require_positive(mean1, "hyperexponential mean1");
    detail::require_positive(mean2, "hyperexponential mean2");
    return SizeDistribution(Hyperexp2{p, mean1, mean2});
  }

  static SizeDistribution from_moments(double mean, double cv, double skew) {
    detail::require_positive(mean, "mean size");
    if (!(cv >= 0.0) || !std::isfinite(cv)) throw domain_error("c_v must be finite and >= 0");
    if (!std::isfinite(skew)) throw domain_error("skewness must be finite");
    return SizeDistribution(Moments{mean, cv, skew});
  }

  const Law& law() const { return law_; }

  SizeKind kind() const { return static_cast<SizeKind>(law_.index()); }

  bool sampleable() const { return kind() != SizeKind::Moments; }

  bool operator==(const SizeDistribution&) const = default;

 private:
  explicit SizeDistribution(Law law) : law_(law) {}

  Law law_;
};

inline std::string to_string(SizeKind kind) {
  switch (kind) {
    case SizeKind::Constant: return "constant";
    case SizeKind::Exponential: return "exponential";
    case SizeKind::Erlang: return "erlang";
    case SizeKind::Hyperexp2: return "hyperexp";
    case SizeKind::Moments: return "moments";
  }
  return "unknown";
}

namespace detail {

// Mean plus the two dimensionless ratios k* is built from:
// var/mean^2 (= c_v^2) and third central moment / mean^3 (= c_v^3 * skew).
// Computed per kind from the parameters so that the textbook special cases
// come out exactly.
struct NormalizedMoments {
  double mean;
  double cv2;
  double central3;
};

inline NormalizedMoments normalized_moments(const SizeDistribution& d) {
  return std::visit(
      [](const auto& law) -> NormalizedMoments {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, SizeDistribution::Constant>) {
          return {law.value, 0.0, 0.0};
        } else if constexpr (std::is_same_v<T, SizeDistribution::Exponential>) {
          return {law.mean, 1.0, 2.0};
        } else if constexpr (std::is_same_v<T, SizeDistribution::Erlang>) {
          const double a = law.shape;
          return {a / law.rate, 1.0 / a, 2.0 / (a * a)};
        } else if constexpr (std::is_same_v<T, SizeDistribution::Hyperexp2>) {
          const double p = law.p;
          const double q = 1.0 - p;
          const double m = p * law.mean1 + q * law.mean2;
          const double r1 = law.mean1 / m;
          const double r2 = law.mean2 / m;
          // raw moments of y/m: E[y^k] = k! * sum p_i m_i^k
          const double raw2 = 2.0 * (p * r1 * r1 + q * r2 * r2);
          const double raw3 = 6.0 * (p * r1 * r1 * r1 + q * r2 * r2 * r2);
          return {m, raw2 - 1.0, raw3 - 3.0 * raw2 + 2.0};
        } else {
          const double c2 = law.cv * law.cv;
          return {law.mean, c2, c2 * law.cv * law.skew};
        }
      },
      d.law());
}

}  // namespace detail

inline double mean_size(const SizeDistribution& d) { return detail::normalized_moments(d).mean; }

inline SizeMoments moments(const SizeDistribution& d) {
  if (const auto* m = std::get_if<SizeDistribution::Moments>(&d.law())) {
    return {m->mean, (m->cv * m->mean) * (m->cv * m->mean), m->cv, m->skew};
  }
  const auto n = detail::normalized_moments(d);
  const double cv = std::sqrt(n.cv2);
  // A zero-variance law has 0/0 skewness; it is defined as 0.
  const double skew = n.cv2 > 0.0 ? n.central3 / (n.cv2 * cv) : 0.0;
  return {n.mean, n.cv2 * n.mean * n.mean, cv, skew};
}

/// Constant term of the asymptotic stopping-time variance for a positive
/// random walk: k* = (5/4)c_v^4 + 1/12 - (2/3)c_v^3 * skew.
inline double k_star(const SizeDistribution& d) {
  const auto n = detail::normalized_moments(d);
  // (15 c^4 + 1 - 8 c^3 g) / 12, grouped so exponential gives exactly 0.
  return (15.0 * n.cv2 * n.cv2 + 1.0 - 8.0 * n.central3) / 12.0;
}

struct StoppingStats {
  double mean_tau = 0.0;
  double var_tau = 0.0;
  double k_star = 0.0;
};

/// Asymptotic mean and variance of tau(b) = min{n : y_1 + ... + y_n >= b}.
/// mean_tau = b/mu and var_tau = b c_v^2 / mu + k*; the o(1) remainder is
/// dropped, so the numbers are meaningful for b well above the mean size.
/// Results are clamped to tau's support (mean >= 1, var >= 0).
inline StoppingStats stopping_time_stats(const SizeDistribution& d, double b) {
  detail::require_positive(b, "buffer size b");
  const auto n = detail::normalized_moments(d);
  const double k = k_star(d);
  const double mean_tau = b / n.mean;
  const double var_tau = mean_tau * n.cv2 + k;
  return {std::max(1.0, mean_tau), std::max(0.0, var_tau), k};
}

/// var_tau(d1, b) - var_tau(d2, b) for two laws with equal means.
inline double variance_gap(const SizeDistribution& d1, const SizeDistribution& d2, double b) {
  const double m1 = mean_size(d1);
  const double m2 = mean_size(d2);
  if (std::abs(m1 - m2) > 1e-9 * std::max(m1, m2)) {
    throw precondition_error("variance_gap requires equal mean sizes");
  }
  detail::require_positive(b, "buffer size b");
  const auto n1 = detail::normalized_moments(d1);
  const auto n2 = detail::normalized_moments(d2);
  return (b / m1) * (n1.cv2 - n2.cv2) + (k_star(d1) - k_star(d2));
}

/// Draws one size in bytes. Only parametric kinds are sampleable.
inline double sample(const SizeDistribution& d, Rng& rng) {
  return std::visit(
      [&rng](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, SizeDistribution::Constant>) {
          return law.value;
        } else if constexpr (std::is_same_v<T, SizeDistribution::Exponential>) {
          return rng.exponential(law.mean);
        } else if constexpr (std::is_same_v<T, SizeDistribution::Erlang>) {
          double s = 0.0;
          for (int i = 0; i < law.shape; ++i) s += rng.exponential(1.0);
          return s / law.rate;
        } else if constexpr (std::is_same_v<T, SizeDistribution::Hyperexp2>) {
          const double m = rng.uniform() < law.p ? law.mean1 : law.mean2;
          return rng.exponential(m);
        } else {
          throw unsupported_error("a moments-only size law cannot be sampled");
        }
      },
      d.law());
}

/// Two-phase hyperexponential with balanced means (p*mean1 = (1-p)*mean2)
/// matching a target mean and c_v >= 1. The mean is held fixed while p
/// moves c_v.
inline SizeDistribution hyperexp2_balanced(double mean, double cv) {
  detail::require_positive(mean, "mean size");
  if (!(cv >= 1.0)) throw domain_error("a hyperexponential law needs c_v >= 1");
  const double c2 = cv * cv;
  const double p = 0.5 * (1.0 + std::sqrt((c2 - 1.0) / (c2 + 1.0)));
  if (p >= 1.0) return SizeDistribution::exponential(mean);
  return SizeDistribution::hyperexp2(p, mean / (2.0 * p), mean / (2.0 * (1.0 - p)));
}

/// Two-phase hyperexponential matching mean, c_v and skewness exactly.
/// Throws infeasible_error when no such law exists (c_v <= 1, or skewness
/// below the hyperexponential lower bound for that c_v).
inline SizeDistribution hyperexp2_fit(double mean, double cv, double skew) {
  detail::require_positive(mean, "mean size");
  if (!(cv > 1.0)) throw infeasible_error("a non-degenerate hyperexponential law needs c_v > 1");
  const double c2 = cv * cv;
  // Reduced moments r_k = E[y^k] / (k! mean^k); the phase means are the
  // support points of a two-point law with moments (1, 1, r2, r3).
  const double raw2 = 1.0 + c2;
  const double raw3 = skew * c2 * cv + 3.0 * raw2 - 2.0;
  const double r2 = raw2 / 2.0;
  const double r3 = raw3 / 6.0;
  const double alpha = (r2 - r3) / (r2 - 1.0);
  const double beta = -r2 - alpha;
  const double disc = alpha * alpha - 4.0 * beta;
  if (!(beta > 0.0) || !(alpha < 0.0) || !(disc > 0.0)) {
    throw infeasible_error("no two-phase hyperexponential law has c_v = " + std::to_string(cv) +
                           " and skewness = " + std::to_string(skew));
  }
  const double root = std::sqrt(disc);
  const double x1 = (-alpha + root) / 2.0;
  const double x2 = (-alpha - root) / 2.0;
  const double p = (1.0 - x2) / (x1 - x2);
  return SizeDistribution::hyperexp2(p, x1 * mean, x2 * mean);
}

}  // namespace powerbuf
