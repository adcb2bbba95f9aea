#pragma once

#include "powerbuf/distribution.hpp"
#include "powerbuf/errors.hpp"

namespace powerbuf {

// Raw field values of a HardwareProfile. Units: uJ, uW, bytes.
struct HardwareParams {
  double e_wu = 80.0;       // uJ per radio wakeup
  double e_tx = 8.976;      // uJ per byte transmitted
  double e_rx = 8.976;      // uJ per byte received
  double p_idle = 0.409;    // uW per idle memory bank
  double e_r = 0.018;       // uJ per byte read from memory
  double e_w = 0.018;       // uJ per byte written to memory
  double e_resyn = 0.912;   // uJ per bank power-mode resynchronization
  double b_size = 128.0;    // bytes per memory bank

  bool operator==(const HardwareParams&) const = default;
};

/// Radio and memory-bank energy parameters. Immutable; every field is
/// validated strictly positive at construction.
class HardwareProfile {
 public:
  explicit HardwareProfile(const HardwareParams& params = {}) : p_(params) {
    detail::require_positive(p_.e_wu, "e_wu");
    detail::require_positive(p_.e_tx, "e_tx");
    detail::require_positive(p_.e_rx, "e_rx");
    detail::require_positive(p_.p_idle, "p_idle");
    detail::require_positive(p_.e_r, "e_r");
    detail::require_positive(p_.e_w, "e_w");
    detail::require_positive(p_.e_resyn, "e_resyn");
    detail::require_positive(p_.b_size, "b_size");
  }

  /// Resynchronization energy from the bank elevate/demote energies.
  static double resync_from_mode_energies(double e_enable, double e_demote) {
    detail::require_positive(e_enable, "e_ena");
    detail::require_positive(e_demote, "e_dem");
    return 0.5 * (e_enable + e_demote);
  }

  double e_wu() const { return p_.e_wu; }
  double e_tx() const { return p_.e_tx; }
  double e_rx() const { return p_.e_rx; }
  double p_idle() const { return p_.p_idle; }
  double e_r() const { return p_.e_r; }
  double e_w() const { return p_.e_w; }
  double e_resyn() const { return p_.e_resyn; }
  double b_size() const { return p_.b_size; }

  const HardwareParams& params() const { return p_; }

  // The closed forms assume e_tx == e_rx and use e_tx for both.
  bool radio_asymmetric() const { return p_.e_tx != p_.e_rx; }

  bool operator==(const HardwareProfile&) const = default;

 private:
  HardwareParams p_;
};

/// Radio/memory values used throughout the lifespan study: CC2420-class
/// radio at an effective 25 kbps, SRAM idle bank, Rambus-derived memory
/// access energies, 128-byte banks.
inline HardwareProfile default_table2_profile() { return HardwareProfile(HardwareParams{}); }

/// Poisson arrival rate plus the size law of each arrival.
class TrafficProfile {
 public:
  TrafficProfile(double lambda, SizeDistribution size) : lambda_(lambda), size_(size) {
    detail::require_positive(lambda, "arrival rate lambda");
  }

  double lambda() const { return lambda_; }
  const SizeDistribution& size() const { return size_; }
  double mean_size() const { return powerbuf::mean_size(size_); }

  TrafficProfile with_lambda(double lambda) const { return TrafficProfile(lambda, size_); }

  bool operator==(const TrafficProfile&) const = default;

 private:
  double lambda_;
  SizeDistribution size_;
};

/// Mean data volume per second, lambda * mu_y (bytes/s).
inline double bandwidth(const TrafficProfile& t) { return t.lambda() * t.mean_size(); }

}  // namespace powerbuf
