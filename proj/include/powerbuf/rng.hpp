#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace powerbuf {

// Seeded random stream. The pair (seed, stream) fully determines the
// sequence, so replications and batches can each own an independent stream
// without sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x70627566u};
    engine_.seed(seq);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Exponential variate with the given mean.
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace powerbuf
