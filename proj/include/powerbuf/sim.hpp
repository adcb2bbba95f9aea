#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "powerbuf/detail/parallel.hpp"
#include "powerbuf/distribution.hpp"
#include "powerbuf/fixed_interval.hpp"
#include "powerbuf/profile.hpp"
#include "powerbuf/rng.hpp"
#include "powerbuf/tree.hpp"

namespace powerbuf {

// Discrete-event Monte Carlo of a single buffering node. Energy is booked
// event by event (arrival, transmission, idle bank occupancy) rather than
// through the closed forms, so simulated and analytic powers are two
// independent routes to the same quantity.

struct EnergyMeters {
  double wakeup = 0.0;  // radio wakeups, receive and transmit
  double idle = 0.0;    // idle-mode memory banks holding buffered data
  double read = 0.0;
  double write = 0.0;
  double tx = 0.0;
  double rx = 0.0;
  double resync = 0.0;

  double total() const { return wakeup + idle + read + write + tx + rx + resync; }

  EnergyMeters& operator+=(const EnergyMeters& o) {
    wakeup += o.wakeup;
    idle += o.idle;
    read += o.read;
    write += o.write;
    tx += o.tx;
    rx += o.rx;
    resync += o.resync;
    return *this;
  }
};

struct FixedSizePolicy {
  double b;  // bytes
};
struct FixedIntervalPolicy {
  double interval;  // s
};
struct NoBufferPolicy {};
using Policy = std::variant<FixedSizePolicy, FixedIntervalPolicy, NoBufferPolicy>;

struct CycleHorizon {
  std::uint64_t cycles;
};
struct TimeHorizon {
  double seconds;
};
using Horizon = std::variant<CycleHorizon, TimeHorizon>;

// When the 2 e_resyn bank resynchronization is charged. The closed forms
// take its expectation per arrival; PerCycle charges it once per
// transmission cycle instead.
enum class ResyncAccounting { PerArrival, PerCycle };

// Continuous weights bank occupancy by buffered bytes / b_size;
// QuantizedBanks charges ceil(buffered / b_size) whole banks.
enum class IdleAccounting { Continuous, QuantizedBanks };

struct SimConfig {
  HardwareProfile hardware;
  TrafficProfile traffic;
  Policy policy;
  Horizon horizon = CycleHorizon{100000};
  std::uint64_t seed = 1;
  ResyncAccounting resync = ResyncAccounting::PerArrival;
  IdleAccounting idle = IdleAccounting::Continuous;
  int batches = 40;
  bool record_trace = false;
  unsigned threads = 0;  // 0: hardware concurrency, capped by POWERBUF_THREADS
};

struct CycleRecord {
  std::uint64_t index = 0;
  double length = 0.0;    // s
  std::uint64_t tau = 0;  // arrivals (or receptions) in the cycle
  EnergyMeters energy;
};

struct SimResult {
  double avg_power = 0.0;     // uW
  double total_energy = 0.0;  // uJ
  double total_time = 0.0;    // s
  std::uint64_t cycles = 0;
  double mean_tau = 0.0;
  double var_tau = 0.0;
  double mean_cycle_len = 0.0;  // s
  double stderr_power = 0.0;    // uW, batch means
  int batches = 0;
  EnergyMeters meters;
  std::vector<CycleRecord> trace;
};

namespace detail {

struct CycleOutcome {
  double length = 0.0;
  std::uint64_t tau = 0;
  EnergyMeters energy;
};

struct BatchTally {
  EnergyMeters meters;
  double time = 0.0;
  std::uint64_t cycles = 0;
  std::uint64_t tau_sum = 0;
  std::uint64_t tau_sq_sum = 0;
  std::vector<CycleRecord> trace;

  void add(const CycleOutcome& c, bool keep) {
    meters += c.energy;
    time += c.length;
    tau_sum += c.tau;
    tau_sq_sum += c.tau * c.tau;
    if (keep) trace.push_back({cycles, c.length, c.tau, c.energy});
    ++cycles;
  }
};

// Integrates idle-bank power between events while data sit in the buffer.
class BufferLedger {
 public:
  BufferLedger(const HardwareProfile& h, IdleAccounting mode) : h_(h), mode_(mode) {}

  void advance(double now, EnergyMeters& m) {
    m.idle += h_.p_idle() * occupancy() * (now - last_);
    last_ = now;
  }
  void add(double bytes) { buffered_ += bytes; }
  double buffered() const { return buffered_; }

 private:
  double occupancy() const {
    const double banks = buffered_ / h_.b_size();
    return mode_ == IdleAccounting::Continuous ? banks : std::ceil(banks);
  }

  const HardwareProfile& h_;
  IdleAccounting mode_;
  double buffered_ = 0.0;
  double last_ = 0.0;
};

class NodeCycle {
 public:
  explicit NodeCycle(const SimConfig& cfg)
      : cfg_(cfg), h_(cfg.hardware), mean_gap_(1.0 / cfg.traffic.lambda()) {}

  CycleOutcome operator()(Rng& rng) const {
    return std::visit([&](const auto& p) { return run(p, rng); }, cfg_.policy);
  }

 private:
  void receive(double y, EnergyMeters& m) const {
    m.rx += h_.e_rx() * y;
    m.wakeup += h_.e_wu();
    m.write += h_.e_w() * y;
    if (cfg_.resync == ResyncAccounting::PerArrival) m.resync += 2.0 * h_.e_resyn();
  }

  void transmit(double bytes, EnergyMeters& m) const {
    m.wakeup += h_.e_wu();
    m.read += h_.e_r() * bytes;
    m.tx += h_.e_tx() * bytes;
    if (cfg_.resync == ResyncAccounting::PerCycle) m.resync += 2.0 * h_.e_resyn();
  }

  CycleOutcome run(const FixedSizePolicy& p, Rng& rng) const {
    CycleOutcome c;
    BufferLedger buffer(h_, cfg_.idle);
    double t = 0.0;
    // ends at the arrival that brings the buffer to >= b; overshoot is sent too
    while (buffer.buffered() < p.b) {
      t += rng.exponential(mean_gap_);
      buffer.advance(t, c.energy);
      const double y = sample(cfg_.traffic.size(), rng);
      receive(y, c.energy);
      buffer.add(y);
      ++c.tau;
    }
    transmit(buffer.buffered(), c.energy);
    c.length = t;
    return c;
  }

  CycleOutcome run(const FixedIntervalPolicy& p, Rng& rng) const {
    CycleOutcome c;
    BufferLedger buffer(h_, cfg_.idle);
    for (double t = rng.exponential(mean_gap_); t < p.interval; t += rng.exponential(mean_gap_)) {
      buffer.advance(t, c.energy);
      const double y = sample(cfg_.traffic.size(), rng);
      receive(y, c.energy);
      buffer.add(y);
      ++c.tau;
    }
    buffer.advance(p.interval, c.energy);
    // the transmit wakeup is paid even when nothing arrived
    transmit(buffer.buffered(), c.energy);
    c.length = p.interval;
    return c;
  }

  CycleOutcome run(const NoBufferPolicy&, Rng& rng) const {
    CycleOutcome c;
    c.length = rng.exponential(mean_gap_);
    const double y = sample(cfg_.traffic.size(), rng);
    receive(y, c.energy);
    transmit(y, c.energy);
    c.tau = 1;
    return c;
  }

  const SimConfig& cfg_;
  const HardwareProfile& h_;
  double mean_gap_;
};

// make_cycle(rng) builds the per-batch cycle generator; it may carry state
// across cycles of one batch.
template <typename MakeCycle>
SimResult run_batches(const Horizon& horizon, std::uint64_t seed, int batches, bool record_trace,
                      unsigned threads, const MakeCycle& make_cycle) {
  std::uint64_t cycle_quota = 0;
  double time_quota = 0.0;
  if (const auto* c = std::get_if<CycleHorizon>(&horizon)) {
    if (c->cycles == 0) throw domain_error("horizon must be positive");
    cycle_quota = c->cycles;
    batches = static_cast<int>(std::min<std::uint64_t>(batches, c->cycles));
  } else {
    time_quota = std::get<TimeHorizon>(horizon).seconds;
    detail::require_positive(time_quota, "simulated time horizon");
  }
  if (batches < 1) throw domain_error("batch count must be >= 1");

  std::vector<BatchTally> tallies(static_cast<std::size_t>(batches));
  parallel_for(tallies.size(), worker_count(threads), [&](std::size_t j) {
    Rng rng(seed, j);
    auto cycle = make_cycle(rng);
    auto& tally = tallies[j];
    if (cycle_quota != 0) {
      const std::uint64_t n = cycle_quota / batches + (j < cycle_quota % batches ? 1 : 0);
      for (std::uint64_t i = 0; i < n; ++i) tally.add(cycle(rng), record_trace);
    } else {
      const double share = time_quota / batches;
      while (tally.time < share) tally.add(cycle(rng), record_trace);
    }
  });

  SimResult r;
  r.batches = batches;
  std::uint64_t tau_sum = 0;
  std::uint64_t tau_sq_sum = 0;
  std::vector<double> batch_power;
  for (auto& t : tallies) {
    r.meters += t.meters;
    r.total_time += t.time;
    tau_sum += t.tau_sum;
    tau_sq_sum += t.tau_sq_sum;
    if (t.time > 0.0) batch_power.push_back(t.meters.total() / t.time);
    for (auto& rec : t.trace) {
      rec.index += r.cycles;
      r.trace.push_back(rec);
    }
    r.cycles += t.cycles;
  }
  r.total_energy = r.meters.total();
  r.avg_power = r.total_energy / r.total_time;
  r.mean_cycle_len = r.total_time / static_cast<double>(r.cycles);
  const long double n = static_cast<long double>(r.cycles);
  r.mean_tau = static_cast<double>(tau_sum / n);
  r.var_tau = r.cycles > 1 ? static_cast<double>((tau_sq_sum - tau_sum * (tau_sum / n)) / (n - 1))
                           : 0.0;
  if (batch_power.size() >= 2) {
    double mean = 0.0;
    for (double p : batch_power) mean += p;
    mean /= static_cast<double>(batch_power.size());
    double ss = 0.0;
    for (double p : batch_power) ss += (p - mean) * (p - mean);
    const double k = static_cast<double>(batch_power.size());
    r.stderr_power = std::sqrt(ss / (k - 1.0) / k);
  } else {
    r.stderr_power = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace detail

/// Simulates one node under the configured policy. Each batch owns the
/// random stream (seed, batch index) and starts at a renewal point (empty
/// buffer), so the result is bit-identical for a given config regardless of
/// thread count.
inline SimResult run(const SimConfig& cfg) {
  if (!cfg.traffic.size().sampleable()) {
    throw unsupported_error("simulation needs a sampleable size law");
  }
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FixedSizePolicy>) detail::require_positive(p.b, "buffer size b");
        if constexpr (std::is_same_v<T, FixedIntervalPolicy>) detail::require_positive(p.interval, "interval T");
      },
      cfg.policy);
  const detail::NodeCycle node(cfg);
  return detail::run_batches(cfg.horizon, cfg.seed, cfg.batches, cfg.record_trace, cfg.threads,
                             [&](Rng&) { return [&node](Rng& rng) { return node(rng); }; });
}

struct ParentSimConfig {
  HardwareProfile hardware;
  std::vector<ChildSpec> children;
  double interval = 0.0;  // parent cycle T, s
  Horizon horizon = CycleHorizon{100000};
  std::uint64_t seed = 1;
  int batches = 40;
  bool record_trace = false;
  unsigned threads = 0;
};

/// Simulates a parent relaying k children. Child i sends every T_i (its own
/// optimal interval) with a random phase; its payload is the constant-size
/// data that arrived at it over the preceding T_i (Poisson count). The parent
/// buffers receptions until the end of its cycle T.
inline SimResult run_parent(const ParentSimConfig& cfg) {
  if (cfg.children.empty()) throw domain_error("parent needs at least one child");
  detail::require_positive(cfg.interval, "parent interval T");
  const auto& h = cfg.hardware;
  struct Child {
    double lambda;
    double mu;
    double period;
  };
  std::vector<Child> children;
  for (const auto& c : cfg.children) {
    const TrafficProfile t(c.lambda, SizeDistribution::constant(c.mu));
    children.push_back({c.lambda, c.mu, optimal_interval(h, t)});
  }

  // Per-batch state: the next transmission time of every child, measured
  // from the start of the current parent cycle.
  struct ParentCycle {
    const ParentSimConfig& cfg;
    const std::vector<Child>& children;
    std::vector<double> next;

    detail::CycleOutcome operator()(Rng& rng) {
      const auto& h = cfg.hardware;
      const double T = cfg.interval;
      detail::CycleOutcome out;
      double buffered = 0.0;
      for (std::size_t i = 0; i < children.size(); ++i) {
        const auto& c = children[i];
        const double gap = 1.0 / c.lambda;
        while (next[i] < T) {
          std::uint64_t arrivals = 0;
          for (double s = rng.exponential(gap); s < c.period; s += rng.exponential(gap)) ++arrivals;
          const double y = static_cast<double>(arrivals) * c.mu;
          out.energy.wakeup += h.e_wu();
          out.energy.resync += 2.0 * h.e_resyn();
          out.energy.rx += h.e_rx() * y;
          out.energy.write += h.e_w() * y;
          out.energy.idle += h.p_idle() / h.b_size() * y * (T - next[i]);
          buffered += y;
          ++out.tau;
          next[i] += c.period;
        }
        next[i] -= T;
      }
      out.energy.wakeup += h.e_wu();
      out.energy.read += h.e_r() * buffered;
      out.energy.tx += h.e_tx() * buffered;
      out.length = T;
      return out;
    }
  };
  return detail::run_batches(cfg.horizon, cfg.seed, cfg.batches, cfg.record_trace, cfg.threads,
                             [&](Rng& rng) {
                               ParentCycle pc{cfg, children, {}};
                               for (const auto& c : children) pc.next.push_back(rng.uniform() * c.period);
                               return pc;
                             });
}

struct StoppingEstimate {
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t reps = 0;
};

/// Empirical mean and variance of tau(b) = min{n : y_1 + ... + y_n >= b}
/// over independent walks.
inline StoppingEstimate estimate_stopping(const SizeDistribution& d, double b, std::uint64_t reps,
                                          std::uint64_t seed, unsigned threads = 0) {
  if (!d.sampleable()) throw unsupported_error("stopping-time estimation needs a sampleable law");
  detail::require_positive(b, "buffer size b");
  if (reps < 1000) throw domain_error("estimate_stopping needs at least 1000 replications");
  constexpr std::size_t kBlocks = 64;
  struct Block {
    std::uint64_t sum = 0;
    std::uint64_t sq_sum = 0;
  };
  std::vector<Block> blocks(kBlocks);
  detail::parallel_for(kBlocks, detail::worker_count(threads), [&](std::size_t j) {
    Rng rng(seed, j);
    const std::uint64_t n = reps / kBlocks + (j < reps % kBlocks ? 1 : 0);
    for (std::uint64_t r = 0; r < n; ++r) {
      std::uint64_t tau = 0;
      for (double s = 0.0; s < b; s += sample(d, rng)) ++tau;
      blocks[j].sum += tau;
      blocks[j].sq_sum += tau * tau;
    }
  });
  std::uint64_t sum = 0;
  std::uint64_t sq_sum = 0;
  for (const auto& blk : blocks) {
    sum += blk.sum;
    sq_sum += blk.sq_sum;
  }
  const long double n = static_cast<long double>(reps);
  const long double mean = sum / n;
  return {static_cast<double>(mean), static_cast<double>((sq_sum - sum * mean) / (n - 1)), reps};
}

}  // namespace powerbuf
