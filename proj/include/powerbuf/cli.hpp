#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "powerbuf/compare.hpp"
#include "powerbuf/config.hpp"
#include "powerbuf/csv.hpp"
#include "powerbuf/figures.hpp"
#include "powerbuf/fixed_interval.hpp"
#include "powerbuf/fixed_size.hpp"
#include "powerbuf/lifespan.hpp"
#include "powerbuf/sim.hpp"
#include "powerbuf/tree.hpp"

namespace powerbuf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

namespace detail {

struct CliState {
  std::vector<std::string> sets;
  bool csv = false;
  std::string out_path;

  std::string config_path;
  std::string scheme;
  std::string table;
  int figure = 0;
  SweepOptions sweep;
  std::vector<std::string> params;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cycles;
  std::string trace_path;
  bool extremes = false;
  std::optional<std::size_t> k;
};

inline RunConfig load_config(const CliState& s) {
  auto root = s.config_path.empty() ? boost::property_tree::ptree{} : read_config_file(s.config_path);
  for (const auto& a : s.sets) apply_override(root, a);
  return build_config(root);
}

inline void warn_asymmetric(const HardwareProfile& h, std::ostream& err) {
  if (h.radio_asymmetric()) {
    err << "warning: e_tx != e_rx; the closed forms charge e_tx for both directions\n";
  }
}

inline void kv(std::ostream& os, const char* key, const std::string& value) {
  os << fmt::format("{:<18}{}\n", std::string(key) + ":", value);
}

inline void cmd_optimize(const CliState& s, std::ostream& os, std::ostream& err) {
  const auto cfg = load_config(s);
  const auto& h = cfg.hardware;
  warn_asymmetric(h, err);
  const auto traffic = cfg.traffic();
  const std::string scheme = s.scheme.empty() ? cfg.policy.scheme : s.scheme;
  CsvTable t;
  if (scheme == "size") {
    const auto e = optimal_fixed_size(h, traffic);
    const double years = lifespan_years(cfg.battery, e.power);
    t.add_column("b_star_bytes", 2);
    t.add_column("banks", 0);
    t.add_column("power_uw", 4);
    t.add_column("lifespan_years", 4);
    t.rows.push_back({e.b, static_cast<double>(e.banks), e.power, years});
    if (!s.csv) {
      kv(os, "scheme", "fixed-size");
      kv(os, "b_star_bytes", format_fixed(e.b, 2));
      kv(os, "banks", std::to_string(e.banks));
      kv(os, "power_uw", format_fixed(e.power, 4));
      kv(os, "lifespan_years", format_fixed(years, 4));
    }
  } else if (scheme == "interval") {
    const auto e = optimal_fixed_interval(h, traffic);
    const double years = lifespan_years(cfg.battery, e.power);
    t.add_column("t_star_s", 2);
    t.add_column("power_uw", 4);
    t.add_column("lifespan_years", 4);
    t.rows.push_back({e.interval, e.power, years});
    if (!s.csv) {
      kv(os, "scheme", "fixed-interval");
      kv(os, "t_star_s", format_fixed(e.interval, 2));
      kv(os, "power_uw", format_fixed(e.power, 4));
      kv(os, "lifespan_years", format_fixed(years, 4));
    }
  } else {
    throw config_error("optimize --scheme must be size or interval");
  }
  if (s.csv) write_csv(os, t);
}

inline CsvTable table3_csv(const RunConfig& cfg) {
  const auto rows = table3(cfg.hardware, cfg.battery, 256.0, table3_default_rates());
  CsvTable t;
  t.add_column("lambda", 1);
  t.add_column("power_fs_opt_uw", 4);
  t.add_column("years_fs_opt", 4);
  t.add_column("power_fi_opt_uw", 4);
  t.add_column("years_fi_opt", 4);
  t.add_column("power_fs_256_uw", 4);
  t.add_column("years_fs_256", 4);
  for (const auto& r : rows) {
    t.rows.push_back({r.lambda, r.power_fs_opt, r.life_fs_opt, r.power_fi_opt, r.life_fi_opt,
                      r.power_fixed, r.life_fixed});
  }
  return t;
}

inline CsvTable table5_csv(const RunConfig& cfg) {
  const std::vector<HardwareProfile> profiles{cfg.hardware, table5_high_power_profile()};
  const auto tables = table5(profiles, cfg.battery, table5_default_rates());
  CsvTable t;
  t.add_column("profile", 0);
  t.add_column("e_wu_uj", 1);
  t.add_column("p_idle_uw", 3);
  t.add_column("lambda", 4);
  t.add_column("t_star_s", 2);
  t.add_column("power_uw", 2);
  t.add_column("years", 3);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (const auto& r : tables[i]) {
      t.rows.push_back({static_cast<double>(i + 1), profiles[i].e_wu(), profiles[i].p_idle(), r.lambda,
                        r.interval, r.power, r.years});
    }
  }
  return t;
}

inline void cmd_table(const CliState& s, std::ostream& os, std::ostream& err) {
  const auto cfg = load_config(s);
  warn_asymmetric(cfg.hardware, err);
  if (s.table == "3") {
    write_csv(os, table3_csv(cfg));
  } else if (s.table == "5") {
    write_csv(os, table5_csv(cfg));
  } else {
    throw config_error("table must be 3 or 5");
  }
}

inline void cmd_sweep(const CliState& s, std::ostream& os) {
  auto opts = s.sweep;
  for (const auto& p : s.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw config_error("--param must look like key=value, got '" + p + "'");
    opts.overrides[p.substr(0, eq)] = parse_double(std::string_view(p).substr(eq + 1));
  }
  write_csv(os, sweep(s.figure, opts));
}

inline void cmd_simulate(const CliState& s, std::ostream& os, std::ostream& err) {
  const auto cfg = load_config(s);
  const auto& h = cfg.hardware;
  warn_asymmetric(h, err);
  const auto traffic = cfg.traffic();

  Policy policy = NoBufferPolicy{};
  double analytic = 0.0;
  std::string label = "no-buffer";
  if (cfg.policy.scheme == "size") {
    const double b = cfg.policy.b.value_or(optimal_size(h, traffic));
    policy = FixedSizePolicy{b};
    analytic = avg_power_fs(h, traffic, b);
    label = fmt::format("fixed-size b={:.2f}", b);
  } else if (cfg.policy.scheme == "interval") {
    const double T = cfg.policy.interval.value_or(optimal_interval(h, traffic));
    policy = FixedIntervalPolicy{T};
    analytic = avg_power_fi(h, traffic, T);
    label = fmt::format("fixed-interval T={:.2f}", T);
  } else {
    analytic = no_buffer_power(h, traffic);
  }

  SimConfig sc{h, traffic, policy};
  sc.horizon = s.cycles ? Horizon{CycleHorizon{*s.cycles}} : cfg.sim.horizon();
  sc.seed = s.seed.value_or(cfg.sim.seed);
  sc.resync = cfg.sim.resync;
  sc.idle = cfg.sim.idle;
  sc.batches = cfg.sim.batches;
  sc.record_trace = !s.trace_path.empty();
  const auto r = run(sc);
  const double rel = (r.avg_power - analytic) / analytic;

  if (sc.record_trace) {
    std::ofstream trace(s.trace_path);
    if (!trace) throw config_error("cannot write trace file '" + s.trace_path + "'");
    CsvTable t;
    t.add_column("cycle_index", 0);
    t.add_column("cycle_len_s", 6);
    t.add_column("tau", 0);
    for (const char* c : {"wakeup", "idle", "read", "write", "tx", "rx", "resync"}) {
      t.add_column(std::string("e_") + c + "_uj", 6);
    }
    for (const auto& c : r.trace) {
      const auto& m = c.energy;
      t.rows.push_back({static_cast<double>(c.index), c.length, static_cast<double>(c.tau), m.wakeup, m.idle,
                        m.read, m.write, m.tx, m.rx, m.resync});
    }
    write_csv(trace, t);
  }

  if (s.csv) {
    CsvTable t;
    t.add_column("sim_power_uw", 4);
    t.add_column("stderr_uw", 4);
    t.add_column("analytic_power_uw", 4);
    t.add_column("rel_error", 6);
    t.add_column("cycles", 0);
    t.add_column("total_time_s", 2);
    t.add_column("mean_tau", 4);
    t.add_column("var_tau", 4);
    t.add_column("mean_cycle_len_s", 4);
    t.rows.push_back({r.avg_power, r.stderr_power, analytic, rel, static_cast<double>(r.cycles), r.total_time,
                      r.mean_tau, r.var_tau, r.mean_cycle_len});
    write_csv(os, t);
    return;
  }
  kv(os, "policy", label);
  kv(os, "seed", std::to_string(sc.seed));
  kv(os, "cycles", std::to_string(r.cycles));
  kv(os, "total_time_s", format_fixed(r.total_time, 2));
  kv(os, "sim_power_uw", format_fixed(r.avg_power, 4) + " +/- " + format_fixed(r.stderr_power, 4));
  kv(os, "analytic_uw", format_fixed(analytic, 4));
  kv(os, "rel_error", format_fixed(rel, 6));
  kv(os, "mean_tau", format_fixed(r.mean_tau, 4));
  kv(os, "var_tau", format_fixed(r.var_tau, 4));
  kv(os, "mean_cycle_len_s", format_fixed(r.mean_cycle_len, 4));
  const auto& m = r.meters;
  kv(os, "energy_uj", fmt::format("wakeup={:.2f} idle={:.2f} read={:.2f} write={:.2f} tx={:.2f} rx={:.2f} resync={:.2f}",
                                  m.wakeup, m.idle, m.read, m.write, m.tx, m.rx, m.resync));
}

inline void cmd_tree(const CliState& s, std::ostream& os, std::ostream& err) {
  const auto cfg = load_config(s);
  const auto& h = cfg.hardware;
  warn_asymmetric(h, err);
  if (cfg.tree.children.empty()) throw config_error("[tree] children is empty");
  const auto v = BandwidthVector::from_children(cfg.tree.children);
  const double t_p = parent_optimal_interval(h, v);
  const double power = parent_power(h, v);
  const std::size_t k = s.k.value_or(v.size());
  if (k == 0) throw config_error("--k must be >= 1");
  const std::optional<double> bound =
      s.extremes ? std::optional<double>(range_bound(h, v.total(), k)) : std::nullopt;
  if (s.csv) {
    CsvTable t;
    t.add_column("children", 0);
    t.add_column("bandwidth_bytes_per_s", 4);
    t.add_column("t_p_star_s", 2);
    t.add_column("parent_power_uw", 4);
    if (bound) {
      t.add_column("k", 0);
      t.add_column("range_bound_uw", 4);
    }
    std::vector<double> row{static_cast<double>(v.size()), v.total(), t_p, power};
    if (bound) {
      row.push_back(static_cast<double>(k));
      row.push_back(*bound);
    }
    t.rows.push_back(row);
    write_csv(os, t);
    return;
  }
  kv(os, "children", std::to_string(v.size()));
  kv(os, "bandwidth", format_fixed(v.total(), 4) + " bytes/s");
  kv(os, "t_p_star_s", format_fixed(t_p, 2));
  kv(os, "parent_power_uw", format_fixed(power, 4));
  if (bound) {
    kv(os, "k", std::to_string(k));
    kv(os, "range_bound_uw", format_fixed(*bound, 4));
  }
}

}  // namespace detail

/// Entry point of the powerbuf command line. Returns the process exit code:
/// 0 success, 2 usage or config error, 3 model-domain error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  detail::CliState s;
  CLI::App app{"Buffering power model: optimize, tabulate, sweep and simulate"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--set", s.sets, "Config override, section.key=value (repeatable)");
  app.add_flag("--csv", s.csv, "Machine-readable CSV output");
  app.add_option("--out", s.out_path, "Write output to this file instead of stdout");

  auto* optimize = app.add_subcommand("optimize", "Optimal threshold or interval for one traffic profile");
  optimize->add_option("config", s.config_path, "Config file")->check(CLI::ExistingFile);
  optimize->add_option("--scheme", s.scheme, "size or interval")->check(CLI::IsMember({"size", "interval"}));

  auto* table = app.add_subcommand("table", "Lifespan tables as CSV");
  table->add_option("which", s.table, "3 or 5")->required()->check(CLI::IsMember({"3", "5"}));
  table->add_option("config", s.config_path, "Config file")->check(CLI::ExistingFile);

  auto* sweep_cmd = app.add_subcommand("sweep", "Figure curve data as CSV");
  sweep_cmd->add_option("figure", s.figure, "Figure id (3-12)")->required();
  sweep_cmd->add_option("--points", s.sweep.points, "Grid points")->check(CLI::Range(2, 100000));
  sweep_cmd->add_option("--x-min", s.sweep.x_min, "Lower end of the x axis");
  sweep_cmd->add_option("--x-max", s.sweep.x_max, "Upper end of the x axis");
  sweep_cmd->add_option("--values", s.sweep.values, "Curve parameters")->delimiter(',');
  sweep_cmd->add_option("--param", s.params, "Caption parameter override, key=value (repeatable)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run next to the analytic prediction");
  simulate->add_option("config", s.config_path, "Config file")->check(CLI::ExistingFile);
  simulate->add_option("--seed", s.seed, "Random seed");
  simulate->add_option("--cycles", s.cycles, "Renewal cycles to simulate")->check(CLI::PositiveNumber);
  simulate->add_option("--trace", s.trace_path, "Write a per-cycle CSV trace to this file");

  auto* tree = app.add_subcommand("tree", "Parent-node power of a one-level collection tree");
  tree->add_option("config", s.config_path, "Config file")->check(CLI::ExistingFile);
  tree->add_flag("--extremes", s.extremes, "Report the uniform/degenerate power spread");
  tree->add_option("--k", s.k, "Child count for --extremes (default: configured children)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, err);
    out << help.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ostringstream buffer;
  try {
    if (*optimize) detail::cmd_optimize(s, buffer, err);
    else if (*table) detail::cmd_table(s, buffer, err);
    else if (*sweep_cmd) detail::cmd_sweep(s, buffer);
    else if (*simulate) detail::cmd_simulate(s, buffer, err);
    else if (*tree) detail::cmd_tree(s, buffer, err);
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  if (s.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(s.out_path);
    if (!file) {
      err << "error: cannot write '" << s.out_path << "'\n";
      return kExitUsage;
    }
    file << buffer.str();
  }
  return kExitOk;
}

}  // namespace powerbuf
