#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "powerbuf/csv.hpp"
#include "powerbuf/distribution.hpp"
#include "powerbuf/lifespan.hpp"
#include "powerbuf/profile.hpp"
#include "powerbuf/sim.hpp"
#include "powerbuf/tree.hpp"

namespace powerbuf {

// Run configuration, read from an INI-style file:
//
//   [hardware]  e_wu e_tx e_rx e_r e_w e_resyn (uJ), p_idle (uW), b_size (bytes)
//   [traffic]   lambda (1/s), law, mean (bytes), shape, p, mean1, mean2, cv, skew
//   [battery]   capacity_mah, voltage
//   [policy]    scheme (size|interval|nobuffer), b (bytes), interval (s)
//   [sim]       cycles, sim_time (s), seed, batches, resync, idle
//   [tree]      children ("lambda:mu, lambda:mu, ..."), interval (s)
//
// Missing keys take the defaults below; unknown sections or keys are errors.

struct PolicySection {
  std::string scheme = "size";
  std::optional<double> b;
  std::optional<double> interval;
};

struct SimSection {
  std::optional<std::uint64_t> cycles;
  std::optional<double> sim_time;
  std::uint64_t seed = 1;
  int batches = 40;
  ResyncAccounting resync = ResyncAccounting::PerArrival;
  IdleAccounting idle = IdleAccounting::Continuous;

  Horizon horizon() const {
    if (cycles && sim_time) throw config_error("[sim] set either cycles or sim_time, not both");
    if (sim_time) return TimeHorizon{*sim_time};
    return CycleHorizon{cycles.value_or(100000)};
  }
};

struct TreeSection {
  std::vector<ChildSpec> children;
  std::optional<double> interval;
};

struct RunConfig {
  HardwareProfile hardware;
  std::optional<double> lambda;
  std::optional<SizeDistribution> size;  // defaults to constant b_size
  Battery battery;
  PolicySection policy;
  SimSection sim;
  TreeSection tree;

  SizeDistribution size_law() const {
    return size.value_or(SizeDistribution::constant(hardware.b_size()));
  }

  TrafficProfile traffic() const {
    if (!lambda) throw config_error("[traffic] lambda is required for this command");
    return TrafficProfile(*lambda, size_law());
  }
};

namespace detail {

using boost::property_tree::ptree;

inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema{
      {"hardware", {"e_wu", "e_tx", "e_rx", "p_idle", "e_r", "e_w", "e_resyn", "b_size"}},
      {"traffic", {"lambda", "law", "mean", "shape", "p", "mean1", "mean2", "cv", "skew"}},
      {"battery", {"capacity_mah", "voltage"}},
      {"policy", {"scheme", "b", "interval"}},
      {"sim", {"cycles", "sim_time", "seed", "batches", "resync", "idle"}},
      {"tree", {"children", "interval"}},
  };
  return schema;
}

inline void check_schema(const ptree& root) {
  const auto& schema = config_schema();
  for (const auto& [section, body] : root) {
    const auto it = schema.find(section);
    if (it == schema.end()) throw config_error("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw config_error("unknown key '" + key + "' in [" + section + "]");
    }
  }
}

inline std::optional<double> get_number(const ptree& root, const std::string& path) {
  const auto v = root.get_optional<std::string>(path);
  if (!v) return std::nullopt;
  try {
    return parse_double(*v);
  } catch (const config_error&) {
    throw config_error(path + ": not a number: '" + *v + "'");
  }
}

inline std::optional<std::uint64_t> get_count(const ptree& root, const std::string& path) {
  const auto v = root.get_optional<std::string>(path);
  if (!v) return std::nullopt;
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (v->empty() || ec != std::errc() || ptr != v->data() + v->size()) {
    throw config_error(path + ": not a non-negative integer: '" + *v + "'");
  }
  return out;
}

inline double require_number(const ptree& root, const std::string& path) {
  const auto v = get_number(root, path);
  if (!v) throw config_error(path + " is required");
  return *v;
}

inline SizeDistribution parse_size_law(const ptree& root) {
  const std::string law = root.get<std::string>("traffic.law", "constant");
  if (law == "constant") return SizeDistribution::constant(require_number(root, "traffic.mean"));
  if (law == "exponential") return SizeDistribution::exponential(require_number(root, "traffic.mean"));
  if (law == "erlang") {
    const double shape = require_number(root, "traffic.shape");
    if (shape != static_cast<int>(shape)) throw config_error("traffic.shape must be an integer");
    return SizeDistribution::erlang_with_mean(static_cast<int>(shape), require_number(root, "traffic.mean"));
  }
  if (law == "hyperexp2") {
    return SizeDistribution::hyperexp2(require_number(root, "traffic.p"), require_number(root, "traffic.mean1"),
                                       require_number(root, "traffic.mean2"));
  }
  if (law == "hyperexp_fit") {
    return hyperexp2_fit(require_number(root, "traffic.mean"), require_number(root, "traffic.cv"),
                         require_number(root, "traffic.skew"));
  }
  if (law == "moments") {
    return SizeDistribution::from_moments(require_number(root, "traffic.mean"), require_number(root, "traffic.cv"),
                                          get_number(root, "traffic.skew").value_or(0.0));
  }
  throw config_error("unknown traffic.law '" + law + "'");
}

inline std::vector<ChildSpec> parse_children(const std::string& text) {
  std::vector<ChildSpec> out;
  for (auto item : split(text, ',')) {
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw config_error("tree.children entries are lambda:mu, got '" + std::string(item) + "'");
    out.emplace_back(parse_double(parts[0]), parse_double(parts[1]));
  }
  return out;
}

}  // namespace detail

/// Builds a RunConfig from a parsed INI tree. Model-domain violations
/// (nonpositive rates, ...) surface as domain_error, format problems as
/// config_error.
inline RunConfig build_config(const boost::property_tree::ptree& root) {
  using detail::get_count;
  using detail::get_number;
  detail::check_schema(root);
  RunConfig c;

  HardwareParams hp;
  auto set = [&](double& field, const char* key) {
    if (auto v = get_number(root, std::string("hardware.") + key)) field = *v;
  };
  set(hp.e_wu, "e_wu");
  set(hp.e_tx, "e_tx");
  set(hp.e_rx, "e_rx");
  set(hp.p_idle, "p_idle");
  set(hp.e_r, "e_r");
  set(hp.e_w, "e_w");
  set(hp.e_resyn, "e_resyn");
  set(hp.b_size, "b_size");
  c.hardware = HardwareProfile(hp);

  c.lambda = get_number(root, "traffic.lambda");
  if (root.get_child_optional("traffic.law") || root.get_child_optional("traffic.mean")) {
    c.size = detail::parse_size_law(root);
  }

  c.battery = Battery(get_number(root, "battery.capacity_mah").value_or(2700.0),
                      get_number(root, "battery.voltage").value_or(3.3));

  c.policy.scheme = root.get<std::string>("policy.scheme", "size");
  if (c.policy.scheme != "size" && c.policy.scheme != "interval" && c.policy.scheme != "nobuffer") {
    throw config_error("policy.scheme must be size, interval or nobuffer");
  }
  c.policy.b = get_number(root, "policy.b");
  c.policy.interval = get_number(root, "policy.interval");

  c.sim.cycles = get_count(root, "sim.cycles");
  c.sim.sim_time = get_number(root, "sim.sim_time");
  c.sim.seed = get_count(root, "sim.seed").value_or(1);
  c.sim.batches = static_cast<int>(get_count(root, "sim.batches").value_or(40));
  const auto resync = root.get<std::string>("sim.resync", "per_arrival");
  if (resync == "per_arrival") {
    c.sim.resync = ResyncAccounting::PerArrival;
  } else if (resync == "per_cycle") {
    c.sim.resync = ResyncAccounting::PerCycle;
  } else {
    throw config_error("sim.resync must be per_arrival or per_cycle");
  }
  const auto idle = root.get<std::string>("sim.idle", "continuous");
  if (idle == "continuous") {
    c.sim.idle = IdleAccounting::Continuous;
  } else if (idle == "quantized") {
    c.sim.idle = IdleAccounting::QuantizedBanks;
  } else {
    throw config_error("sim.idle must be continuous or quantized");
  }

  if (auto children = root.get_optional<std::string>("tree.children")) {
    c.tree.children = detail::parse_children(*children);
  }
  c.tree.interval = get_number(root, "tree.interval");
  return c;
}

inline boost::property_tree::ptree read_config_tree(std::istream& is) {
  boost::property_tree::ptree root;
  try {
    boost::property_tree::ini_parser::read_ini(is, root);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return root;
}

inline boost::property_tree::ptree read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  return read_config_tree(in);
}

/// Applies "section.key=value" on top of a parsed config.
inline void apply_override(boost::property_tree::ptree& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw config_error("override must look like section.key=value, got '" + assignment + "'");
  }
  root.put(assignment.substr(0, eq), assignment.substr(eq + 1));
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream is(text);
  return build_config(read_config_tree(is));
}

}  // namespace powerbuf
