#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "powerbuf/compare.hpp"
#include "powerbuf/csv.hpp"
#include "powerbuf/fixed_interval.hpp"
#include "powerbuf/fixed_size.hpp"
#include "powerbuf/lifespan.hpp"

namespace powerbuf {

// Parameter sweeps behind the published figure curves. Each figure has
// built-in caption defaults: hardware, mean size, the x grid and one curve
// parameter list. Every one of them can be overridden.
struct SweepOptions {
  int points = 60;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::vector<double> values;               // curve parameters; empty = default
  std::map<std::string, double> overrides;  // e_wu, p_idle, b_size, ..., mean
};

inline const std::vector<int>& known_figures() {
  static const std::vector<int> ids{3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  return ids;
}

namespace detail {

struct FigureSetup {
  HardwareParams hw;
  double mean = 64.0;
  double x_min = 1.0;
  double x_max = 1000.0;
  bool log_x = true;
  std::vector<double> values;
};

inline std::vector<double> grid(double lo, double hi, int n, bool log_scale) {
  if (n < 2) throw domain_error("a sweep needs at least 2 points");
  if (!(hi > lo)) throw domain_error("sweep x_max must exceed x_min");
  if (log_scale && !(lo > 0.0)) throw domain_error("log-scale sweep needs x_min > 0");
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    x[i] = log_scale ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
  }
  x.back() = hi;
  return x;
}

inline FigureSetup figure_defaults(int fig) {
  FigureSetup s;
  switch (fig) {
    case 3:
      s.hw.b_size = 256.0;
      s.mean = 256.0;
      s.values = {8.0, 32.0, 128.0, 512.0};
      break;
    case 4:
      s.hw.b_size = 256.0;
      s.mean = 256.0;
      s.values = {8.0, 80.0, 800.0, 8000.0};
      break;
    case 5:
      s.hw.b_size = 256.0;
      s.x_max = 10000.0;
      s.values = {1.0, 2.0, 4.0, 8.0};
      break;
    case 6:
      s.x_min = 0.1;
      s.values = {20.0, 40.0, 80.0};
      break;
    case 7:
    case 9:
    case 10:
      s.x_max = 100.0;
      s.values = fig == 9 ? std::vector<double>{256.0} : fig == 10 ? std::vector<double>{1280.0}
                                                                  : std::vector<double>{256.0, 1280.0};
      break;
    case 8:
      s.hw.b_size = 256.0;
      s.values = {1.5, 2.0};
      break;
    case 11:
      s.x_max = 100.0;
      break;
    case 12:
      s.mean = 128.0;
      s.x_min = 0.0;
      s.x_max = 3.0;
      s.log_x = false;
      s.values = {1.0, 0.5, 0.25, 0.1};
      break;
    default:
      throw config_error(fmt::format("unknown figure id {}", fig));
  }
  return s;
}

inline void apply_overrides(FigureSetup& s, const SweepOptions& o) {
  for (const auto& [key, value] : o.overrides) {
    if (key == "e_wu") s.hw.e_wu = value;
    else if (key == "e_tx") s.hw.e_tx = value;
    else if (key == "e_rx") s.hw.e_rx = value;
    else if (key == "p_idle") s.hw.p_idle = value;
    else if (key == "e_r") s.hw.e_r = value;
    else if (key == "e_w") s.hw.e_w = value;
    else if (key == "e_resyn") s.hw.e_resyn = value;
    else if (key == "b_size") s.hw.b_size = value;
    else if (key == "mean") s.mean = value;
    else throw config_error("unknown sweep override '" + key + "'");
  }
  if (o.x_min) s.x_min = *o.x_min;
  if (o.x_max) s.x_max = *o.x_max;
  if (!o.values.empty()) s.values = o.values;
}

// Heavy-tailed law of the variation figures.
inline SizeDistribution variation_law(double mean) { return hyperexp2_fit(mean, 1.723, 2.718); }

inline std::string label(double v) { return fmt::format("{:g}", v); }

// Points where the optimum does not exist (negative radicand) become NaN.
template <typename Fn>
double or_nan(Fn&& fn) {
  try {
    return fn();
  } catch (const infeasible_error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace detail

/// CSV data for one figure. Column 0 is the x axis (1/lambda in seconds,
/// or c_v for figure 12); the remaining columns are curves.
inline CsvTable sweep(int fig, const SweepOptions& opts = {}) {
  auto s = detail::figure_defaults(fig);
  detail::apply_overrides(s, opts);
  const auto xs = detail::grid(s.x_min, s.x_max, opts.points, s.log_x);
  CsvTable t;
  t.add_column(fig == 12 ? "cv" : "inv_lambda_s", 6);

  auto rows_over_rate = [&](auto&& cells) {
    for (double x : xs) {
      std::vector<double> row{x};
      cells(1.0 / x, row);
      t.rows.push_back(std::move(row));
    }
  };

  switch (fig) {
    case 3:
    case 4: {
      const auto law = SizeDistribution::exponential(s.mean);
      for (double e : s.values) t.add_column((fig == 3 ? "b_star_ewu_" : "t_star_ewu_") + detail::label(e), 6);
      rows_over_rate([&](double lambda, std::vector<double>& row) {
        for (double e : s.values) {
          auto hw = s.hw;
          hw.e_wu = e;
          const HardwareProfile h(hw);
          const TrafficProfile tr(lambda, law);
          row.push_back(detail::or_nan([&] { return fig == 3 ? optimal_size(h, tr) : optimal_interval(h, tr); }));
        }
      });
      break;
    }
    case 5: {
      const HardwareProfile h(s.hw);
      for (double a : s.values) t.add_column("f_alpha_" + detail::label(a), 6);
      rows_over_rate([&](double lambda, std::vector<double>& row) {
        for (double a : s.values) {
          const auto law = SizeDistribution::erlang_with_mean(static_cast<int>(a), s.mean);
          row.push_back(detail::or_nan([&] { return incentive_differential(h, TrafficProfile(lambda, law)); }));
        }
      });
      break;
    }
    case 6: {
      const HardwareProfile h(s.hw);
      const auto law = SizeDistribution::exponential(s.mean);
      for (double T : s.values) t.add_column("g_fi_T_" + detail::label(T), 6);
      t.add_column("t_star", 6);
      rows_over_rate([&](double lambda, std::vector<double>& row) {
        const TrafficProfile tr(lambda, law);
        for (double T : s.values) row.push_back(gain_fi(h, tr, T));
        row.push_back(optimal_interval(h, tr));
      });
      break;
    }
    case 7:
    case 9:
    case 10: {
      const HardwareProfile h(s.hw);
      const auto law = fig == 7 ? SizeDistribution::exponential(s.mean) : detail::variation_law(s.mean);
      for (double b : s.values) t.add_column("g_fs_b_" + detail::label(b), 6);
      t.add_column("b_star_over_bsize", 6);
      t.add_column("banks", 0);
      rows_over_rate([&](double lambda, std::vector<double>& row) {
        const TrafficProfile tr(lambda, law);
        for (double b : s.values) row.push_back(detail::or_nan([&] { return gain_fs(h, tr, b); }));
        const double b_star = detail::or_nan([&] { return optimal_size(h, tr); });
        row.push_back(b_star / h.b_size());
        row.push_back(std::isnan(b_star) ? b_star : static_cast<double>(bank_count(b_star, h.b_size())));
      });
      break;
    }
    case 8: {
      const HardwareProfile h(s.hw);
      std::vector<SizeDistribution> laws{SizeDistribution::exponential(s.mean),
                                         hyperexp2_fit(s.mean, 1.72, 2.72)};
      t.add_column("g_exponential", 6);
      t.add_column("g_h2_cv_1.72_skew_2.72", 6);
      for (double cv : s.values) {
        laws.push_back(hyperexp2_balanced(s.mean, cv));
        t.add_column("g_h2_balanced_cv_" + detail::label(cv), 6);
      }
      rows_over_rate([&](double lambda, std::vector<double>& row) {
        for (const auto& law : laws) row.push_back(detail::or_nan([&] { return scheme_gap(h, TrafficProfile(lambda, law)); }));
      });
      break;
    }
    case 11: {
      const HardwareProfile h(s.hw);
      const auto heavy = detail::variation_law(s.mean);
      const auto flat = SizeDistribution::constant(s.mean);
      t.add_column("b_star_hyperexp", 6);
      t.add_column("b_star_cv0", 6);
      rows_over_rate([&](double lambda, std::vector<double>& row) {
        row.push_back(detail::or_nan([&] { return optimal_size(h, TrafficProfile(lambda, heavy)); }));
        row.push_back(detail::or_nan([&] { return optimal_size(h, TrafficProfile(lambda, flat)); }));
      });
      break;
    }
    case 12: {
      const HardwareProfile h(s.hw);
      for (double lambda : s.values) t.add_column("years_lambda_" + detail::label(lambda), 6);
      const auto grid = lifespan_vs_cv(h, Battery{}, s.values, xs, s.mean);
      for (std::size_t j = 0; j < xs.size(); ++j) {
        std::vector<double> row{xs[j]};
        for (const auto& per_rate : grid) row.push_back(per_rate[j]);
        t.rows.push_back(std::move(row));
      }
      break;
    }
  }
  return t;
}

}  // namespace powerbuf
