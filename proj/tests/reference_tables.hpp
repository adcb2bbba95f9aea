#pragma once

// Published lifespan tables, transcribed at their printed precision.

#include <array>
#include <cmath>

namespace reference {

struct Table3Row {
  double lambda;
  double fs_power, fs_years;
  double fi_power, fi_years;
  double fixed_power, fixed_years;  // fixed-size threshold of 256 bytes
};

inline constexpr std::array<Table3Row, 10> kTable3{{
    {1.0, 2392.1739, 0.4252, 2392.3775, 0.4252, 2424.5010, 0.4195},
    {0.9, 2153.3299, 0.4723, 2153.5336, 0.4723, 2182.0722, 0.4661},
    {0.8, 1914.4623, 0.5313, 1914.6659, 0.5312, 1939.6434, 0.5244},
    {0.7, 1675.5663, 0.6070, 1675.7698, 0.6069, 1697.2146, 0.5993},
    {0.6, 1436.6355, 0.7080, 1436.8389, 0.7079, 1454.7858, 0.6992},
    {0.5, 1197.6609, 0.8493, 1197.8641, 0.8491, 1212.3570, 0.8390},
    {0.4, 958.6283, 1.0610, 958.8314, 1.0608, 969.9282, 1.0487},
    {0.3, 719.5143, 1.4136, 719.7172, 1.4132, 727.4994, 1.3981},
    {0.2, 480.2728, 2.1178, 480.4753, 2.1169, 485.0706, 2.0969},
    {0.1, 240.7851, 4.2242, 240.9869, 4.2207, 242.6418, 4.1919},
}};

struct Table5Row {
  double rate;  // arrivals per second
  double t_star, power, years;
};

// First block: e_wu 80 uJ, p_idle 0.409 uW. Second: e_wu 800 uJ, p_idle 10 uW.
// The published rate column lists the mean arrival interval 1/lambda.
inline constexpr std::array<Table5Row, 5> kTable5Low{{
    {1.0, 19.79, 2392.38, 0.425},
    {2.0, 13.99, 4780.02, 0.213},
    {4.0, 9.89, 9553.33, 0.107},
    {8.0, 6.99, 19097.18, 0.053},
    {16.0, 4.94, 38180.97, 0.027},
}};

inline constexpr std::array<Table5Row, 5> kTable5High{{
    {1.0, 12.65, 3230.78, 0.315},
    {2.0, 8.94, 6387.46, 0.159},
    {4.0, 6.32, 12670.13, 0.08},
    {8.0, 4.47, 25192.07, 0.04},
    {16.0, 3.16, 50174.57, 0.02},
}};

// value rounded to the printed precision lies within one unit of the last
// printed digit.
inline bool matches_printed(double value, double printed, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::abs(std::round(value * scale) - std::round(printed * scale)) <= 1.0;
}

}  // namespace reference
