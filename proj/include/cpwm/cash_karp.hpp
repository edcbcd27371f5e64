#pragma once

#include <array>
#include <cmath>

namespace cpwm::cash_karp {

// Cash-Karp embedded 4(5) tableau
inline constexpr std::array<double, 6> c = {0.0, 1.0 / 5, 3.0 / 10, 3.0 / 5, 1.0, 7.0 / 8};

inline constexpr double a[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0},
    {3.0 / 10, -9.0 / 10, 6.0 / 5, 0, 0},
    {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27, 0},
    {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592, 253.0 / 4096},
};

// fifth-order weights
inline constexpr std::array<double, 6> b5 = {37.0 / 378, 0, 250.0 / 621, 125.0 / 594, 0, 512.0 / 1771};
// embedded fourth-order weights
inline constexpr std::array<double, 6> b4 = {2825.0 / 27648, 0, 18575.0 / 48384, 13525.0 / 55296,
                                             277.0 / 14336, 1.0 / 4};

// step-size controller constants
inline constexpr double kSafety = 0.9;
inline constexpr double kShrink = -0.25;
inline constexpr double kGrow = -0.2;
inline constexpr double kMaxGrow = 5.0;
inline constexpr double kMinShrink = 0.1;
// (kMaxGrow / kSafety)^(1 / kGrow)
inline constexpr double kErrCon = 1.89e-4;

inline double shrink(double h, double err) {
    double f = kSafety * std::pow(err, kShrink);
    return h * (f < kMinShrink ? kMinShrink : f);
}

inline double grow(double h, double err) {
    return err > kErrCon ? kSafety * h * std::pow(err, kGrow) : kMaxGrow * h;
}

}  // namespace cpwm::cash_karp
