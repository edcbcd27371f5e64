#pragma once

namespace cpwm {

inline constexpr double kCmPerHartree = 219474.6313632;

inline constexpr double cm_to_hartree(double cm) { return cm / kCmPerHartree; }
inline constexpr double hartree_to_cm(double h) { return h * kCmPerHartree; }

}  // namespace cpwm
