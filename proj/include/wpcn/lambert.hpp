#pragma once

namespace wpcn {

// Branch point of the Lambert function: both real branches meet at
// (-1/e, -1). Arguments up to 1e-12 below -1/e are treated as -1/e.
inline constexpr double lambert_branch_point = -0.36787944117144233;  // -exp(-1)
inline constexpr double lambert_branch_clamp = 1e-12;

/// Principal branch W0: returns w >= -1 with w*exp(w) = x, for x >= -1/e.
/// Throws std::domain_error below the branch point (minus the clamp).
double lambert_w0(double x);

/// Lower branch W-1: returns w <= -1 with w*exp(w) = x, for -1/e <= x < 0.
/// Throws std::domain_error outside that interval (minus the clamp).
double lambert_wm1(double x);

}  // namespace wpcn
