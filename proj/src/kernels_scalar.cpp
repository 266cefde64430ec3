#include "wpcn/kernels.hpp"
#include "wpcn/lambert.hpp"

#include <cmath>
#include <limits>

namespace wpcn::kernels::detail {

namespace {
constexpr double kInvLn2 = 1.4426950408889634073599246810018921;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

inline double scalar_log2_1p(double x) { return std::log1p(x) * kInvLn2; }

inline double scalar_d2d(double y3, double te) {
    if (te == 0.0 || te == 1.0) return 0.0;
    if (!(te > 0.0 && te < 1.0)) return kNan;
    const double u = 1.0 - te;
    return u * scalar_log2_1p(y3 * te / u);
}

inline double scalar_wm1(double x) {
    if (!(x < 0.0)) return kNan;
    if (x < lambert_branch_point) {
        if (x < lambert_branch_point - lambert_branch_clamp) return kNan;
        x = lambert_branch_point;
    }
    return wpcn::lambert_wm1(x);
}

inline double scalar_td(double y1_coeff, double log_y2, double te) {
    if (!(te > 0.0 && te < 1.0)) return kNan;
    const double one_m_te = 1.0 - te;
    const double y1 = y1_coeff * one_m_te / te;
    const double b = y1 * log_y2;
    const double arg = -b * std::exp(-b - log_y2);
    const double w = scalar_wm1(arg);
    return one_m_te * (1.0 + log_y2 / (w + b));
}
}  // namespace

void log2_1p_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar_log2_1p(x[i]);
}

void d2d_throughput_grid_scalar(double y3, const double* te, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar_d2d(y3, te[i]);
}

void lambert_wm1_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar_wm1(x[i]);
}

void optimal_td_grid_scalar(double y1_coeff, double log_y2, const double* te, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar_td(y1_coeff, log_y2, te[i]);
}

}  // namespace wpcn::kernels::detail
