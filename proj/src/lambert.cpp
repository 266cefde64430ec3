#include "wpcn/lambert.hpp"

#include "wpcn/params.hpp"

#include <cmath>
#include <stdexcept>

namespace wpcn {
namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

// Series about the branch point in p = +-sqrt(2(1 + e*x)); w = -1 + p - p^2/3 + ...
double branch_series(double p) {
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
}

// Halley steps on f(w) = w*exp(w) - x until the residual meets tol.
double halley(double w, double x, double tol) {
    for (int i = 0; i < 60; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (std::abs(f) <= tol) return w;
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double step = f / denom;
        if (!std::isfinite(step)) break;
        w -= step;
        if (std::abs(step) <= 1e-17 * std::abs(w)) {
            if (std::abs(w * std::exp(w) - x) <= tol) return w;
            break;
        }
    }
    // One last residual check: accept anything within the published contract.
    if (std::abs(w * std::exp(w) - x) <= 1e-12 * std::fmax(1.0, std::abs(x))) return w;
    throw numerical_error("lambert: Halley iteration failed to converge");
}

// Newton on g(w) = w - log(x/w), stable within a single real branch. Used to
// refine seeds far from the branch point before the final Halley polish.
double log_form_newton(double w, double log_abs_x) {
    for (int i = 0; i < 40; ++i) {
        const double g = w - log_abs_x + std::log(std::abs(w));
        const double gp = 1.0 + 1.0 / w;
        const double step = g / gp;
        w -= step;
        if (std::abs(step) <= 1e-14 * std::abs(w)) break;
    }
    return w;
}

double residual_tol(double x) { return 1e-14 * std::fmax(std::abs(x), 1e-300); }

}  // namespace

double lambert_w0(double x) {
    if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
    if (x < lambert_branch_point) {
        if (x >= lambert_branch_point - lambert_branch_clamp) x = lambert_branch_point;
        else throw std::domain_error("lambert_w0: argument below -1/e");
    }
    if (x == 0.0) return 0.0;

    const double q = 2.0 * (1.0 + kE * x);  // 0 at the branch point
    if (q <= 0.0) return -1.0;
    if (q < 1e-2) {
        const double w = branch_series(std::sqrt(q));
        if (std::abs(w + 1.0) < 1e-5) return w;  // Halley denominator degenerates here
        return halley(w, x, residual_tol(x));
    }

    double w;
    if (x < 0.3) {
        w = x * (1.0 + x * (-1.0 + x * (1.5 - (8.0 / 3.0) * x)));  // Taylor about 0
    } else if (x < 10.0) {
        w = log_form_newton(std::log1p(x), std::log(x));
    } else {
        const double l1 = std::log(x), l2 = std::log(std::log(x));
        w = log_form_newton(l1 - l2 + l2 / l1, l1);
    }
    return halley(w, x, residual_tol(x));
}

double lambert_wm1(double x) {
    if (std::isnan(x)) throw std::domain_error("lambert_wm1: NaN argument");
    if (x >= 0.0) throw std::domain_error("lambert_wm1: argument must be negative");
    if (x < lambert_branch_point) {
        if (x >= lambert_branch_point - lambert_branch_clamp) x = lambert_branch_point;
        else throw std::domain_error("lambert_wm1: argument below -1/e");
    }

    const double q = 2.0 * (1.0 + kE * x);
    if (q <= 0.0) return -1.0;
    if (q < 1e-2) {
        const double w = branch_series(-std::sqrt(q));
        if (std::abs(w + 1.0) < 1e-5) return w;
        return halley(w, x, residual_tol(x));
    }

    // Asymptotic seed w ~ L1 - L2 + L2/L1 with L1 = log(-x), L2 = log(-L1),
    // then branch-stable Newton in the log form.
    const double l1 = std::log(-x);
    double w;
    if (l1 > -2.0) {
        w = -1.5;  // x in (-1/e, ~-0.135): seed between branch point and asymptote
    } else {
        const double l2 = std::log(-l1);
        w = l1 - l2 + l2 / l1;
    }
    w = log_form_newton(w, l1);
    if (w > -1.0) w = -1.0 - 1e-9;  // keep the polish on the lower branch
    return halley(w, x, residual_tol(x));
}

}  // namespace wpcn
