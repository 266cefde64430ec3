#pragma once

#include <atomic>
#include <stdexcept>
#include <utility>

namespace wpcn {

struct GoldenResult {
    double argmax;
    double max;
};

namespace detail {
std::atomic<unsigned long long>& golden_counter();
}

/// Number of golden_section_max invocations so far in this process.
/// Lets tests verify that fixed-allocation schemes never search.
unsigned long long golden_section_invocations();

/// Derivative-free maximization of a unimodal f on [lb, ub] by 0.618-ratio
/// interval shrinking. Stops once the interval is narrower than xi and
/// returns the midpoint and f evaluated there.
template <class F>
GoldenResult golden_section_max(F&& f, double lb, double ub, double xi) {
    if (!(lb < ub)) throw std::invalid_argument("golden_section_max: lb must be < ub");
    if (!(xi > 0)) throw std::invalid_argument("golden_section_max: xi must be > 0");
    detail::golden_counter().fetch_add(1, std::memory_order_relaxed);

    constexpr double r = 0.618;
    double tl = lb, tu = ub;
    double tp = tu - r * (tu - tl);
    double tq = tl + r * (tu - tl);
    double fp = f(tp), fq = f(tq);
    while (tu - tl > xi) {
        if (fp >= fq) {
            tu = tq; tq = tp; fq = fp;
            tp = tu - r * (tu - tl);
            fp = f(tp);
        } else {
            tl = tp; tp = tq; fp = fq;
            tq = tl + r * (tu - tl);
            fq = f(tq);
        }
    }
    const double t = 0.5 * (tu + tl);
    return {t, f(t)};
}

}  // namespace wpcn
