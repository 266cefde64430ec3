#include "wpcn/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace wpcn::kernels {

namespace {

bool avx2_available() {
#ifdef WPCN_HAVE_AVX2_KERNELS
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect() {
    if (const char* env = std::getenv("WPCN_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> b{detect()};
    return b;
}

}  // namespace

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

bool set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available()) return false;
    backend_slot().store(b, std::memory_order_relaxed);
    return true;
}

void log2_1p(const double* x, double* out, std::size_t n) {
#ifdef WPCN_HAVE_AVX2_KERNELS
    if (active_backend() == Backend::avx2) return detail::log2_1p_avx2(x, out, n);
#endif
    detail::log2_1p_scalar(x, out, n);
}

void d2d_throughput_grid(double y3, const double* te, double* out, std::size_t n) {
#ifdef WPCN_HAVE_AVX2_KERNELS
    if (active_backend() == Backend::avx2) return detail::d2d_throughput_grid_avx2(y3, te, out, n);
#endif
    detail::d2d_throughput_grid_scalar(y3, te, out, n);
}

void lambert_wm1(const double* x, double* out, std::size_t n) {
#ifdef WPCN_HAVE_AVX2_KERNELS
    if (active_backend() == Backend::avx2) return detail::lambert_wm1_avx2(x, out, n);
#endif
    detail::lambert_wm1_scalar(x, out, n);
}

void optimal_td_grid(double y1_coeff, double log_y2, const double* te, double* out, std::size_t n) {
#ifdef WPCN_HAVE_AVX2_KERNELS
    if (active_backend() == Backend::avx2) return detail::optimal_td_grid_avx2(y1_coeff, log_y2, te, out, n);
#endif
    detail::optimal_td_grid_scalar(y1_coeff, log_y2, te, out, n);
}

}  // namespace wpcn::kernels
