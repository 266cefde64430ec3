#pragma once

#include <cstddef>

// Batched arithmetic kernels behind the optimizer's dense-grid oracles: the
// exhaustive mode-vector search and the grid scans that cross-check the
// closed-form time allocations evaluate these formulas millions of times.
//
// Each kernel has a scalar reference implementation and may have a SIMD
// variant; the active backend is picked once at startup from CPU features
// (override with set_backend() or the WPCN_KERNELS environment variable,
// value "scalar" or "avx2"). Variants are equivalence-tested against the
// scalar reference. Out-of-domain elements yield NaN rather than throwing.

namespace wpcn::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);

/// Returns false (and leaves the backend unchanged) when the requested
/// backend is not available on this CPU or in this build.
bool set_backend(Backend b);

/// out[i] = log2(1 + x[i]) for x[i] > -1.
void log2_1p(const double* x, double* out, std::size_t n);

/// out[i] = (1 - te[i]) * log2(1 + y3 * te[i] / (1 - te[i])).
/// te in [0, 1]; both endpoints evaluate to the analytic limit 0.
void d2d_throughput_grid(double y3, const double* te, double* out, std::size_t n);

/// Lower real branch of the Lambert function, elementwise.
/// Domain is [-1/e, 0); elements outside it produce NaN.
void lambert_wm1(const double* x, double* out, std::size_t n);

/// Closed-form downlink time split on a t_e grid for one link.
/// y1_coeff = sigma^2 / (theta*eta*rho*P0*H_T^2) so Y1 = y1_coeff*(1-te)/te,
/// log_y2 = ln(1 + P0*phi*H_R/sigma^2). te must lie strictly inside (0, 1).
void optimal_td_grid(double y1_coeff, double log_y2, const double* te, double* out, std::size_t n);

namespace detail {
// Scalar reference implementations: always available, and the oracle the
// SIMD variants are equivalence-tested against.
void log2_1p_scalar(const double* x, double* out, std::size_t n);
void d2d_throughput_grid_scalar(double y3, const double* te, double* out, std::size_t n);
void lambert_wm1_scalar(const double* x, double* out, std::size_t n);
void optimal_td_grid_scalar(double y1_coeff, double log_y2, const double* te, double* out, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
#define WPCN_HAVE_AVX2_KERNELS 1
void log2_1p_avx2(const double* x, double* out, std::size_t n);
void d2d_throughput_grid_avx2(double y3, const double* te, double* out, std::size_t n);
void lambert_wm1_avx2(const double* x, double* out, std::size_t n);
void optimal_td_grid_avx2(double y1_coeff, double log_y2, const double* te, double* out, std::size_t n);
#endif
}  // namespace detail

}  // namespace wpcn::kernels
