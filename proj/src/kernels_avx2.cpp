// AVX2 kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64 and is empty elsewhere; callers reach it only
// through the runtime dispatch in kernels.cpp.

#if defined(__x86_64__) || defined(_M_X64)

#include "wpcn/kernels.hpp"
#include "wpcn/lambert.hpp"

#include <immintrin.h>
#include <cmath>
#include <limits>

namespace wpcn::kernels::detail {
namespace {

constexpr double kInvLn2 = 1.4426950408889634073599246810018921;
constexpr double kNanD = std::numeric_limits<double>::quiet_NaN();

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

// Exact int64 -> double for values in [-2^51, 2^51).
inline __m256d i64_to_pd(__m256i v) {
    const __m256i magic = _mm256_set1_epi64x(0x4338000000000000LL);  // 2^52 + 2^51
    v = _mm256_add_epi64(v, magic);
    return _mm256_sub_pd(_mm256_castsi256_pd(v), _mm256_castsi256_pd(magic));
}

// exp(x) by Cephes-style range reduction x = k*ln2 + r and a Pade form for
// exp(r). The 2^k scale is applied in two halves so results down in the
// subnormal range stay usable. Inputs outside [-708.39, 709.43] saturate.
inline __m256d v_exp(__m256d x) {
    const __m256d hi_cut = set1(709.43);
    const __m256d lo_cut = set1(-708.39);
    const __m256d too_hi = _mm256_cmp_pd(x, hi_cut, _CMP_GT_OQ);
    const __m256d too_lo = _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, lo_cut), hi_cut);

    const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, set1(kInvLn2)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, set1(6.93145751953125e-1), x);
    r = _mm256_fnmadd_pd(k, set1(1.42860682030941723212e-6), r);
    const __m256d r2 = _mm256_mul_pd(r, r);

    __m256d p = set1(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, r2, set1(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, r2, set1(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);
    __m256d q = set1(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, r2, set1(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, r2, set1(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, r2, set1(2.00000000000000000005e0));
    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(set1(2.0), e, set1(1.0));

    const __m128i k32 = _mm256_cvtpd_epi32(k);
    const __m128i k_half32 = _mm_srai_epi32(k32, 1);
    const __m128i k_rest32 = _mm_sub_epi32(k32, k_half32);
    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256d s1 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(k_half32), bias), 52));
    const __m256d s2 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(k_rest32), bias), 52));
    e = _mm256_mul_pd(_mm256_mul_pd(e, s1), s2);

    e = _mm256_andnot_pd(too_lo, e);
    e = _mm256_blendv_pd(e, set1(std::numeric_limits<double>::infinity()), too_hi);
    return e;
}

// log(x) by Cephes-style reduction x = m * 2^k with m in [sqrt(1/2), sqrt(2)).
// Assumes normal positive inputs; callers mask anything else.
inline __m256d v_log(__m256d x) {
    const __m256i xi = _mm256_castpd_si256(x);
    const __m256i exp_field = _mm256_srli_epi64(xi, 52);
    __m256d k = i64_to_pd(_mm256_sub_epi64(exp_field, _mm256_set1_epi64x(1022)));

    const __m256i mant = _mm256_and_si256(xi, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL));
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(mant, _mm256_set1_epi64x(0x3FE0000000000000LL)));

    const __m256d below = _mm256_cmp_pd(m, set1(0.70710678118654752440), _CMP_LT_OQ);
    m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), below);
    k = _mm256_sub_pd(k, _mm256_and_pd(below, set1(1.0)));

    const __m256d z = _mm256_sub_pd(m, set1(1.0));
    const __m256d z2 = _mm256_mul_pd(z, z);

    __m256d p = set1(1.01875663804580931796e-4);
    p = _mm256_fmadd_pd(p, z, set1(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, z, set1(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, z, set1(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, z, set1(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, z, set1(7.70838733755885391666e0));
    __m256d q = set1(1.0);
    q = _mm256_fmadd_pd(q, z, set1(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, z, set1(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, z, set1(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, z, set1(7.11544750618563894466e1));
    q = _mm256_fmadd_pd(q, z, set1(2.31251620126765340583e1));

    __m256d y = _mm256_mul_pd(_mm256_mul_pd(z, z2), _mm256_div_pd(p, q));
    y = _mm256_fmadd_pd(k, set1(-2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(set1(0.5), z2, y);
    y = _mm256_add_pd(z, y);
    return _mm256_fmadd_pd(k, set1(0.693359375), y);
}

// log1p via log(1+x) plus a first-order correction for the rounding of 1+x.
inline __m256d v_log1p(__m256d x) {
    const __m256d one = set1(1.0);
    const __m256d s = _mm256_add_pd(one, x);
    const __m256d corr = _mm256_div_pd(_mm256_sub_pd(x, _mm256_sub_pd(s, one)), s);
    return _mm256_add_pd(v_log(s), corr);
}

// Series about the branch point; p = -sqrt(2*(1 + e*x)) for the lower branch.
inline __m256d v_branch_series(__m256d p) {
    __m256d w = set1(769.0 / 17280.0);
    w = _mm256_fmadd_pd(w, p, set1(-43.0 / 540.0));
    w = _mm256_fmadd_pd(w, p, set1(11.0 / 72.0));
    w = _mm256_fmadd_pd(w, p, set1(-1.0 / 3.0));
    w = _mm256_fmadd_pd(w, p, set1(1.0));
    return _mm256_fmadd_pd(w, p, set1(-1.0));
}

// W_-1 on [-1/e, 0); out-of-domain lanes become NaN. Same scheme as the
// scalar routine: branch series or asymptotic seed, log-form Newton, then
// Halley on w*e^w - x.
inline __m256d v_lambert_wm1(__m256d x) {
    const __m256d bp = set1(lambert_branch_point);
    const __m256d invalid = _mm256_or_pd(
        _mm256_cmp_pd(x, set1(0.0), _CMP_GE_OQ),
        _mm256_cmp_pd(x, set1(lambert_branch_point - lambert_branch_clamp), _CMP_LT_OQ));
    x = _mm256_max_pd(x, bp);  // clamp the tolerated band onto the branch point

    const __m256d kE = set1(2.718281828459045235360287471352662498);
    const __m256d q = _mm256_mul_pd(set1(2.0), _mm256_fmadd_pd(kE, x, set1(1.0)));
    const __m256d qpos = _mm256_max_pd(q, _mm256_setzero_pd());
    const __m256d p = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_sqrt_pd(qpos));
    const __m256d w_series = v_branch_series(p);
    const __m256d near = _mm256_cmp_pd(q, set1(1e-2), _CMP_LT_OQ);
    // Lanes this close to the branch point keep the series value untouched:
    // both Newton and Halley divide by w+1 there.
    const __m256d frozen = _mm256_and_pd(
        near, _mm256_cmp_pd(_mm256_andnot_pd(set1(-0.0), _mm256_add_pd(w_series, set1(1.0))),
                            set1(1e-5), _CMP_LT_OQ));

    const __m256d l1 = v_log(_mm256_sub_pd(_mm256_setzero_pd(), x));
    const __m256d l2 = v_log(_mm256_sub_pd(_mm256_setzero_pd(), l1));
    __m256d w_asym = _mm256_add_pd(_mm256_sub_pd(l1, l2), _mm256_div_pd(l2, l1));
    w_asym = _mm256_blendv_pd(w_asym, set1(-1.5), _mm256_cmp_pd(l1, set1(-2.0), _CMP_GT_OQ));
    __m256d w = _mm256_blendv_pd(w_asym, w_series, near);

    for (int i = 0; i < 5; ++i) {  // Newton on g(w) = w - l1 + log(-w)
        const __m256d g = _mm256_add_pd(_mm256_sub_pd(w, l1),
                                        v_log(_mm256_sub_pd(_mm256_setzero_pd(), w)));
        const __m256d step = _mm256_div_pd(_mm256_mul_pd(g, w), _mm256_add_pd(w, set1(1.0)));
        w = _mm256_sub_pd(w, _mm256_andnot_pd(frozen, step));
    }
    w = _mm256_min_pd(w, set1(-1.0 - 1e-12));  // keep w+1 away from 0 for Halley

    const __m256d tol = _mm256_mul_pd(set1(1e-14),
        _mm256_max_pd(_mm256_andnot_pd(set1(-0.0), x), set1(1e-300)));
    for (int i = 0; i < 4; ++i) {  // Halley on f(w) = w*e^w - x
        const __m256d ew = v_exp(w);
        const __m256d f = _mm256_fmsub_pd(w, ew, x);
        const __m256d absf = _mm256_andnot_pd(set1(-0.0), f);
        const __m256d active = _mm256_andnot_pd(frozen, _mm256_cmp_pd(absf, tol, _CMP_GT_OQ));
        if (_mm256_movemask_pd(active) == 0) break;
        const __m256d wp1 = _mm256_add_pd(w, set1(1.0));
        const __m256d denom = _mm256_fmsub_pd(
            ew, wp1,
            _mm256_div_pd(_mm256_mul_pd(_mm256_add_pd(w, set1(2.0)), f),
                          _mm256_mul_pd(set1(2.0), wp1)));
        const __m256d step = _mm256_and_pd(active, _mm256_div_pd(f, denom));
        w = _mm256_sub_pd(w, step);
    }
    return _mm256_blendv_pd(w, set1(kNanD), invalid);
}

inline __m256d v_d2d(__m256d y3, __m256d te) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = set1(1.0);
    const __m256d boundary = _mm256_or_pd(_mm256_cmp_pd(te, zero, _CMP_EQ_OQ),
                                          _mm256_cmp_pd(te, one, _CMP_EQ_OQ));
    const __m256d invalid = _mm256_or_pd(_mm256_cmp_pd(te, zero, _CMP_LT_OQ),
                                         _mm256_cmp_pd(te, one, _CMP_GT_OQ));
    const __m256d u = _mm256_sub_pd(one, te);
    const __m256d snr = _mm256_div_pd(_mm256_mul_pd(y3, te), u);
    __m256d out = _mm256_mul_pd(u, _mm256_mul_pd(v_log1p(snr), set1(kInvLn2)));
    out = _mm256_andnot_pd(boundary, out);
    return _mm256_blendv_pd(out, set1(kNanD), invalid);
}

}  // namespace

void log2_1p_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(v_log1p(v), set1(kInvLn2)));
    }
    if (i < n) log2_1p_scalar(x + i, out + i, n - i);
}

void d2d_throughput_grid_avx2(double y3, const double* te, double* out, std::size_t n) {
    const __m256d vy3 = set1(y3);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, v_d2d(vy3, _mm256_loadu_pd(te + i)));
    }
    if (i < n) d2d_throughput_grid_scalar(y3, te + i, out + i, n - i);
}

void lambert_wm1_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, v_lambert_wm1(_mm256_loadu_pd(x + i)));
    }
    if (i < n) lambert_wm1_scalar(x + i, out + i, n - i);
}

void optimal_td_grid_avx2(double y1_coeff, double log_y2, const double* te, double* out, std::size_t n) {
    const __m256d one = set1(1.0);
    const __m256d vc = set1(y1_coeff);
    const __m256d vl = set1(log_y2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d te_v = _mm256_loadu_pd(te + i);
        const __m256d invalid = _mm256_or_pd(_mm256_cmp_pd(te_v, _mm256_setzero_pd(), _CMP_LE_OQ),
                                             _mm256_cmp_pd(te_v, one, _CMP_GE_OQ));
        const __m256d om_te = _mm256_sub_pd(one, te_v);
        const __m256d y1 = _mm256_div_pd(_mm256_mul_pd(vc, om_te), te_v);
        const __m256d b = _mm256_mul_pd(y1, vl);
        const __m256d arg = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_setzero_pd(), b),
            v_exp(_mm256_sub_pd(_mm256_setzero_pd(), _mm256_add_pd(b, vl))));
        const __m256d w = v_lambert_wm1(arg);  // NaN lanes propagate
        __m256d td = _mm256_mul_pd(
            om_te, _mm256_add_pd(one, _mm256_div_pd(vl, _mm256_add_pd(w, b))));
        td = _mm256_blendv_pd(td, set1(kNanD), invalid);
        _mm256_storeu_pd(out + i, td);
    }
    if (i < n) optimal_td_grid_scalar(y1_coeff, log_y2, te + i, out + i, n - i);
}

}  // namespace wpcn::kernels::detail

#endif  // x86-64
