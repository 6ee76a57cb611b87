// AVX2/FMA kernel variants. Compiled with -mavx2 -mfma on x86-64 only;
// kernels_dispatch gates the table behind a runtime CPU check. Results are
// bit-identical to the scalar reference: integer work is exact, floating
// point uses the same correctly rounded operations in the same per-element
// order, and reduction tails reuse the scalar stripe scheme.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "esnoise/kernels.hpp"
#include "kernel_primitives.hpp"

namespace esnoise::kernels {
namespace {

using detail::kInvA;
using detail::kInvB;

inline __m256i mulhi32(__m256i m, __m256i x) {
    const __m256i hi_mask = _mm256_set1_epi64x(int64_t(0xFFFFFFFF00000000ull));
    const __m256i even = _mm256_mul_epu32(m, x);
    const __m256i odd = _mm256_mul_epu32(m, _mm256_srli_epi64(x, 32));
    return _mm256_blend_epi32(_mm256_srli_epi64(even, 32),
                              _mm256_and_si256(odd, hi_mask), 0xAA);
}

// Eight Philox blocks in SoA form, counters (c0,c1,c2,c3) per lane.
inline void philox10_x8(__m256i& x0, __m256i& x1, __m256i& x2, __m256i& x3,
                        uint64_t seed) {
    const __m256i m0 = _mm256_set1_epi32(int(detail::kPhiloxM0));
    const __m256i m1 = _mm256_set1_epi32(int(detail::kPhiloxM1));
    __m256i k0 = _mm256_set1_epi32(int(uint32_t(seed)));
    __m256i k1 = _mm256_set1_epi32(int(uint32_t(seed >> 32)));
    const __m256i w0 = _mm256_set1_epi32(int(detail::kPhiloxW0));
    const __m256i w1 = _mm256_set1_epi32(int(detail::kPhiloxW1));
    for (int round = 0; round < 10; ++round) {
        const __m256i lo0 = _mm256_mullo_epi32(m0, x0);
        const __m256i hi0 = mulhi32(m0, x0);
        const __m256i lo1 = _mm256_mullo_epi32(m1, x2);
        const __m256i hi1 = mulhi32(m1, x2);
        x0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), k0);
        x1 = lo1;
        x2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), k1);
        x3 = lo0;
        k0 = _mm256_add_epi32(k0, w0);
        k1 = _mm256_add_epi32(k1, w1);
    }
}

inline __m256d u52x4(__m256i words) {
    const __m256i k = _mm256_srli_epi64(words, 12);
    const __m256d d = _mm256_castsi256_pd(
        _mm256_or_si256(k, _mm256_set1_epi64x(0x4330000000000000ll)));
    return _mm256_mul_pd(_mm256_sub_pd(d, _mm256_set1_pd(4503599627370495.5)),
                         _mm256_set1_pd(0x1p-52));
}

inline __m256d horner8x4(const double (&c)[8], __m256d r) {
    __m256d acc = _mm256_set1_pd(c[7]);
    for (int i = 6; i >= 0; --i)
        acc = _mm256_fmadd_pd(acc, r, _mm256_set1_pd(c[i]));
    return acc;
}

inline __m256d invnorm4(__m256d u) {
    const __m256d q = _mm256_sub_pd(u, _mm256_set1_pd(0.5));
    const __m256d aq =
        _mm256_andnot_pd(_mm256_set1_pd(-0.0), q);
    const __m256d central =
        _mm256_cmp_pd(aq, _mm256_set1_pd(0.425), _CMP_LE_OQ);
    const __m256d r = _mm256_fnmadd_pd(q, q, _mm256_set1_pd(0.180625));
    const __m256d num = horner8x4(kInvA, r);
    const __m256d den = horner8x4(kInvB, r);
    __m256d res = _mm256_mul_pd(q, _mm256_div_pd(num, den));
    const int mask = _mm256_movemask_pd(central);
    if (mask != 0xF) {
        alignas(32) double ub[4], qb[4], rb[4];
        _mm256_store_pd(ub, u);
        _mm256_store_pd(qb, q);
        _mm256_store_pd(rb, res);
        for (int lane = 0; lane < 4; ++lane)
            if (!(mask & (1 << lane)))
                rb[lane] = detail::invnorm_tail(ub[lane], qb[lane]);
        res = _mm256_load_pd(rb);
    }
    return res;
}

inline __m256d scale_or_zero(__m256d g, double sigma) {
    return sigma == 0.0 ? _mm256_setzero_pd()
                        : _mm256_mul_pd(g, _mm256_set1_pd(sigma));
}

void gauss_block_avx2(uint64_t seed, uint32_t trial, uint64_t block, int n,
                      double sigma0, double sigma1, double* lane0,
                      double* lane1) {
    const __m256i c0 = _mm256_set1_epi32(int(uint32_t(block)));
    const __m256i c1 = _mm256_set1_epi32(int(uint32_t(block >> 32)));
    const __m256i c3 = _mm256_set1_epi32(int(trial));
    int j = 0;
    for (; j + 8 <= n; j += 8) {
        __m256i x0 = c0, x1 = c1, x3 = c3;
        __m256i x2 = _mm256_add_epi32(_mm256_set1_epi32(j),
                                      _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7));
        philox10_x8(x0, x1, x2, x3, seed);

        // Interleave the 32-bit words into per-lane 64-bit draws; the
        // unpack yields js {0,1,4,5} then {2,3,6,7}, reordered to
        // contiguous below.
        const __m256i w0a = _mm256_unpacklo_epi32(x0, x1);
        const __m256i w0b = _mm256_unpackhi_epi32(x0, x1);
        const __m256i w1a = _mm256_unpacklo_epi32(x2, x3);
        const __m256i w1b = _mm256_unpackhi_epi32(x2, x3);

        if (sigma0 != 0.0) {
            const __m256d ga = invnorm4(u52x4(w0a));
            const __m256d gb = invnorm4(u52x4(w0b));
            const __m256d lo = _mm256_permute2f128_pd(ga, gb, 0x20);
            const __m256d hi = _mm256_permute2f128_pd(ga, gb, 0x31);
            _mm256_storeu_pd(lane0 + j, scale_or_zero(lo, sigma0));
            _mm256_storeu_pd(lane0 + j + 4, scale_or_zero(hi, sigma0));
        } else {
            _mm256_storeu_pd(lane0 + j, _mm256_setzero_pd());
            _mm256_storeu_pd(lane0 + j + 4, _mm256_setzero_pd());
        }
        if (sigma1 != 0.0) {
            const __m256d ga = invnorm4(u52x4(w1a));
            const __m256d gb = invnorm4(u52x4(w1b));
            const __m256d lo = _mm256_permute2f128_pd(ga, gb, 0x20);
            const __m256d hi = _mm256_permute2f128_pd(ga, gb, 0x31);
            _mm256_storeu_pd(lane1 + j, scale_or_zero(lo, sigma1));
            _mm256_storeu_pd(lane1 + j + 4, scale_or_zero(hi, sigma1));
        } else {
            _mm256_storeu_pd(lane1 + j, _mm256_setzero_pd());
            _mm256_storeu_pd(lane1 + j + 4, _mm256_setzero_pd());
        }
    }
    for (; j < n; ++j) {
        const PhiloxCtr r = detail::stream_block(seed, trial, uint32_t(j), block);
        lane0[j] = sigma0 == 0.0
                       ? 0.0
                       : detail::invnorm(detail::u52(detail::lane_word(r, 0))) * sigma0;
        lane1[j] = sigma1 == 0.0
                       ? 0.0
                       : detail::invnorm(detail::u52(detail::lane_word(r, 1))) * sigma1;
    }
}

double block_sum_avx2(const double* x, int n) {
    __m256d vacc = _mm256_setzero_pd();
    const int nb = n & ~3;
    int i = 0;
    for (; i < nb; i += 4) vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
    alignas(32) double tail[4];
    _mm256_store_pd(tail, vacc);
    for (; i < n; ++i) tail[i - nb] += x[i];
    return (tail[0] + tail[1]) + (tail[2] + tail[3]);
}

void banded_matvec_avx2(const double* ypad, int n, const double* taps,
                        int zeta, double* out) {
    const int width = 2 * zeta;
    int k = 0;
    for (; k + 4 <= n; k += 4) {
        const double* base = ypad + k;
        __m256d acc = _mm256_setzero_pd();
        for (int m = 0; m <= width; ++m)
            acc = _mm256_fmadd_pd(_mm256_set1_pd(taps[m]),
                                  _mm256_loadu_pd(base + (width - m)), acc);
        _mm256_storeu_pd(out + k, acc);
    }
    for (; k < n; ++k) {
        const double* base = ypad + k;
        double acc = 0.0;
        for (int m = 0; m <= width; ++m)
            acc = std::fma(taps[m], base[width - m], acc);
        out[k] = acc;
    }
}

void dense_matvec_avx2(const double* w, const double* y, int n, double* out) {
    int k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (int j = 0; j < n; ++j)
            acc = _mm256_fmadd_pd(_mm256_set1_pd(y[j]),
                                  _mm256_loadu_pd(w + size_t(j) * n + k), acc);
        _mm256_storeu_pd(out + k, acc);
    }
    for (; k < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            acc = std::fma(y[j], w[size_t(j) * n + k], acc);
        out[k] = acc;
    }
}

inline __m256d preactivation4(__m256d fbv, __m256d gammav, __m256d betaxv,
                              __m256d alphav) {
    return _mm256_mul_pd(alphav, _mm256_fmadd_pd(gammav, fbv, betaxv));
}

void step_combine_avx2(int n, double alpha, double beta_x, double gamma,
                       const double* fb, double fb_uniform, StepMode mode,
                       const double* gm, const double* ga, double* y) {
    const __m256d alphav = _mm256_set1_pd(alpha);
    const __m256d betaxv = _mm256_set1_pd(beta_x);
    const __m256d gammav = _mm256_set1_pd(gamma);
    const __m256d fbuv = _mm256_set1_pd(fb_uniform);
    int j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d fbv = fb ? _mm256_loadu_pd(fb + j) : fbuv;
        const __m256d x = preactivation4(fbv, gammav, betaxv, alphav);
        __m256d out;
        switch (mode) {
            case StepMode::Both:
                out = _mm256_add_pd(
                    _mm256_fmadd_pd(x, _mm256_loadu_pd(gm + j), x),
                    _mm256_loadu_pd(ga + j));
                break;
            case StepMode::AddOnly:
                out = _mm256_add_pd(x, _mm256_loadu_pd(ga + j));
                break;
            case StepMode::MulOnly:
                out = _mm256_fmadd_pd(x, _mm256_loadu_pd(gm + j), x);
                break;
            default:
                out = x;
                break;
        }
        _mm256_storeu_pd(y + j, out);
    }
    for (; j < n; ++j) {
        const double x = alpha * std::fma(gamma, fb ? fb[j] : fb_uniform, beta_x);
        switch (mode) {
            case StepMode::Both: y[j] = std::fma(x, gm[j], x) + ga[j]; break;
            case StepMode::AddOnly: y[j] = x + ga[j]; break;
            case StepMode::MulOnly: y[j] = std::fma(x, gm[j], x); break;
            default: y[j] = x; break;
        }
    }
}

void acc_add_avx2(double* acc, const double* x, int n) {
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i),
                                                _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) acc[i] += x[i];
}

void acc_sq_diff_avx2(double* acc, const double* x, const double* mean, int n) {
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mean + i));
        _mm256_storeu_pd(acc + i,
                         _mm256_fmadd_pd(d, d, _mm256_loadu_pd(acc + i)));
    }
    for (; i < n; ++i) {
        const double d = x[i] - mean[i];
        acc[i] = std::fma(d, d, acc[i]);
    }
}

}  // namespace

const KernelTable& avx2_table_impl() noexcept {
    static const KernelTable table{
        "avx2",
        &gauss_block_avx2,
        &block_sum_avx2,
        &banded_matvec_avx2,
        &dense_matvec_avx2,
        &step_combine_avx2,
        &acc_add_avx2,
        &acc_sq_diff_avx2,
    };
    return table;
}

}  // namespace esnoise::kernels

#endif  // x86-64
