// NEON kernel variants for aarch64, bit-compatible with the scalar
// reference (same correctly rounded operations, same accumulation order).

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "esnoise/kernels.hpp"
#include "kernel_primitives.hpp"

namespace esnoise::kernels {
namespace {

using detail::kInvA;
using detail::kInvB;

// Four Philox blocks in SoA form.
struct PhiloxX4 {
    uint32x4_t x0, x1, x2, x3;
};

inline void mulhilo_x4(uint32_t m, uint32x4_t x, uint32x4_t& hi,
                       uint32x4_t& lo) {
    const uint32x2_t mv = vdup_n_u32(m);
    const uint64x2_t p_lo = vmull_u32(mv, vget_low_u32(x));
    const uint64x2_t p_hi = vmull_u32(mv, vget_high_u32(x));
    lo = vcombine_u32(vmovn_u64(p_lo), vmovn_u64(p_hi));
    hi = vcombine_u32(vshrn_n_u64(p_lo, 32), vshrn_n_u64(p_hi, 32));
}

inline void philox10_x4(PhiloxX4& s, uint64_t seed) {
    uint32x4_t k0 = vdupq_n_u32(uint32_t(seed));
    uint32x4_t k1 = vdupq_n_u32(uint32_t(seed >> 32));
    const uint32x4_t w0 = vdupq_n_u32(detail::kPhiloxW0);
    const uint32x4_t w1 = vdupq_n_u32(detail::kPhiloxW1);
    for (int round = 0; round < 10; ++round) {
        uint32x4_t hi0, lo0, hi1, lo1;
        mulhilo_x4(detail::kPhiloxM0, s.x0, hi0, lo0);
        mulhilo_x4(detail::kPhiloxM1, s.x2, hi1, lo1);
        s.x0 = veorq_u32(veorq_u32(hi1, s.x1), k0);
        s.x1 = lo1;
        s.x2 = veorq_u32(veorq_u32(hi0, s.x3), k1);
        s.x3 = lo0;
        k0 = vaddq_u32(k0, w0);
        k1 = vaddq_u32(k1, w1);
    }
}

inline float64x2_t u52x2(uint64x2_t words) {
    const uint64x2_t k = vshrq_n_u64(words, 12);
    const float64x2_t d = vreinterpretq_f64_u64(
        vorrq_u64(k, vdupq_n_u64(0x4330000000000000ull)));
    return vmulq_f64(vsubq_f64(d, vdupq_n_f64(4503599627370495.5)),
                     vdupq_n_f64(0x1p-52));
}

inline float64x2_t horner8x2(const double (&c)[8], float64x2_t r) {
    float64x2_t acc = vdupq_n_f64(c[7]);
    for (int i = 6; i >= 0; --i) acc = vfmaq_f64(vdupq_n_f64(c[i]), acc, r);
    return acc;
}

inline float64x2_t invnorm2(float64x2_t u) {
    const float64x2_t q = vsubq_f64(u, vdupq_n_f64(0.5));
    const float64x2_t aq = vabsq_f64(q);
    const uint64x2_t central = vcleq_f64(aq, vdupq_n_f64(0.425));
    // r = 0.180625 - q*q, single rounding
    const float64x2_t r = vfmsq_f64(vdupq_n_f64(0.180625), q, q);
    const float64x2_t num = horner8x2(kInvA, r);
    const float64x2_t den = horner8x2(kInvB, r);
    float64x2_t res = vmulq_f64(q, vdivq_f64(num, den));
    if ((vgetq_lane_u64(central, 0) & vgetq_lane_u64(central, 1)) !=
        ~uint64_t(0)) {
        double ub[2] = {vgetq_lane_f64(u, 0), vgetq_lane_f64(u, 1)};
        double qb[2] = {vgetq_lane_f64(q, 0), vgetq_lane_f64(q, 1)};
        double rb[2] = {vgetq_lane_f64(res, 0), vgetq_lane_f64(res, 1)};
        if (vgetq_lane_u64(central, 0) == 0)
            rb[0] = detail::invnorm_tail(ub[0], qb[0]);
        if (vgetq_lane_u64(central, 1) == 0)
            rb[1] = detail::invnorm_tail(ub[1], qb[1]);
        res = vld1q_f64(rb);
    }
    return res;
}

inline void store_pair(double* dst, float64x2_t g, double sigma) {
    vst1q_f64(dst, vmulq_f64(g, vdupq_n_f64(sigma)));
}

void gauss_block_neon(uint64_t seed, uint32_t trial, uint64_t block, int n,
                      double sigma0, double sigma1, double* lane0,
                      double* lane1) {
    const uint32x4_t c0 = vdupq_n_u32(uint32_t(block));
    const uint32x4_t c1 = vdupq_n_u32(uint32_t(block >> 32));
    const uint32x4_t c3 = vdupq_n_u32(trial);
    const uint32x4_t ramp = {0u, 1u, 2u, 3u};
    int j = 0;
    for (; j + 4 <= n; j += 4) {
        PhiloxX4 s{c0, c1, vaddq_u32(vdupq_n_u32(uint32_t(j)), ramp), c3};
        philox10_x4(s, seed);

        const uint32x4x2_t z0 = vzipq_u32(s.x0, s.x1);  // words j, j+1 | j+2, j+3
        const uint32x4x2_t z1 = vzipq_u32(s.x2, s.x3);

        if (sigma0 != 0.0) {
            store_pair(lane0 + j,
                       invnorm2(u52x2(vreinterpretq_u64_u32(z0.val[0]))),
                       sigma0);
            store_pair(lane0 + j + 2,
                       invnorm2(u52x2(vreinterpretq_u64_u32(z0.val[1]))),
                       sigma0);
        } else {
            vst1q_f64(lane0 + j, vdupq_n_f64(0.0));
            vst1q_f64(lane0 + j + 2, vdupq_n_f64(0.0));
        }
        if (sigma1 != 0.0) {
            store_pair(lane1 + j,
                       invnorm2(u52x2(vreinterpretq_u64_u32(z1.val[0]))),
                       sigma1);
            store_pair(lane1 + j + 2,
                       invnorm2(u52x2(vreinterpretq_u64_u32(z1.val[1]))),
                       sigma1);
        } else {
            vst1q_f64(lane1 + j, vdupq_n_f64(0.0));
            vst1q_f64(lane1 + j + 2, vdupq_n_f64(0.0));
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

double block_sum_neon(const double* x, int n) {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    const int nb = n & ~3;
    int i = 0;
    for (; i < nb; i += 4) {
        acc01 = vaddq_f64(acc01, vld1q_f64(x + i));
        acc23 = vaddq_f64(acc23, vld1q_f64(x + i + 2));
    }
    double tail[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1),
                      vgetq_lane_f64(acc23, 0), vgetq_lane_f64(acc23, 1)};
    for (; i < n; ++i) tail[i - nb] += x[i];
    return (tail[0] + tail[1]) + (tail[2] + tail[3]);
}

void banded_matvec_neon(const double* ypad, int n, const double* taps,
                        int zeta, double* out) {
    const int width = 2 * zeta;
    int k = 0;
    for (; k + 2 <= n; k += 2) {
        const double* base = ypad + k;
        float64x2_t acc = vdupq_n_f64(0.0);
        for (int m = 0; m <= width; ++m)
            acc = vfmaq_f64(acc, vdupq_n_f64(taps[m]),
                            vld1q_f64(base + (width - m)));
        vst1q_f64(out + k, acc);
    }
    for (; k < n; ++k) {
        const double* base = ypad + k;
        double acc = 0.0;
        for (int m = 0; m <= width; ++m)
            acc = std::fma(taps[m], base[width - m], acc);
        out[k] = acc;
    }
}

void dense_matvec_neon(const double* w, const double* y, int n, double* out) {
    int k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (int j = 0; j < n; ++j)
            acc = vfmaq_f64(acc, vdupq_n_f64(y[j]),
                            vld1q_f64(w + size_t(j) * n + k));
        vst1q_f64(out + k, acc);
    }
    for (; k < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            acc = std::fma(y[j], w[size_t(j) * n + k], acc);
        out[k] = acc;
    }
}

void step_combine_neon(int n, double alpha, double beta_x, double gamma,
                       const double* fb, double fb_uniform, StepMode mode,
                       const double* gm, const double* ga, double* y) {
    const float64x2_t alphav = vdupq_n_f64(alpha);
    const float64x2_t betaxv = vdupq_n_f64(beta_x);
    const float64x2_t gammav = vdupq_n_f64(gamma);
    const float64x2_t fbuv = vdupq_n_f64(fb_uniform);
    int j = 0;
    for (; j + 2 <= n; j += 2) {
        const float64x2_t fbv = fb ? vld1q_f64(fb + j) : fbuv;
        const float64x2_t x =
            vmulq_f64(alphav, vfmaq_f64(betaxv, gammav, fbv));
        float64x2_t out;
        switch (mode) {
            case StepMode::Both:
                out = vaddq_f64(vfmaq_f64(x, x, vld1q_f64(gm + j)),
                                vld1q_f64(ga + j));
                break;
            case StepMode::AddOnly:
                out = vaddq_f64(x, vld1q_f64(ga + j));
                break;
            case StepMode::MulOnly:
                out = vfmaq_f64(x, x, vld1q_f64(gm + j));
                break;
            default:
                out = x;
                break;
        }
        vst1q_f64(y + j, out);
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

void acc_add_neon(double* acc, const double* x, int n) {
    int i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(x + i)));
    for (; i < n; ++i) acc[i] += x[i];
}

void acc_sq_diff_neon(double* acc, const double* x, const double* mean, int n) {
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d =
            vsubq_f64(vld1q_f64(x + i), vld1q_f64(mean + i));
        vst1q_f64(acc + i, vfmaq_f64(vld1q_f64(acc + i), d, d));
    }
    for (; i < n; ++i) {
        const double d = x[i] - mean[i];
        acc[i] = std::fma(d, d, acc[i]);
    }
}

}  // namespace

const KernelTable& neon_table_impl() noexcept {
    static const KernelTable table{
        "neon",
        &gauss_block_neon,
        &block_sum_neon,
        &banded_matvec_neon,
        &dense_matvec_neon,
        &step_combine_neon,
        &acc_add_neon,
        &acc_sq_diff_neon,
    };
    return table;
}

}  // namespace esnoise::kernels

#endif  // aarch64
