#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

#include "esnoise/kernels.hpp"

// Scalar building blocks shared by the kernel variants. SIMD code may
// inline these; every operation is either exact (integer, power-of-two
// scaling) or correctly rounded (+,-,*,/,sqrt, std::fma), so the value is
// the same wherever it is compiled. Builds use -ffp-contract=off, so only
// the explicit std::fma calls fuse.

namespace esnoise::kernels::detail {

inline constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline PhiloxCtr philox_round(PhiloxCtr c, PhiloxKey k) noexcept {
    const uint64_t p0 = uint64_t(kPhiloxM0) * c.c0;
    const uint64_t p1 = uint64_t(kPhiloxM1) * c.c2;
    return PhiloxCtr{
        uint32_t(p1 >> 32) ^ c.c1 ^ k.k0,
        uint32_t(p1),
        uint32_t(p0 >> 32) ^ c.c3 ^ k.k1,
        uint32_t(p0),
    };
}

inline PhiloxCtr philox10(PhiloxCtr c, PhiloxKey k) noexcept {
    for (int round = 0; round < 10; ++round) {
        c = philox_round(c, k);
        k.k0 += kPhiloxW0;
        k.k1 += kPhiloxW1;
    }
    return c;
}

// (k + 1/2) * 2^-52 with k the top 52 bits: or the bits into the exponent
// of 2^52, subtract 2^52 - 1/2 (exact), scale by 2^-52 (exact).
inline double u52(uint64_t bits) noexcept {
    const uint64_t k = bits >> 12;
    const double d = std::bit_cast<double>(k | 0x4330000000000000ull);
    return (d - 4503599627370495.5) * 0x1p-52;
}

// AS 241 (PPND16) rational approximations.
inline constexpr double kInvA[8] = {
    3.3871328727963666080e0,  1.3314166789178437745e2,
    1.9715909503065514427e3,  1.3731693765509461125e4,
    4.5921953931549871457e4,  6.7265770927008700853e4,
    3.3430575583588128105e4,  2.5090809287301226727e3};
inline constexpr double kInvB[8] = {
    1.0,                      4.2313330701600911252e1,
    6.8718700749205790830e2,  5.3941960214247511077e3,
    2.1213794301586595867e4,  3.9307895800092710610e4,
    2.8729085735721942674e4,  5.2264952788528545610e3};
inline constexpr double kInvC[8] = {
    1.42343711074968357734e0, 4.63033784615654529590e0,
    5.76949722146069140550e0, 3.64784832476320460504e0,
    1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
inline constexpr double kInvD[8] = {
    1.0,                      2.05319162663775882187e0,
    1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9};
inline constexpr double kInvE[8] = {
    6.65790464350110377720e0, 5.46378491116411436990e0,
    1.78482653991729133580e0, 2.96560571828504891230e-1,
    2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
inline constexpr double kInvF[8] = {
    1.0,                      5.99832206555887937690e-1,
    1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15};

inline double horner8(const double (&c)[8], double r) noexcept {
    double acc = c[7];
    for (int i = 6; i >= 0; --i) acc = std::fma(acc, r, c[i]);
    return acc;
}

// Tail branch of the inverse normal CDF, |u - 1/2| > 0.425. Shared with
// the SIMD paths, which fall back to it lane by lane.
inline double invnorm_tail(double u, double q) noexcept {
    double r = (q < 0.0) ? u : 1.0 - u;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = horner8(kInvC, r) / horner8(kInvD, r);
    } else {
        r -= 5.0;
        val = horner8(kInvE, r) / horner8(kInvF, r);
    }
    return (q < 0.0) ? -val : val;
}

inline double invnorm(double u) noexcept {
    const double q = u - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = std::fma(-q, q, 0.180625);
        return q * (horner8(kInvA, r) / horner8(kInvB, r));
    }
    return invnorm_tail(u, q);
}

inline PhiloxCtr stream_block(uint64_t seed, uint32_t trial, uint32_t neuron,
                              uint64_t block) noexcept {
    const PhiloxCtr ctr{uint32_t(block), uint32_t(block >> 32), neuron, trial};
    const PhiloxKey key{uint32_t(seed), uint32_t(seed >> 32)};
    return philox10(ctr, key);
}

inline uint64_t lane_word(const PhiloxCtr& r, unsigned lane) noexcept {
    return lane == 0 ? (uint64_t(r.c1) << 32) | r.c0
                     : (uint64_t(r.c3) << 32) | r.c2;
}

}  // namespace esnoise::kernels::detail
