#include <cmath>

#include "esnoise/kernels.hpp"
#include "kernel_primitives.hpp"

// Scalar reference kernels. These define the canonical arithmetic: the
// SIMD variants must reproduce them bit for bit (see kernels_test).

namespace esnoise::kernels {

namespace detail {

void gauss_block_scalar(uint64_t seed, uint32_t trial, uint64_t block, int n,
                        double sigma0, double sigma1, double* lane0,
                        double* lane1) {
    for (int j = 0; j < n; ++j) {
        const PhiloxCtr r = stream_block(seed, trial, uint32_t(j), block);
        lane0[j] = sigma0 == 0.0 ? 0.0 : invnorm(u52(lane_word(r, 0))) * sigma0;
        lane1[j] = sigma1 == 0.0 ? 0.0 : invnorm(u52(lane_word(r, 1))) * sigma1;
    }
}

double block_sum_scalar(const double* x, int n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    const int nb = n & ~3;
    int i = 0;
    for (; i < nb; i += 4) {
        s0 += x[i];
        s1 += x[i + 1];
        s2 += x[i + 2];
        s3 += x[i + 3];
    }
    double tail[4] = {s0, s1, s2, s3};
    for (; i < n; ++i) tail[i - nb] += x[i];
    return (tail[0] + tail[1]) + (tail[2] + tail[3]);
}

void banded_matvec_scalar(const double* ypad, int n, const double* taps,
                          int zeta, double* out) {
    const int width = 2 * zeta;
    for (int k = 0; k < n; ++k) {
        const double* base = ypad + k;
        double acc = 0.0;
        for (int m = 0; m <= width; ++m)
            acc = std::fma(taps[m], base[width - m], acc);
        out[k] = acc;
    }
}

void dense_matvec_scalar(const double* w, const double* y, int n, double* out) {
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            acc = std::fma(y[j], w[size_t(j) * n + k], acc);
        out[k] = acc;
    }
}

void step_combine_scalar(int n, double alpha, double beta_x, double gamma,
                         const double* fb, double fb_uniform, StepMode mode,
                         const double* gm, const double* ga, double* y) {
    switch (mode) {
        case StepMode::Both:
            for (int j = 0; j < n; ++j) {
                const double x =
                    alpha * std::fma(gamma, fb ? fb[j] : fb_uniform, beta_x);
                y[j] = std::fma(x, gm[j], x) + ga[j];
            }
            break;
        case StepMode::AddOnly:
            for (int j = 0; j < n; ++j) {
                const double x =
                    alpha * std::fma(gamma, fb ? fb[j] : fb_uniform, beta_x);
                y[j] = x + ga[j];
            }
            break;
        case StepMode::MulOnly:
            for (int j = 0; j < n; ++j) {
                const double x =
                    alpha * std::fma(gamma, fb ? fb[j] : fb_uniform, beta_x);
                y[j] = std::fma(x, gm[j], x);
            }
            break;
        case StepMode::None:
            for (int j = 0; j < n; ++j)
                y[j] = alpha * std::fma(gamma, fb ? fb[j] : fb_uniform, beta_x);
            break;
    }
}

void acc_add_scalar(double* acc, const double* x, int n) {
    for (int i = 0; i < n; ++i) acc[i] += x[i];
}

void acc_sq_diff_scalar(double* acc, const double* x, const double* mean,
                        int n) {
    for (int i = 0; i < n; ++i) {
        const double d = x[i] - mean[i];
        acc[i] = std::fma(d, d, acc[i]);
    }
}

}  // namespace detail

PhiloxCtr philox4x32_10(PhiloxCtr ctr, PhiloxKey key) noexcept {
    return detail::philox10(ctr, key);
}

double uniform52(uint64_t bits) noexcept { return detail::u52(bits); }

double inv_normal_cdf(double u) noexcept { return detail::invnorm(u); }

double gauss_draw(uint64_t seed, uint32_t trial, uint32_t neuron,
                  uint64_t index, double sigma) noexcept {
    if (sigma == 0.0) return 0.0;
    const PhiloxCtr r = detail::stream_block(seed, trial, neuron, index >> 1);
    return detail::invnorm(detail::u52(detail::lane_word(r, unsigned(index & 1)))) *
           sigma;
}

const KernelTable& scalar_table() noexcept {
    static const KernelTable table{
        "scalar",
        &detail::gauss_block_scalar,
        &detail::block_sum_scalar,
        &detail::banded_matvec_scalar,
        &detail::dense_matvec_scalar,
        &detail::step_combine_scalar,
        &detail::acc_add_scalar,
        &detail::acc_sq_diff_scalar,
    };
    return table;
}

}  // namespace esnoise::kernels
