#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

// Arithmetic kernels for the simulation inner loops. Every kernel has a
// scalar reference implementation and, where the hardware allows, SIMD
// variants (AVX2 on x86-64, NEON on aarch64) selected at runtime.
//
// The scalar reference defines the result bit for bit: SIMD variants must
// produce identical doubles for identical inputs, which the test suite
// asserts. This is what makes results reproducible regardless of which
// variant the dispatcher picks. The contract relies on three things:
// integer operations are exact, IEEE +,-,*,/,sqrt and fused multiply-add
// are correctly rounded everywhere, and reductions fix one summation order
// (four interleaved accumulators combined as (s0+s1)+(s2+s3)).

namespace esnoise::kernels {

struct PhiloxCtr {
    uint32_t c0, c1, c2, c3;
};
struct PhiloxKey {
    uint32_t k0, k1;
};

// Philox-4x32, 10 rounds (Salmon et al., SC'11). Counter-based: the output
// depends only on (ctr, key), so any draw can be addressed directly.
PhiloxCtr philox4x32_10(PhiloxCtr ctr, PhiloxKey key) noexcept;

// Map 64 random bits to the open interval (0, 1): u = (k + 1/2) * 2^-52
// with k the top 52 bits. Exact, symmetric (1-u is also representable),
// never 0 or 1.
double uniform52(uint64_t bits) noexcept;

// Inverse standard normal CDF (Wichura's AS 241, double precision).
double inv_normal_cdf(double u) noexcept;

// Draw `index` of the Gaussian stream identified by (seed, trial, neuron),
// scaled by sigma. Draws 2m and 2m+1 share Philox block m.
double gauss_draw(uint64_t seed, uint32_t trial, uint32_t neuron,
                  uint64_t index, double sigma) noexcept;

// Trial index reserved for input-signal generation; trial streams must
// stay below it.
inline constexpr uint32_t kSignalTrialId = 0x80000000u;

// How a reservoir update consumes noise. Values double as draw counts per
// step for the enabled sources.
enum class StepMode : int { None = 0, AddOnly = 1, MulOnly = 2, Both = 3 };

struct KernelTable {
    const char* name;

    // Lanes 0 and 1 of Philox block `block` for neurons 0..n-1 of
    // (seed, trial), scaled by sigma0 / sigma1. sigma == 0 yields +0.0.
    void (*gauss_block)(uint64_t seed, uint32_t trial, uint64_t block, int n,
                        double sigma0, double sigma1, double* lane0,
                        double* lane1);

    // Striped 4-accumulator sum, combined as (s0+s1)+(s2+s3).
    double (*block_sum)(const double* x, int n);

    // Banded circulant product: out[k] = sum_m taps[m] * ypad[k + 2*zeta - m]
    // where ypad carries zeta halo entries on each side of the n state
    // values (wrap copies or zeros, chosen by the caller).
    void (*banded_matvec)(const double* ypad, int n, const double* taps,
                          int zeta, double* out);

    // out[k] = sum_j y[j] * w[j*n + k], j ascending (row-vector times
    // matrix, row-major storage).
    void (*dense_matvec)(const double* w, const double* y, int n, double* out);

    // Fused reservoir update: per neuron j,
    //   x = alpha * fma(gamma, fb_j, beta_x)
    //   Both:    y = fma(x, gm_j, x) + ga_j
    //   AddOnly: y = x + ga_j
    //   MulOnly: y = fma(x, gm_j, x)
    //   None:    y = x
    // fb == nullptr broadcasts fb_uniform to every neuron.
    void (*step_combine)(int n, double alpha, double beta_x, double gamma,
                         const double* fb, double fb_uniform, StepMode mode,
                         const double* gm, const double* ga, double* y);

    // acc[i] += x[i]
    void (*acc_add)(double* acc, const double* x, int n);
    // acc[i] += (x[i] - mean[i])^2, via fma
    void (*acc_sq_diff)(double* acc, const double* x, const double* mean,
                        int n);
};

const KernelTable& scalar_table() noexcept;

// Null when the build target or the running CPU lacks the extension.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

// Every variant usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

// Active variant used by the simulation paths. Defaults to the widest
// available. set_active accepts "auto", "scalar", "avx2" or "neon" and
// throws std::invalid_argument if the request cannot be honored.
const KernelTable& active_table() noexcept;
void set_active_table(std::string_view name);

}  // namespace esnoise::kernels
