#include "esnoise/noise.hpp"

#include <cmath>

#include "esnoise/kernels.hpp"

namespace esnoise {

NoiseStream make_stream(uint64_t seed, uint32_t trial, uint32_t neuron) noexcept {
    return NoiseStream{seed, trial, neuron, 0};
}

double NoiseStream::gaussian(double variance) {
    if (!(variance >= 0.0)) throw NegativeVariance(variance);
    const uint64_t index = next_draw++;
    if (variance == 0.0) return 0.0;
    return kernels::gauss_draw(seed, trial, neuron, index, std::sqrt(variance));
}

double apply_noise(double x, const NoiseSpec& spec, NoiseStream& stream) {
    double y = x;
    if (spec.multiplicative_enabled) {
        const double xi_m = stream.gaussian(spec.d_mul);
        y = std::fma(x, xi_m, x);
    }
    if (spec.additive_enabled) {
        y += stream.gaussian(spec.d_add);
    }
    return y;
}

}  // namespace esnoise
