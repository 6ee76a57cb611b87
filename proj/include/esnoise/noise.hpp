#pragma once

#include <cstdint>
#include <stdexcept>

#include "esnoise/core.hpp"

namespace esnoise {

class NegativeVariance : public std::invalid_argument {
public:
    explicit NegativeVariance(double variance)
        : std::invalid_argument("gaussian variance must be >= 0, got " +
                                std::to_string(variance)) {}
};

// One seedable Gaussian stream, addressed by (seed, trial, neuron). Streams
// with distinct ids under one seed are statistically independent; identical
// (seed, id, draw index) always reproduces the identical value. Counter
// based, so construction is free and trials can run concurrently without
// shared state.
struct NoiseStream {
    uint64_t seed = 0;
    uint32_t trial = 0;
    uint32_t neuron = 0;
    uint64_t next_draw = 0;

    // One draw from N(0, variance); advances the stream by exactly one draw.
    double gaussian(double variance);
};

NoiseStream make_stream(uint64_t seed, uint32_t trial, uint32_t neuron) noexcept;

// The per-neuron noise operator: y = x * (1 + xi_M) + xi_A, consuming one
// draw per enabled source in fixed order (multiplicative, then additive).
// With both sources disabled this is the identity, bit for bit.
double apply_noise(double x, const NoiseSpec& spec, NoiseStream& stream);

}  // namespace esnoise
