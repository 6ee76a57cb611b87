#include "esnoise/core.hpp"

#include <cmath>
#include <numbers>

#include "esnoise/kernels.hpp"

namespace esnoise {

const char* to_string(NoiseMode mode) noexcept {
    switch (mode) {
        case NoiseMode::Additive: return "additive";
        case NoiseMode::Multiplicative: return "multiplicative";
        case NoiseMode::Mixed: return "mixed";
    }
    return "?";
}

NoiseSpec with_mode(const NoiseSpec& spec, NoiseMode mode) noexcept {
    NoiseSpec out = spec;
    out.additive_enabled = mode != NoiseMode::Multiplicative;
    out.multiplicative_enabled = mode != NoiseMode::Additive;
    return out;
}

Defaults paper_defaults() {
    Defaults d;
    d.noise = NoiseSpec{1e-2, 1e-2, true, true};
    d.params = EsnParams{100, 1.0, 0.0, Activation{1.0}};
    d.signal = SignalSpec{};  // uniform random on [-1, 1], length 200
    return d;
}

void validate(const EsnParams& params) {
    if (params.n_reservoir < 1)
        throw ConstraintViolation("n_reservoir_min",
                                  "n_reservoir must be >= 1, got " +
                                      std::to_string(params.n_reservoir));
    if (!std::isfinite(params.beta) || !std::isfinite(params.gamma) ||
        !std::isfinite(params.activation.slope))
        throw ConstraintViolation("non_finite", "beta/gamma/slope must be finite");
    if (params.beta < 0.0 || params.beta > 1.0)
        throw ConstraintViolation("beta_range", "beta must lie in [0,1], got " +
                                                    std::to_string(params.beta));
    if (params.gamma < 0.0 || params.gamma > 1.0)
        throw ConstraintViolation("gamma_range",
                                  "gamma must lie in [0,1], got " +
                                      std::to_string(params.gamma));
    if (std::fabs(params.beta + params.gamma - 1.0) > 1e-12)
        throw ConstraintViolation(
            "beta_gamma_sum", "beta + gamma must equal 1, got " +
                                  std::to_string(params.beta + params.gamma));
}

void validate(const NoiseSpec& noise) {
    if (!std::isfinite(noise.d_add) || !std::isfinite(noise.d_mul))
        throw ConstraintViolation("non_finite", "variances must be finite");
    if (noise.d_add < 0.0 || noise.d_mul < 0.0)
        throw ConstraintViolation("negative_variance",
                                  "variances must be >= 0, got d_add=" +
                                      std::to_string(noise.d_add) + " d_mul=" +
                                      std::to_string(noise.d_mul));
}

void validate(const SignalSpec& signal) {
    if (signal.length < 1)
        throw ConstraintViolation("signal_length", "length must be >= 1, got " +
                                                       std::to_string(signal.length));
    switch (signal.kind) {
        case SignalSpec::Kind::UniformRandom:
            if (!(signal.lo <= signal.hi))
                throw ConstraintViolation("signal_bounds", "need lo <= hi");
            break;
        case SignalSpec::Kind::Sine:
            if (!(signal.period > 0.0))
                throw ConstraintViolation("signal_period", "period must be > 0");
            break;
        case SignalSpec::Kind::Explicit:
            if (signal.samples.empty())
                throw ConstraintViolation("signal_samples",
                                          "explicit signal needs samples");
            if (int(signal.samples.size()) != signal.length)
                throw ConstraintViolation(
                    "signal_length", "length must match the sample count");
            break;
    }
}

void validate(const EsnParams& params, const NoiseSpec& noise) {
    validate(params);
    validate(noise);
}

std::vector<double> materialize(const SignalSpec& signal) {
    validate(signal);
    std::vector<double> x(size_t(signal.length));
    switch (signal.kind) {
        case SignalSpec::Kind::UniformRandom: {
            const double span = signal.hi - signal.lo;
            for (int t = 0; t < signal.length; ++t) {
                const kernels::PhiloxCtr r = kernels::philox4x32_10(
                    {uint32_t(uint64_t(t) >> 1), 0, 0, kernels::kSignalTrialId},
                    {uint32_t(signal.seed), uint32_t(signal.seed >> 32)});
                const uint64_t word =
                    (t & 1) ? (uint64_t(r.c3) << 32) | r.c2
                            : (uint64_t(r.c1) << 32) | r.c0;
                x[size_t(t)] = signal.lo + kernels::uniform52(word) * span;
            }
            break;
        }
        case SignalSpec::Kind::Sine: {
            const double w = 2.0 * std::numbers::pi / signal.period;
            for (int t = 0; t < signal.length; ++t)
                x[size_t(t)] = signal.amplitude * std::sin(w * t + signal.phase);
            break;
        }
        case SignalSpec::Kind::Explicit:
            x = signal.samples;
            break;
    }
    return x;
}

int default_transient_discard(const SignalSpec& signal) noexcept {
    if (signal.kind != SignalSpec::Kind::Sine) return 0;
    const int period = int(std::lround(signal.period));
    if (period < 0) return 0;
    return period < signal.length ? period : signal.length - 1;
}

}  // namespace esnoise
