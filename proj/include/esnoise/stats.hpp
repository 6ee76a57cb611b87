#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "esnoise/core.hpp"
#include "esnoise/dynamics.hpp"

namespace esnoise {

class GammaNotZero : public std::invalid_argument {
public:
    explicit GammaNotZero(double gamma)
        : std::invalid_argument(
              "closed form only covers the memoryless case, gamma = " +
              std::to_string(gamma)) {}
};

// Per-time-step ensemble statistics over K independent noisy trials.
// snr[t] = mean[t] / dispersion[t]; where the dispersion is 0 the SNR is
// flagged undefined (snr_defined[t] == 0) and stored as NaN, never inf.
struct EnsembleStats {
    std::vector<double> mean;
    std::vector<double> dispersion;  // unbiased sample variance, divisor K-1
    std::vector<double> snr;
    std::vector<uint8_t> snr_defined;
    int trials = 0;
};

// K trajectories with the identical input signal and independent noise
// substreams (trial ids 0..K-1), each restarted from the zero state.
// Trials are distributed over `workers` threads (0 = hardware default);
// the reduction uses one fixed summation order, so the result is the same
// for any worker count.
EnsembleStats ensemble(const SimConfig& config, int trials, int workers = 0);

// Closed-form output variance of one noisy neuron:
//   d_add + d_mul * (alpha * x_in)^2, enabled sources only.
double predict_variance_single(const NoiseSpec& spec, Activation activation,
                               double x_in);

// Memoryless ESN: per-neuron noise is independent, so the uniform readout
// divides the single-neuron variance by N. Throws GammaNotZero otherwise.
double predict_variance_esn_no_memory(const NoiseSpec& spec,
                                      const EsnParams& params, double x_in);

struct GammaSweepPoint {
    double gamma;
    double additive_level;  // time-averaged additive-only dispersion
    double mul_min;         // elementwise range of multiplicative-only
    double mul_max;         //   dispersion after the transient
};

// For each gamma (beta = 1-gamma): additive-only and multiplicative-only
// ensembles on the configured signal. discard < 0 selects the default
// transient (one sine period; 0 for other signals).
std::vector<GammaSweepPoint> sweep_gamma(const SimConfig& base,
                                         std::span<const double> gammas,
                                         int trials, int discard = -1,
                                         int workers = 0);

struct AlphaInputCell {
    double alpha;
    double x_in;
    NoiseMode mode;
    double mean;
    double dispersion;
    double snr;
    bool snr_defined;
};

// Single-neuron ensembles over the (alpha, x_in) grid for the three noise
// modes, row-major over (mode, alpha, x).
std::vector<AlphaInputCell> sweep_alpha_input(std::span<const double> alphas,
                                              std::span<const double> xs,
                                              const NoiseSpec& spec, int trials,
                                              uint64_t seed, int workers = 0);

}  // namespace esnoise
